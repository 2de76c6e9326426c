#include "dcqaoa/opt.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dcqaoa {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": size mismatch");
  }
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double cost(const AnsatzSpec& spec, const ParameterVector& params,
            const ModelTriple& model) {
  return CompiledAnsatz(spec, model).cost(params);
}

double approximation_ratio(double F, double E0) {
  if (E0 == 0.0) {
    throw std::domain_error("approximation ratio undefined for E0 = 0");
  }
  return F / E0;
}

std::vector<double> gradient(const AnsatzSpec& spec,
                             const ParameterVector& params,
                             const ModelTriple& model) {
  return CompiledAnsatz(spec, model).cost_and_gradient(params).gradient;
}

std::string to_string(Method m) {
  return m == Method::Momentum ? "momentum" : "adagrad";
}

Method method_from_string(const std::string& name) {
  if (name == "momentum") return Method::Momentum;
  if (name == "adagrad") return Method::Adagrad;
  throw std::invalid_argument("unknown optimizer '" + name + "'");
}

std::string to_string(Status s) {
  return s == Status::Converged ? "converged" : "max_iter";
}

OptimizerConfig OptimizerConfig::defaults(Method method) {
  OptimizerConfig c;
  c.method = method;
  c.learning_rate = method == Method::Momentum ? 0.01 : 0.05;
  return c;
}

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("optimizer: learning rate must be positive");
  }
  if (method == Method::Momentum && !(momentum >= 0.0 && momentum < 1.0)) {
    throw std::invalid_argument("optimizer: momentum must lie in [0, 1)");
  }
  if (method == Method::Adagrad && !(epsilon > 0.0)) {
    throw std::invalid_argument("optimizer: epsilon must be positive");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("optimizer: max_iterations must be >= 1");
  }
  if (!(gradient_tolerance > 0.0)) {
    throw std::invalid_argument("optimizer: gradient tolerance must be positive");
  }
  if (const auto* u = std::get_if<UniformInit>(&init); u && !(u->lo <= u->hi)) {
    throw std::invalid_argument("optimizer: init range is empty");
  }
}

StepResult step_momentum(std::span<const double> params,
                         std::span<const double> grad,
                         const StepperState& state,
                         const OptimizerConfig& config) {
  require_same_size(params.size(), grad.size(), "step_momentum");
  StepResult out{{params.begin(), params.end()}, state};
  auto& v = out.state.accumulator;
  if (v.empty()) v.assign(params.size(), 0.0);
  require_same_size(v.size(), params.size(), "step_momentum");
  for (std::size_t k = 0; k < params.size(); ++k) {
    v[k] = config.momentum * v[k] - config.learning_rate * grad[k];
    out.params[k] += v[k];
  }
  return out;
}

StepResult step_adagrad(std::span<const double> params,
                        std::span<const double> grad,
                        const StepperState& state,
                        const OptimizerConfig& config) {
  require_same_size(params.size(), grad.size(), "step_adagrad");
  StepResult out{{params.begin(), params.end()}, state};
  auto& G = out.state.accumulator;
  if (G.empty()) G.assign(params.size(), 0.0);
  require_same_size(G.size(), params.size(), "step_adagrad");
  for (std::size_t k = 0; k < params.size(); ++k) {
    G[k] += grad[k] * grad[k];
    out.params[k] -=
        config.learning_rate * grad[k] / std::sqrt(G[k] + config.epsilon);
  }
  return out;
}

std::vector<double> initial_parameters(const AnsatzSpec& spec,
                                       const OptimizerConfig& config) {
  const std::size_t n = parameter_count(spec);
  if (const auto* e = std::get_if<ExplicitInit>(&config.init)) {
    require_same_size(e->angles.size(), n, "explicit init");
    return e->angles;
  }
  const auto& u = std::get<UniformInit>(config.init);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(u.lo, u.hi);
  std::vector<double> x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

Trajectory optimize(const AnsatzSpec& spec, const ModelTriple& model,
                    const OptimizerConfig& config, double E0) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const CompiledAnsatz circuit(spec, model);

  Trajectory traj;
  traj.E0 = E0;
  traj.config = config;

  std::vector<double> x = initial_parameters(spec, config);
  StepperState state;
  for (std::size_t it = 0;; ++it) {
    const auto eval =
        circuit.cost_and_gradient(ParameterVector::unflatten(spec, x));
    if (!std::isfinite(eval.cost)) {
      throw std::runtime_error(
          "optimize: cost became non-finite at iteration " +
          std::to_string(it) + " (learning rate " +
          std::to_string(config.learning_rate) + " too large?)");
    }
    const double gnorm = l2_norm(eval.gradient);
    traj.records.push_back(
        {it, x, eval.cost, approximation_ratio(eval.cost, E0), gnorm});
    if (gnorm <= config.gradient_tolerance) {
      traj.status = Status::Converged;
      break;
    }
    if (it == config.max_iterations) {
      traj.status = Status::MaxIterations;
      break;
    }
    auto step = config.method == Method::Momentum
                    ? step_momentum(x, eval.gradient, state, config)
                    : step_adagrad(x, eval.gradient, state, config);
    x = std::move(step.params);
    state = std::move(step.state);
  }
  traj.wall_seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return traj;
}

}  // namespace dcqaoa
