#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dcqaoa/ansatz.hpp"

namespace dcqaoa {

/// F = <psi(gamma, beta, alpha)|H_prob|psi(gamma, beta, alpha)>.
double cost(const AnsatzSpec& spec, const ParameterVector& params,
            const ModelTriple& model);

/// R = F / E0. Throws std::domain_error when E0 is zero.
double approximation_ratio(double F, double E0);

/// dF/dtheta in the flat [gamma, beta, alpha] layout.
std::vector<double> gradient(const AnsatzSpec& spec,
                             const ParameterVector& params,
                             const ModelTriple& model);

enum class Method { Momentum, Adagrad };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

struct UniformInit {
  double lo = 0.0;
  double hi = 0.1;
};

struct ExplicitInit {
  std::vector<double> angles;  // flat layout
};

struct OptimizerConfig {
  Method method = Method::Adagrad;
  double learning_rate = 0.05;
  double momentum = 0.9;   // Momentum only
  double epsilon = 1e-8;   // Adagrad only
  std::size_t max_iterations = 500;
  double gradient_tolerance = 1e-6;
  std::variant<UniformInit, ExplicitInit> init = UniformInit{};
  std::uint64_t seed = 0;

  /// Defaults for a method: Momentum eta=0.01, mu=0.9; Adagrad eta=0.05.
  static OptimizerConfig defaults(Method method);
  void validate() const;
};

/// Velocity (Momentum) or squared-gradient accumulator (Adagrad).
struct StepperState {
  std::vector<double> accumulator;
};

struct StepResult {
  std::vector<double> params;
  StepperState state;
};

/// v' = mu v - eta g; x' = x + v'.
StepResult step_momentum(std::span<const double> params,
                         std::span<const double> grad,
                         const StepperState& state,
                         const OptimizerConfig& config);

/// G' = G + g^2; x' = x - eta g / sqrt(G' + eps).
StepResult step_adagrad(std::span<const double> params,
                        std::span<const double> grad,
                        const StepperState& state,
                        const OptimizerConfig& config);

struct IterationRecord {
  std::size_t iteration = 0;
  std::vector<double> params;
  double F = 0.0;
  double R = 0.0;
  double gradient_norm = 0.0;
};

enum class Status { Converged, MaxIterations };

std::string to_string(Status s);

struct Trajectory {
  std::vector<IterationRecord> records;
  Status status = Status::MaxIterations;
  double E0 = 0.0;
  double wall_seconds = 0.0;
  OptimizerConfig config;

  const IterationRecord& final() const { return records.back(); }
};

/// Draws or copies the initial flat parameter vector.
std::vector<double> initial_parameters(const AnsatzSpec& spec,
                                       const OptimizerConfig& config);

/// Runs the configured stepper from the initial point until the gradient
/// norm drops to the tolerance or the iteration budget is spent. Records one
/// entry per evaluated point, starting with the initial one. Throws
/// std::runtime_error if F stops being finite.
Trajectory optimize(const AnsatzSpec& spec, const ModelTriple& model,
                    const OptimizerConfig& config, double E0);

}  // namespace dcqaoa
