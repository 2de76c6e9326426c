#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dcqaoa/opt.hpp"
#include "oracle.hpp"

using namespace dcqaoa;

namespace {

std::vector<ProblemInstance> families() {
  return {lfim(6), tfim(5), random_instance(RandomKind::MaxCut3Regular, 8, 1),
          random_instance(RandomKind::SK, 6, 2), pspin(6, 3, 1.0)};
}

}  // namespace

TEST(Cost, Examples) {
  for (std::size_t L : {3, 6}) {
    const auto model = build(lfim(L));
    const auto spec = qaoa_spec(2);
    EXPECT_NEAR(cost(spec, ParameterVector::zeros(spec), model), 0.0, 1e-12);
    const auto tf = build(tfim(L));
    EXPECT_NEAR(cost(spec, ParameterVector::zeros(spec), tf), -double(L),
                1e-12);
  }
}

TEST(Ratio, Examples) {
  EXPECT_DOUBLE_EQ(approximation_ratio(-5.0, -10.0), 0.5);
  EXPECT_DOUBLE_EQ(approximation_ratio(-10.0, -10.0), 1.0);
  EXPECT_THROW(approximation_ratio(1.0, 0.0), std::domain_error);
}

TEST(Gradient, MatchesCentralDifferences) {
  constexpr double kStep = 1e-5;
  for (const auto& inst : families()) {
    const auto model = build(inst);
    const auto spec = dcqaoa_spec(2, default_cd_operator(inst));
    std::mt19937_64 rng(inst.L);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int point = 0; point < 20; ++point) {
      std::vector<double> x(parameter_count(spec));
      for (auto& v : x) v = u(rng);
      const auto g = gradient(spec, ParameterVector::unflatten(spec, x), model);
      double worst = 0.0, scale = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        auto hi = x, lo = x;
        hi[k] += kStep;
        lo[k] -= kStep;
        const double fd =
            (cost(spec, ParameterVector::unflatten(spec, hi), model) -
             cost(spec, ParameterVector::unflatten(spec, lo), model)) /
            (2 * kStep);
        worst = std::max(worst, std::abs(fd - g[k]));
        scale = std::max(scale, std::abs(g[k]));
      }
      ASSERT_LE(worst / std::max(scale, 1.0), 1e-6)
          << to_string(inst.kind()) << " point " << point;
    }
  }
}

TEST(Steppers, Momentum) {
  auto cfg = OptimizerConfig::defaults(Method::Momentum);
  const std::vector<double> x = {1.0, 2.0}, g = {0.5, -1.0};
  const auto first = step_momentum(x, g, {}, cfg);
  EXPECT_DOUBLE_EQ(first.params[0], 1.0 - 0.01 * 0.5);
  EXPECT_DOUBLE_EQ(first.params[1], 2.0 + 0.01);
  const auto second = step_momentum(first.params, g, first.state, cfg);
  EXPECT_DOUBLE_EQ(second.state.accumulator[0], 0.9 * -0.005 - 0.005);
  // Pure: same inputs, same outputs.
  const auto again = step_momentum(x, g, {}, cfg);
  EXPECT_EQ(again.params, first.params);
  EXPECT_EQ(again.state.accumulator, first.state.accumulator);
}

TEST(Steppers, Adagrad) {
  const auto cfg = OptimizerConfig::defaults(Method::Adagrad);
  const std::vector<double> x = {0.0}, g = {2.0};
  const auto r = step_adagrad(x, g, {}, cfg);
  EXPECT_DOUBLE_EQ(r.state.accumulator[0], 4.0);
  EXPECT_NEAR(r.params[0], -0.05 * 2.0 / std::sqrt(4.0 + 1e-8), 1e-15);
  EXPECT_THROW(step_adagrad(x, std::vector<double>{1.0, 2.0}, {}, cfg),
               std::invalid_argument);
}

TEST(Config, Defaults) {
  const auto m = OptimizerConfig::defaults(Method::Momentum);
  EXPECT_EQ(m.learning_rate, 0.01);
  EXPECT_EQ(m.momentum, 0.9);
  const auto a = OptimizerConfig::defaults(Method::Adagrad);
  EXPECT_EQ(a.learning_rate, 0.05);
  EXPECT_EQ(a.epsilon, 1e-8);
  EXPECT_EQ(a.max_iterations, 500u);
  EXPECT_EQ(a.gradient_tolerance, 1e-6);
  const auto& init = std::get<UniformInit>(a.init);
  EXPECT_EQ(init.lo, 0.0);
  EXPECT_EQ(init.hi, 0.1);
  auto bad = a;
  bad.learning_rate = -1;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_EQ(method_from_string("momentum"), Method::Momentum);
  EXPECT_THROW(method_from_string("adam"), std::invalid_argument);
}

TEST(Optimize, InitialParameters) {
  const auto spec = dcqaoa_spec(3, default_cd_operator(lfim(4)));
  auto cfg = OptimizerConfig::defaults(Method::Adagrad);
  cfg.seed = 4;
  const auto x = initial_parameters(spec, cfg);
  ASSERT_EQ(x.size(), 9u);
  for (double v : x) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 0.1);
  }
  EXPECT_EQ(initial_parameters(spec, cfg), x);
  cfg.init = ExplicitInit{{1, 2, 3}};
  EXPECT_THROW(initial_parameters(spec, cfg), std::invalid_argument);
}

TEST(Optimize, DeterministicAndSandwiched) {
  for (const auto& inst : families()) {
    const auto model = build(inst);
    const auto spectrum =
        oracle::dense_spectrum(oracle::sum_matrix(model.h_prob));
    const double E0 = ground_energy(inst).energy;
    const auto spec = dcqaoa_spec(1, default_cd_operator(inst));
    auto cfg = OptimizerConfig::defaults(Method::Adagrad);
    cfg.max_iterations = 60;
    cfg.seed = 3;
    const auto a = optimize(spec, model, cfg, E0);
    const auto b = optimize(spec, model, cfg, E0);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      ASSERT_EQ(a.records[k].F, b.records[k].F);
      ASSERT_EQ(a.records[k].params, b.records[k].params);
    }
    for (const auto& r : a.records) {
      EXPECT_GE(r.F, spectrum[0] - 1e-10);
      EXPECT_LE(r.F, spectrum[spectrum.size() - 1] + 1e-10);
      EXPECT_LE(r.R, 1.0 + 1e-9);
    }
    EXPECT_EQ(a.records.front().iteration, 0u);
    EXPECT_LE(a.records.size(), cfg.max_iterations + 1);
  }
}

TEST(Optimize, RatioTracksEnergy) {
  const auto inst = tfim(4);
  const auto model = build(inst);
  const double E0 = ground_energy(inst).energy;
  auto cfg = OptimizerConfig::defaults(Method::Adagrad);
  cfg.max_iterations = 40;
  const auto t = optimize(qaoa_spec(1), model, cfg, E0);
  for (std::size_t k = 1; k < t.records.size(); ++k) {
    const auto& prev = t.records[k - 1];
    const auto& cur = t.records[k];
    EXPECT_EQ(cur.F < prev.F, cur.R > prev.R);
  }
}

TEST(Optimize, ConvergesOnEasyCase) {
  const auto inst = pspin(6, 4, 0.0);
  const auto model = build(inst);
  const auto spec = dcqaoa_spec(1, default_cd_operator(inst));
  const auto cfg = OptimizerConfig::defaults(Method::Adagrad);
  const auto t = optimize(spec, model, cfg, ground_energy(inst).energy);
  EXPECT_GE(t.final().R, 0.99);
}

TEST(Optimize, DivergenceIsReported) {
  const auto inst = lfim(4);
  auto cfg = OptimizerConfig::defaults(Method::Momentum);
  cfg.init = ExplicitInit{{std::nan(""), 0.0}};
  EXPECT_THROW(optimize(qaoa_spec(1), build(inst), cfg, -8.0),
               std::runtime_error);
}
