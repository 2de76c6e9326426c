#include <gtest/gtest.h>

#include <random>

#include "dcqaoa/ansatz.hpp"
#include "oracle.hpp"

using namespace dcqaoa;

namespace {

ParameterVector random_params(const AnsatzSpec& spec, std::uint64_t seed,
                              double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> flat(parameter_count(spec));
  for (auto& x : flat) x = u(rng);
  return ParameterVector::unflatten(spec, flat);
}

// Layer-by-layer dense product. Off-diagonal problem terms in these models
// all commute, so one exponential covers them.
oracle::Vector dense_circuit(const AnsatzSpec& spec, const ParameterVector& th,
                             const ModelTriple& model) {
  const std::size_t L = model.h_prob.length();
  const auto [diag, off] = model.h_prob.split_diagonal();
  const oracle::Matrix hd = oracle::sum_matrix(diag);
  const oracle::Matrix ho = oracle::sum_matrix(off);
  const oracle::Matrix hm = oracle::sum_matrix(model.h_mixer);
  oracle::Vector v = oracle::plus_vector(L);
  for (std::size_t k = 0; k < spec.p; ++k) {
    v = oracle::expm_hermitian(hd, th.gamma[k]) * v;
    v = oracle::expm_hermitian(ho, th.gamma[k]) * v;
    v = oracle::expm_hermitian(hm, th.beta[k]) * v;
    if (spec.cd) {
      for (const auto& t : spec.cd->terms) {
        v = oracle::expm_hermitian(oracle::string_matrix(t.string.letters()),
                                   th.alpha[k] * t.weight) *
            v;
      }
    }
  }
  return v;
}

}  // namespace

TEST(Spec, Validation) {
  EXPECT_THROW(qaoa_spec(0), std::invalid_argument);
  AnsatzSpec bad = qaoa_spec(1);
  bad.cd = default_cd_operator(lfim(3));
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = AnsatzSpec{Variant::DCQAOA, 1, std::nullopt};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  CdOperator even{"ZZ", {{PauliString::parse("ZZI"), 1.0}}};
  EXPECT_THROW(dcqaoa_spec(1, even), std::invalid_argument);

  EXPECT_EQ(variant_from_string(to_string(Variant::DCQAOA)), Variant::DCQAOA);
  EXPECT_THROW(variant_from_string("vqe"), std::invalid_argument);
}

TEST(Parameters, CountsAndLayout) {
  EXPECT_EQ(parameter_count(qaoa_spec(3)), 6u);
  EXPECT_EQ(parameter_count(dcqaoa_spec(1, default_cd_operator(lfim(4)))), 3u);
  EXPECT_EQ(parameter_count(dcqaoa_spec(4, default_cd_operator(lfim(4)))), 12u);

  const auto spec = dcqaoa_spec(2, default_cd_operator(lfim(4)));
  const std::vector<double> flat = {1, 2, 3, 4, 5, 6};
  const auto pv = ParameterVector::unflatten(spec, flat);
  EXPECT_EQ(pv.gamma, (std::vector<double>{1, 2}));
  EXPECT_EQ(pv.beta, (std::vector<double>{3, 4}));
  EXPECT_EQ(pv.alpha, (std::vector<double>{5, 6}));
  EXPECT_EQ(pv.flatten(), flat);
  EXPECT_THROW(ParameterVector::unflatten(spec, std::vector<double>(5)),
               std::invalid_argument);
}

TEST(Run, ZeroAnglesGivePlusState) {
  for (const auto& inst : {lfim(5), tfim(4), pspin(4, 3, 1.0)}) {
    const auto model = build(inst);
    const auto spec = dcqaoa_spec(3, default_cd_operator(inst));
    const auto psi = run(spec, ParameterVector::zeros(spec), model);
    EXPECT_LT(oracle::max_abs_diff(oracle::to_vector(psi),
                                   oracle::plus_vector(inst.L)),
              1e-15);
  }
}

TEST(Run, CdOffMatchesQaoaBitForBit) {
  for (const auto& inst :
       {lfim(6), tfim(5), random_instance(RandomKind::SK, 5, 3)}) {
    const auto model = build(inst);
    for (std::size_t p : {1, 3}) {
      const auto q = qaoa_spec(p);
      const auto dc = dcqaoa_spec(p, default_cd_operator(inst));
      auto th = random_params(dc, p + 7);
      std::fill(th.alpha.begin(), th.alpha.end(), 0.0);
      ParameterVector qth{th.gamma, th.beta, {}};
      const auto a = run(q, qth, model);
      const auto b = run(dc, th, model);
      for (std::size_t i = 0; i < a.dimension(); ++i) ASSERT_EQ(a[i], b[i]);
      EXPECT_EQ(CompiledAnsatz(q, model).cost(qth),
                CompiledAnsatz(dc, model).cost(th));
    }
  }
}

TEST(Run, Deterministic) {
  const auto inst = lfim(8);
  const auto spec = dcqaoa_spec(4, default_cd_operator(inst));
  const auto th = random_params(spec, 1);
  const CompiledAnsatz c(spec, build(inst));
  const auto a = c.run(th), b = c.run(th);
  for (std::size_t i = 0; i < a.dimension(); ++i) ASSERT_EQ(a[i], b[i]);
}

TEST(Run, MatchesDenseCircuit) {
  const std::vector<ProblemInstance> instances = {
      lfim(3),  tfim(4),  ghz(4), ising(3, 0.7, -0.4, 1.2),
      maxcut(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}}),
      random_instance(RandomKind::SK, 4, 5), pspin(4, 3, 1.0),
      pspin(3, 2, 0.5)};
  for (const auto& inst : instances) {
    const auto model = build(inst);
    for (auto spec : {qaoa_spec(2), dcqaoa_spec(2, default_cd_operator(inst))}) {
      const auto th = random_params(spec, inst.L * 31 + spec.p, 1.5);
      const auto psi = run(spec, th, model);
      ASSERT_LT(oracle::max_abs_diff(oracle::to_vector(psi),
                                     dense_circuit(spec, th, model)),
                1e-10)
          << to_string(inst.kind()) << " " << to_string(spec.variant);
    }
  }
}

TEST(Run, NormDriftAtDepth) {
  const auto inst = lfim(12);
  const auto spec = dcqaoa_spec(6, default_cd_operator(inst));
  const auto psi = run(spec, random_params(spec, 11, 3.0), build(inst));
  EXPECT_NEAR(psi.norm(), 1.0, 1e-10);

  const auto ring = ghz(12);
  const auto spec2 = dcqaoa_spec(6, default_cd_operator(ring));
  EXPECT_NEAR(run(spec2, random_params(spec2, 12, 3.0), build(ring)).norm(),
              1.0, 1e-10);
}

TEST(Run, RejectsMismatchedInputs) {
  const auto model = build(lfim(4));
  const auto spec = qaoa_spec(2);
  ParameterVector short_params{{0.1}, {0.1}, {}};
  EXPECT_THROW(run(spec, short_params, model), std::invalid_argument);
  const auto other = dcqaoa_spec(1, default_cd_operator(lfim(5)));
  EXPECT_THROW(CompiledAnsatz(other, model), std::invalid_argument);
}

TEST(Depth, RotationDepth) {
  EXPECT_EQ(rotation_depth(PauliString::parse("IYI")), 1u);
  EXPECT_EQ(rotation_depth(PauliString::parse("IZI")), 1u);
  EXPECT_EQ(rotation_depth(PauliString::parse("ZZ")), 3u);
  EXPECT_EQ(rotation_depth(PauliString::parse("ZY")), 4u);
  EXPECT_EQ(rotation_depth(PauliString::parse("YZ")), 4u);
  EXPECT_EQ(rotation_depth(PauliString::parse("ZZZ")), 5u);
}

TEST(Depth, CdIncrement) {
  const auto lf = lfim(12);
  const auto dl = depth(dcqaoa_spec(1, default_cd_operator(lf)), build(lf));
  EXPECT_EQ(dl.cd_per_layer, 1u);
  EXPECT_EQ(dl.total, dl.per_layer + 1);

  const auto tf = tfim(12);
  const auto dt = depth(dcqaoa_spec(3, default_cd_operator(tf)), build(tf));
  EXPECT_EQ(dt.cd_per_layer, 4u);
  EXPECT_EQ(dt.total, 3 * (dt.per_layer + 4));

  const auto dq = depth(qaoa_spec(3), build(tf));
  EXPECT_EQ(dq.cd_per_layer, 0u);
  EXPECT_EQ(dq.per_layer, dt.per_layer);
  EXPECT_EQ(dq.total, 3 * dq.per_layer);
}
