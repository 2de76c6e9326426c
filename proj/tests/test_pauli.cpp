#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dcqaoa/models.hpp"
#include "dcqaoa/pauli.hpp"
#include "oracle.hpp"

using namespace dcqaoa;

namespace {

PauliString P(const char* s) { return PauliString::parse(s); }

Eigen::MatrixXcd with_phase(const PauliString& s) {
  return s.phase().value() * oracle::string_matrix(s.letters());
}

}  // namespace

TEST(PauliString, ParseAndInspect) {
  const auto s = P("ZIYX");
  EXPECT_EQ(s.length(), 4u);
  EXPECT_EQ(s.at(0), Pauli::Z);
  EXPECT_EQ(s.at(2), Pauli::Y);
  EXPECT_EQ(s.weight(), 3u);
  EXPECT_EQ(s.y_count(), 1u);
  EXPECT_EQ(s.letters(), "ZIYX");
  EXPECT_EQ(s.shape(), "ZYX");
  EXPECT_THROW(P("ZQ"), std::invalid_argument);
  EXPECT_THROW(PauliString(65), std::invalid_argument);
}

TEST(PauliString, MultiplyExamples) {
  const auto xy = P("X") * P("Y");
  EXPECT_EQ(xy.letters(), "Z");
  EXPECT_EQ(xy.phase(), Phase::i());

  const auto zz = P("Z") * P("Z");
  EXPECT_EQ(zz.letters(), "I");
  EXPECT_EQ(zz.phase(), Phase::one());

  // (X (x) Z)(Z (x) X): site phases (-i)(+i) = +1, letters Y Y.
  const auto a = P("XZ");
  const auto b = P("ZX");
  const auto ab = a * b;
  EXPECT_EQ(ab.letters(), "YY");
  EXPECT_EQ(ab.phase(), Phase::one());
  EXPECT_LT(oracle::max_abs_diff(with_phase(ab), with_phase(a) * with_phase(b)),
            1e-15);
}

TEST(PauliString, MultiplyLengthMismatch) {
  EXPECT_THROW(P("X") * P("XY"), std::invalid_argument);
}

TEST(PauliString, MultiplyMatchesMatrixProduct) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t L = 1 + trial % 3;
    auto a = oracle::random_string(L, rng);
    auto b = oracle::random_string(L, rng);
    a.set_phase(Phase(trial % 4));
    b.set_phase(Phase(trial / 4 % 4));
    const auto ab = a * b;
    ASSERT_LT(oracle::max_abs_diff(with_phase(ab),
                                   with_phase(a) * with_phase(b)),
              1e-14)
        << a.letters() << " * " << b.letters();
  }
}

TEST(PauliString, InvolutionAndClosure) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_string(4, rng);
    const auto aa = a * a;
    EXPECT_EQ(aa.weight(), 0u);
    EXPECT_EQ(aa.phase(), Phase::one());
  }
}

TEST(PauliString, AnticommutationRule) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = oracle::random_string(4, rng);
    const auto b = oracle::random_string(4, rng);
    int clashes = 0;
    for (std::size_t q = 0; q < 4; ++q) {
      if (a.at(q) != Pauli::I && b.at(q) != Pauli::I && a.at(q) != b.at(q)) {
        ++clashes;
      }
    }
    EXPECT_EQ(a.commutes_with(b), clashes % 2 == 0);
    const auto ma = with_phase(a), mb = with_phase(b);
    const double comm = (ma * mb - mb * ma).cwiseAbs().maxCoeff();
    const double anti = (ma * mb + mb * ma).cwiseAbs().maxCoeff();
    EXPECT_TRUE(a.commutes_with(b) ? comm < 1e-14 : anti < 1e-14);
  }
}

TEST(PauliSum, CommutatorExamples) {
  const auto z = PauliSum::from_string(P("Z"));
  const auto x = PauliSum::from_string(P("X"));
  const auto zx = commutator(z, x);
  ASSERT_EQ(zx.size(), 1u);
  EXPECT_EQ(zx.terms()[0].string.letters(), "Y");
  EXPECT_EQ(zx.terms()[0].coefficient, complex(0, 2));
  EXPECT_FALSE(zx.is_hermitian());
  // i[Z, X] = -2Y is Hermitian.
  const auto folded = (zx * complex(0, 1)).hermitian();
  EXPECT_EQ(folded.terms()[0].coefficient, complex(-2, 0));

  EXPECT_TRUE(commutator(z, z).empty());

  // [Z0 Z1, X0] = 2i Y0 Z1.
  const auto a = PauliSum::from_string(P("ZZ"));
  const auto b = PauliSum::from_string(P("XI"));
  const auto c = commutator(a, b);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.terms()[0].string.letters(), "YZ");
  EXPECT_EQ(c.terms()[0].coefficient, complex(0, 2));
  const auto ma = oracle::sum_matrix(a), mb = oracle::sum_matrix(b);
  EXPECT_LT(oracle::max_abs_diff(oracle::sum_matrix(c), ma * mb - mb * ma),
            1e-14);

  EXPECT_THROW(commutator(z, a), std::invalid_argument);
}

TEST(PauliSum, CommutatorMatchesDense) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t L = 1 + seed % 5;
    const auto a = oracle::random_sum(L, 1 + seed % 6, seed);
    const auto b = oracle::random_sum(L, 1 + (seed * 7) % 6, seed + 1000);
    const auto ma = oracle::sum_matrix(a), mb = oracle::sum_matrix(b);
    ASSERT_LT(oracle::max_abs_diff(to_dense(commutator(a, b)),
                                   ma * mb - mb * ma),
              1e-12)
        << "seed " << seed;
  }
}

TEST(PauliSum, CanonicalForm) {
  PauliSum s(2, {{1.0, P("ZI")}, {2.0, P("XX")}, {-1.0, P("ZI")},
                 {0.5, P("IZ")}, {0.25, P("XX")}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.terms()[0].string.letters(), "IZ");
  EXPECT_EQ(s.terms()[1].string.letters(), "XX");
  EXPECT_EQ(s.terms()[1].coefficient, complex(2.25));

  // Phases fold into coefficients.
  auto y = P("Y");
  y.set_phase(Phase::minus_i());
  const auto f = PauliSum::from_string(y, 2.0);
  EXPECT_EQ(f.terms()[0].coefficient, complex(0, -2));
  EXPECT_EQ(f.terms()[0].string.phase(), Phase::one());
}

TEST(PauliSum, SimplifyIsIdempotent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = oracle::random_sum(4, 12, seed);
    const auto b = oracle::random_sum(4, 12, seed + 50);
    const auto s = a * b + commutator(a, b);
    EXPECT_EQ(simplify(simplify(s)), simplify(s));
    for (std::size_t k = 1; k < s.size(); ++k) {
      EXPECT_TRUE(s.terms()[k - 1].string < s.terms()[k].string);
    }
  }
}

TEST(PauliSum, HermitianFolding) {
  PauliSum tiny(1, {{complex(1.0, 5e-13), P("Z")}});
  EXPECT_TRUE(tiny.is_hermitian());
  EXPECT_EQ(tiny.hermitian().terms()[0].coefficient, complex(1.0, 0.0));
  PauliSum bad(1, {{complex(1.0, 1e-9), P("Z")}});
  EXPECT_FALSE(bad.is_hermitian());
  EXPECT_THROW(bad.hermitian(), std::domain_error);
}

TEST(PauliSum, DenseExamples) {
  Eigen::MatrixXcd z(2, 2), x(2, 2), zz = Eigen::MatrixXcd::Zero(4, 4);
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  zz.diagonal() << -1, 1, 1, -1;
  EXPECT_EQ(to_dense(PauliSum::from_string(P("Z"))), z);
  EXPECT_EQ(to_dense(PauliSum::from_string(P("X"))), x);
  EXPECT_EQ(to_dense(PauliSum::from_string(P("ZZ"), -1.0)), zz);
  EXPECT_THROW(to_dense(PauliSum::identity(11)), std::invalid_argument);
}

TEST(PauliSum, DenseIsHermitianForRealCoefficients) {
  const auto s = oracle::random_sum(3, 6, 3);
  const auto m = to_dense(s);
  EXPECT_LT(oracle::max_abs_diff(m, m.adjoint()), 1e-15);
}

TEST(PauliSum, TextFormat) {
  const PauliSum s(3, {{-1.0, P("ZZI")}, {0.5, P("IXI")}});
  EXPECT_EQ(s.to_text(), "0.5 IXI\n-1 ZZI\n");
  EXPECT_EQ(PauliSum::parse_text("-1.0 ZZI\n0.5 IXI\n"), s);
  EXPECT_THROW(PauliSum::parse_text("1 ZZ\n1 Z\n"), std::invalid_argument);
  EXPECT_THROW(PauliSum::parse_text("abc ZZ\n"), std::invalid_argument);
}

TEST(PauliSum, TextRoundTripIsExact) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = oracle::random_sum(3, 5, seed);
    const auto b = oracle::random_sum(3, 5, seed + 9);
    for (const auto& s : {a, commutator(a, b)}) {
      EXPECT_EQ(PauliSum::parse_text(s.to_text()), s);
    }
  }
}

// ---------------------------------------------------------------------------
// Operator pool

namespace {

std::set<std::string> shapes(const OperatorPool& pool) {
  return {pool.shapes.begin(), pool.shapes.end()};
}

void expect_odd_y(const OperatorPool& pool) {
  for (const auto& s : pool.strings) {
    EXPECT_EQ(s.y_count() % 2, 1u) << s.letters();
    EXPECT_EQ(s.phase(), Phase::one());
  }
}

}  // namespace

TEST(AgpPool, LongitudinalIsingGivesFullPool) {
  const std::set<std::string> expected = {"Y", "ZY", "YZ", "XY", "YX"};
  for (std::size_t L : {4, 6, 8}) {
    for (const auto& inst : {lfim(L), ising(L, 1.0, 1.0, 1.0)}) {
      const auto m = build(inst);
      const auto pool = agp_pool(m.h_mixer, m.h_prob, {.order = 2});
      EXPECT_EQ(shapes(pool), expected) << "L=" << L;
      expect_odd_y(pool);
    }
  }
}

TEST(AgpPool, FirstOrderIsingHasNoXY) {
  const auto m = build(lfim(6));
  const auto pool = agp_pool(m.h_mixer, m.h_prob, {.order = 1});
  EXPECT_EQ(shapes(pool), (std::set<std::string>{"Y", "YZ", "ZY"}));
}

TEST(AgpPool, TransverseFieldParityRestrictsPool) {
  // -sum ZZ - sum X and sum X both commute with prod X, so every nested
  // commutator stays parity-even and Y, XY, YX cannot appear.
  for (std::size_t L : {4, 6}) {
    const auto m = build(tfim(L));
    const auto pool = agp_pool(m.h_mixer, m.h_prob, {.order = 2});
    EXPECT_EQ(shapes(pool), (std::set<std::string>{"YZ", "ZY"}));
    expect_odd_y(pool);
  }
}

TEST(AgpPool, MaxCutPool) {
  const auto inst = random_instance(RandomKind::MaxCut3Regular, 8, 3);
  const auto m = build(inst);
  const auto pool = agp_pool(m.h_mixer, m.h_prob, {.order = 2});
  EXPECT_EQ(shapes(pool), (std::set<std::string>{"YZ", "ZY"}));
  expect_odd_y(pool);
  // Z_i Y_j lands on every edge in both orientations.
  const auto& edges = std::get<MaxCutGraph>(inst.params).edges;
  for (const auto& e : edges) {
    const auto zy = PauliString::pair(8, e.i, Pauli::Z, e.j, Pauli::Y);
    EXPECT_TRUE(std::find_if(pool.strings.begin(), pool.strings.end(),
                             [&](const PauliString& s) {
                               return s.same_letters(zy);
                             }) != pool.strings.end());
  }
}

TEST(AgpPool, ZeroDerivativeGivesEmptyPool) {
  const auto mixer = uniform_mixer(4);
  const auto pool = agp_pool(mixer, mixer);
  EXPECT_TRUE(pool.shapes.empty());
  EXPECT_TRUE(pool.strings.empty());
}

TEST(AgpPool, Errors) {
  EXPECT_THROW(agp_pool(uniform_mixer(3), uniform_mixer(4)),
               std::invalid_argument);
  EXPECT_THROW(agp_pool(uniform_mixer(3), build(ghz(3)).h_prob, {.order = 0}),
               std::invalid_argument);
}

TEST(AgpPool, HigherWeightCutKeepsOddY) {
  const auto m = build(ising(5, 1.0, 0.7, 0.4));
  const auto pool = agp_pool(m.h_mixer, m.h_prob, {.order = 2, .max_weight = 5});
  EXPECT_GT(pool.strings.size(), 30u);
  expect_odd_y(pool);
}
