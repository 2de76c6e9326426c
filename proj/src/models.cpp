#include "dcqaoa/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace dcqaoa {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double spin(std::uint64_t bits, std::size_t q) {
  return ((bits >> q) & 1U) ? -1.0 : 1.0;
}

// Ring or open-chain bonds (i, i+1).
std::vector<std::pair<std::size_t, std::size_t>> chain_bonds(std::size_t L,
                                                             bool periodic) {
  std::vector<std::pair<std::size_t, std::size_t>> bonds;
  for (std::size_t i = 0; i + 1 < L; ++i) bonds.emplace_back(i, i + 1);
  if (periodic) bonds.emplace_back(L - 1, 0);
  return bonds;
}

void check_edges(std::size_t L, const std::vector<Edge>& edges,
                 const char* what) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    if (e.i >= L || e.j >= L) {
      throw std::invalid_argument(std::string(what) +
                                  ": edge references vertex >= L");
    }
    if (e.i == e.j) {
      throw std::invalid_argument(std::string(what) + ": self-loop");
    }
    if (!seen.insert(std::minmax(e.i, e.j)).second) {
      throw std::invalid_argument(std::string(what) + ": duplicate edge");
    }
  }
}

PauliSum zz_sum(std::size_t L, const std::vector<Edge>& edges, double sign) {
  std::vector<PauliSum::Term> terms;
  for (const auto& e : edges) {
    terms.push_back({sign * e.weight,
                     PauliString::pair(L, e.i, Pauli::Z, e.j, Pauli::Z)});
  }
  return PauliSum(L, std::move(terms));
}

PauliSum field_sum(std::size_t L, Pauli letter, double coefficient) {
  std::vector<PauliSum::Term> terms;
  for (std::size_t q = 0; q < L; ++q) {
    terms.push_back({coefficient, PauliString::single(L, q, letter)});
  }
  return PauliSum(L, std::move(terms));
}

PauliSum ising_hamiltonian(std::size_t L, const IsingChain& c) {
  std::vector<Edge> bonds;
  for (auto [i, j] : chain_bonds(L, c.periodic)) bonds.push_back({i, j, c.J});
  return zz_sum(L, bonds, -1.0) + field_sum(L, Pauli::Z, -c.h_z) +
         field_sum(L, Pauli::X, -c.h_x);
}

PauliSum pspin_hamiltonian(std::size_t L, const PSpin& m) {
  const PauliSum magnetization = field_sum(L, Pauli::Z, 1.0);
  PauliSum power = magnetization;
  for (int k = 1; k < m.P; ++k) power = power * magnetization;
  const double scale = -1.0 / std::pow(static_cast<double>(L), m.P - 1);
  return (power * complex(scale)).hermitian() + field_sum(L, Pauli::X, -m.h);
}

std::vector<Edge> random_three_regular(std::size_t L, std::uint64_t seed) {
  constexpr int kAttemptsPerSeed = 1000;
  constexpr int kReseeds = 64;
  for (int round = 0; round < kReseeds; ++round) {
    // Later rounds re-seed deterministically from (seed, round).
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(round)};
    std::mt19937_64 rng = round == 0 ? std::mt19937_64(seed)
                                     : std::mt19937_64(seq);
    for (int attempt = 0; attempt < kAttemptsPerSeed; ++attempt) {
      std::vector<std::size_t> stubs;
      for (std::size_t v = 0; v < L; ++v) stubs.insert(stubs.end(), 3, v);
      std::shuffle(stubs.begin(), stubs.end(), rng);
      std::set<std::pair<std::size_t, std::size_t>> pairs;
      bool ok = true;
      for (std::size_t k = 0; k < stubs.size(); k += 2) {
        const auto [a, b] = std::minmax(stubs[k], stubs[k + 1]);
        if (a == b || !pairs.emplace(a, b).second) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::vector<Edge> edges;
      for (auto [a, b] : pairs) edges.push_back({a, b, 1.0});
      return edges;
    }
  }
  throw std::runtime_error("random_instance: 3-regular pairing did not converge");
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::IsingChain:
      return "ising";
    case ModelKind::MaxCut:
      return "maxcut";
    case ModelKind::SK:
      return "sk";
    case ModelKind::PSpin:
      return "pspin";
  }
  return "unknown";
}

ModelKind ProblemInstance::kind() const {
  return std::visit(
      overloaded{[](const IsingChain&) { return ModelKind::IsingChain; },
                 [](const MaxCutGraph&) { return ModelKind::MaxCut; },
                 [](const SKCouplings&) { return ModelKind::SK; },
                 [](const PSpin&) { return ModelKind::PSpin; }},
      params);
}

bool ProblemInstance::is_diagonal() const {
  return std::visit(overloaded{[](const IsingChain& c) { return c.h_x == 0.0; },
                               [](const MaxCutGraph&) { return true; },
                               [](const SKCouplings&) { return true; },
                               [](const PSpin& m) { return m.h == 0.0; }},
                    params);
}

void validate(const ProblemInstance& inst) {
  if (inst.L < 1 || inst.L > PauliString::kMaxLength) {
    throw std::invalid_argument("instance: L out of range");
  }
  std::visit(
      overloaded{
          [&](const IsingChain& c) {
            if (c.periodic && inst.L < 3) {
              throw std::invalid_argument(
                  "Ising ring needs L >= 3 (L = 2 double-counts its bond)");
            }
            if (!c.periodic && inst.L < 2) {
              throw std::invalid_argument("Ising chain needs L >= 2");
            }
          },
          [&](const MaxCutGraph& g) { check_edges(inst.L, g.edges, "MaxCut"); },
          [&](const SKCouplings& sk) {
            check_edges(inst.L, sk.couplings, "SK");
            if (sk.couplings.size() != inst.L * (inst.L - 1) / 2) {
              throw std::invalid_argument("SK: every pair needs a coupling");
            }
            for (const auto& e : sk.couplings) {
              if (e.weight != 1.0 && e.weight != -1.0) {
                throw std::invalid_argument("SK: couplings must be +-1");
              }
            }
          },
          [&](const PSpin& m) {
            if (m.P < 2 || inst.L < 2) {
              throw std::invalid_argument("P-spin needs P >= 2 and L >= 2");
            }
          }},
      inst.params);
}

ProblemInstance ising(std::size_t L, double J, double h_z, double h_x,
                      bool periodic) {
  ProblemInstance inst{L, IsingChain{J, h_z, h_x, periodic}, std::nullopt};
  validate(inst);
  return inst;
}

ProblemInstance lfim(std::size_t L, double J, double h_z) {
  return ising(L, J, h_z, 0.0);
}

ProblemInstance tfim(std::size_t L, double J, double h_x) {
  return ising(L, J, 0.0, h_x);
}

ProblemInstance ghz(std::size_t L, double J) { return ising(L, J, 0.0, 0.0); }

ProblemInstance maxcut(std::size_t L, std::vector<Edge> edges) {
  ProblemInstance inst{L, MaxCutGraph{std::move(edges)}, std::nullopt};
  validate(inst);
  return inst;
}

ProblemInstance pspin(std::size_t L, int P, double h) {
  ProblemInstance inst{L, PSpin{P, h}, std::nullopt};
  validate(inst);
  return inst;
}

PauliSum uniform_mixer(std::size_t L) { return field_sum(L, Pauli::X, 1.0); }

ModelTriple build(const ProblemInstance& inst) {
  validate(inst);
  const std::size_t L = inst.L;
  PauliSum h = std::visit(
      overloaded{
          [&](const IsingChain& c) { return ising_hamiltonian(L, c); },
          [&](const MaxCutGraph& g) { return zz_sum(L, g.edges, 1.0); },
          [&](const SKCouplings& sk) { return zz_sum(L, sk.couplings, 1.0); },
          [&](const PSpin& m) { return pspin_hamiltonian(L, m); }},
      inst.params);
  const bool diagonal = h.is_diagonal();
  return ModelTriple{std::move(h), uniform_mixer(L), diagonal};
}

namespace detail {

ClassicalEnergy classical_energy_unchecked(const ProblemInstance& inst,
                                           std::uint64_t bits) {
  const std::size_t L = inst.L;
  ClassicalEnergy out;
  std::visit(
      overloaded{
          [&](const IsingChain& c) {
            for (auto [i, j] : chain_bonds(L, c.periodic)) {
              out.energy -= c.J * spin(bits, i) * spin(bits, j);
            }
            for (std::size_t q = 0; q < L; ++q) {
              out.energy -= c.h_z * spin(bits, q);
            }
          },
          [&](const MaxCutGraph& g) {
            double cut = 0.0;
            for (const auto& e : g.edges) {
              const double ss = spin(bits, e.i) * spin(bits, e.j);
              out.energy += e.weight * ss;
              cut += 0.5 * e.weight * (1.0 - ss);
            }
            out.cut = cut;
          },
          [&](const SKCouplings& sk) {
            for (const auto& e : sk.couplings) {
              out.energy += e.weight * spin(bits, e.i) * spin(bits, e.j);
            }
          },
          [&](const PSpin& m) {
            const double down = std::popcount(bits);
            const double mag = static_cast<double>(L) - 2.0 * down;
            out.energy = -std::pow(mag, m.P) /
                         std::pow(static_cast<double>(L), m.P - 1);
          }},
      inst.params);
  return out;
}

}  // namespace detail

ClassicalEnergy classical_energy(const ProblemInstance& inst,
                                 std::uint64_t bits) {
  validate(inst);
  if (!inst.is_diagonal()) {
    throw std::invalid_argument(
        "classical_energy: instance has a transverse field");
  }
  if (inst.L < 64 && (bits >> inst.L) != 0) {
    throw std::out_of_range("classical_energy: bitstring wider than L");
  }
  return detail::classical_energy_unchecked(inst, bits);
}

ProblemInstance random_instance(RandomKind kind, std::size_t L,
                                std::uint64_t seed) {
  ProblemInstance inst;
  inst.L = L;
  inst.seed = seed;
  if (kind == RandomKind::MaxCut3Regular) {
    if (L < 4 || L % 2 != 0) {
      throw std::invalid_argument(
          "random 3-regular graph needs an even L >= 4");
    }
    inst.params = MaxCutGraph{random_three_regular(L, seed)};
  } else {
    if (L < 2) throw std::invalid_argument("SK needs L >= 2");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    SKCouplings sk;
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = i + 1; j < L; ++j) {
        sk.couplings.push_back({i, j, coin(rng) ? 1.0 : -1.0});
      }
    }
    inst.params = std::move(sk);
  }
  validate(inst);
  return inst;
}

CdOperator cd_operator_from_shape(const ProblemInstance& inst,
                                  const std::string& shape) {
  validate(inst);
  const std::size_t L = inst.L;
  CdOperator op{shape, {}};
  if (shape.size() == 1) {
    const Pauli p = pauli_from_char(shape[0]);
    for (std::size_t q = 0; q < L; ++q) {
      op.terms.push_back({PauliString::single(L, q, p), 1.0});
    }
  } else if (shape.size() == 2) {
    const Pauli a = pauli_from_char(shape[0]);
    const Pauli b = pauli_from_char(shape[1]);
    std::vector<Edge> support = std::visit(
        overloaded{
            [&](const IsingChain& c) {
              std::vector<Edge> e;
              for (auto [i, j] : chain_bonds(L, c.periodic)) {
                e.push_back({i, j, 1.0});
              }
              return e;
            },
            [&](const MaxCutGraph& g) {
              std::vector<Edge> e;
              for (const auto& edge : g.edges) {
                const auto [i, j] = std::minmax(edge.i, edge.j);
                e.push_back({i, j, 1.0});
              }
              std::sort(e.begin(), e.end(), [](const Edge& x, const Edge& y) {
                return std::pair(x.i, x.j) < std::pair(y.i, y.j);
              });
              return e;
            },
            [&](const SKCouplings& sk) {
              std::vector<Edge> e;
              for (const auto& c : sk.couplings) {
                const auto [i, j] = std::minmax(c.i, c.j);
                e.push_back({i, j, c.weight});
              }
              std::sort(e.begin(), e.end(), [](const Edge& x, const Edge& y) {
                return std::pair(x.i, x.j) < std::pair(y.i, y.j);
              });
              return e;
            },
            [&](const PSpin&) {
              std::vector<Edge> e;
              for (std::size_t i = 0; i < L; ++i) {
                for (std::size_t j = i + 1; j < L; ++j) e.push_back({i, j, 1.0});
              }
              return e;
            }},
        inst.params);
    for (const auto& e : support) {
      op.terms.push_back({PauliString::pair(L, e.i, a, e.j, b), e.weight});
    }
  } else {
    throw std::invalid_argument("CD shape must have one or two letters: '" +
                                shape + "'");
  }
  for (const auto& t : op.terms) {
    if (t.string.y_count() % 2 != 1) {
      throw std::invalid_argument("CD shape '" + shape +
                                  "' needs an odd number of Y letters");
    }
  }
  return op;
}

CdOperator default_cd_operator(const ProblemInstance& inst) {
  return std::visit(
      overloaded{[&](const IsingChain& c) {
                   // Local Y for a longitudinal field, bond ZY otherwise.
                   return cd_operator_from_shape(inst,
                                                 c.h_z != 0.0 ? "Y" : "ZY");
                 },
                 [&](const MaxCutGraph&) {
                   return cd_operator_from_shape(inst, "ZY");
                 },
                 [&](const SKCouplings&) {
                   return cd_operator_from_shape(inst, "ZY");
                 },
                 [&](const PSpin&) { return cd_operator_from_shape(inst, "Y"); }},
      inst.params);
}

}  // namespace dcqaoa
