#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dcqaoa/pauli.hpp"

namespace dcqaoa {

/// Homogeneous 1D Ising chain: -J sum Z_i Z_{i+1} - h_z sum Z_i - h_x sum X_i.
struct IsingChain {
  double J = 1.0;
  double h_z = 0.0;
  double h_x = 0.0;
  bool periodic = true;
};

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 1.0;
};

/// MaxCut graph; the Hamiltonian is sum_{(i,j)} w_ij Z_i Z_j.
struct MaxCutGraph {
  std::vector<Edge> edges;
};

/// Sherrington-Kirkpatrick couplings, one Edge per unordered pair i<j with
/// `weight` holding J_ij.
struct SKCouplings {
  std::vector<Edge> couplings;
};

/// -(1/L^{P-1}) (sum Z_i)^P - h sum X_i.
struct PSpin {
  int P = 2;
  double h = 0.0;
};

enum class ModelKind { IsingChain, MaxCut, SK, PSpin };

std::string to_string(ModelKind kind);

struct ProblemInstance {
  std::size_t L = 0;
  std::variant<IsingChain, MaxCutGraph, SKCouplings, PSpin> params;
  /// Seed the instance was generated from, when random.
  std::optional<std::uint64_t> seed;

  ModelKind kind() const;
  /// True when the problem Hamiltonian has only I/Z letters.
  bool is_diagonal() const;
};

/// Throws std::invalid_argument when the instance breaks its invariants.
void validate(const ProblemInstance& instance);

// Named Ising presets.
ProblemInstance lfim(std::size_t L, double J = 1.0, double h_z = 1.0);
ProblemInstance tfim(std::size_t L, double J = 1.0, double h_x = 1.0);
ProblemInstance ghz(std::size_t L, double J = 1.0);
ProblemInstance ising(std::size_t L, double J, double h_z, double h_x,
                      bool periodic = true);
ProblemInstance maxcut(std::size_t L, std::vector<Edge> edges);
ProblemInstance pspin(std::size_t L, int P, double h);

struct ModelTriple {
  PauliSum h_prob;
  PauliSum h_mixer;
  bool diagonal = false;
};

ModelTriple build(const ProblemInstance& instance);

/// Sum_i X_i with unit weights.
PauliSum uniform_mixer(std::size_t L);

struct ClassicalEnergy {
  double energy = 0.0;
  /// Cut value, MaxCut instances only.
  std::optional<double> cut;
};

/// Eigenvalue of the problem Hamiltonian on a computational basis state.
/// Bit q of `bits` is qubit q; bit 0 means Z = +1.
ClassicalEnergy classical_energy(const ProblemInstance& instance,
                                 std::uint64_t bits);

struct GroundState {
  double energy = 0.0;
  /// Unset when the iterative solver cannot resolve it.
  std::optional<std::size_t> degeneracy;
};

inline constexpr std::size_t kMaxSweepQubits = 20;
inline constexpr std::size_t kMaxLanczosQubits = 14;
inline constexpr double kDegeneracyTolerance = 1e-8;

GroundState ground_energy(const ProblemInstance& instance);

struct LanczosOptions {
  double tolerance = 1e-10;
  /// Zero means 10 * 2^L.
  std::size_t max_iterations = 0;
  std::uint64_t seed = 0x5eed;
};

/// Lowest eigenvalue of a Hermitian PauliSum through a matrix-free Lanczos
/// iteration with full reorthogonalization.
double lowest_eigenvalue(const PauliSum& h, const LanczosOptions& options = {});

enum class RandomKind { MaxCut3Regular, SK };

ProblemInstance random_instance(RandomKind kind, std::size_t L,
                                std::uint64_t seed);

/// One generator of the per-site CD product, applied as exp(-i a w P).
struct CdTerm {
  PauliString string;
  double weight = 1.0;
};

/// Ordered CD generator family. Terms are applied in the stored order.
struct CdOperator {
  std::string shape;
  std::vector<CdTerm> terms;
};

/// Per-model default: LFIM/P-spin -> Y, TFIM/GHZ -> ZY on ring bonds,
/// MaxCut -> ZY on edges, SK -> J_ij ZY on all pairs.
CdOperator default_cd_operator(const ProblemInstance& instance);

/// Expands a one- or two-letter shape over the instance's natural support:
/// every site for one letter; chain bonds, graph edges, or all pairs for two.
CdOperator cd_operator_from_shape(const ProblemInstance& instance,
                                  const std::string& shape);

}  // namespace dcqaoa
