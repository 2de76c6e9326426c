#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dcqaoa/pauli.hpp"

namespace dcqaoa {

inline constexpr std::size_t kMaxStateQubits = 24;

/// Dense statevector over L qubits. Amplitude index bit q is qubit q, and a
/// zero bit is the +1 eigenstate of Z.
class StateVector {
 public:
  StateVector() = default;

  /// |+>^L, the ground state of -sum X and an eigenstate of the mixer.
  static StateVector plus(std::size_t L);
  static StateVector basis(std::size_t L, std::uint64_t index);
  static StateVector from_amplitudes(std::size_t L,
                                     std::vector<complex> amplitudes);

  std::size_t qubits() const { return qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }

  std::span<complex> amplitudes() { return amplitudes_; }
  std::span<const complex> amplitudes() const { return amplitudes_; }
  complex operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm() const;
  complex inner(const StateVector& other) const;  // <this|other>

 private:
  StateVector(std::size_t L, std::vector<complex> amplitudes)
      : qubits_(L), amplitudes_(std::move(amplitudes)) {}

  std::size_t qubits_ = 0;
  std::vector<complex> amplitudes_;
};

inline StateVector init_plus(std::size_t L) { return StateVector::plus(L); }

/// state <- exp(-i theta P) state = cos(theta) state - i sin(theta) P state.
/// P must carry phase +1 (Hermitian, P^2 = I).
StateVector& apply_pauli_rotation(StateVector& state, const PauliString& p,
                                  double theta);

/// amplitude_z <- exp(-i gamma E(z)) amplitude_z.
StateVector& apply_diagonal_phase(StateVector& state,
                                  std::span<const double> energies,
                                  double gamma);

/// Energy table E(z) of an I/Z-only sum; throws if `h` has X or Y letters.
std::vector<double> diagonal_energies(const PauliSum& h);

/// out <- P in (phase included).
void apply_pauli_string(std::span<const complex> in, const PauliString& p,
                        std::span<complex> out, complex scale = 1.0,
                        bool accumulate = false);

/// out <- H in.
void apply_pauli_sum(std::span<const complex> in, const PauliSum& h,
                     std::span<complex> out);
StateVector apply(const PauliSum& h, const StateVector& state);

/// <state|P|state>.
complex expectation(const StateVector& state, const PauliString& p);

/// <bra|P|ket>.
complex matrix_element(const StateVector& bra, const PauliString& p,
                       const StateVector& ket);

inline constexpr double kExpectationImagTolerance = 1e-10;

/// Real energy sum_k c_k <P_k>; throws std::domain_error if the imaginary
/// residue exceeds kExpectationImagTolerance.
double expectation(const StateVector& state, const PauliSum& h);

std::vector<double> probabilities(const StateVector& state);

}  // namespace dcqaoa
