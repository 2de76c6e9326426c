#include "dcqaoa/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dcqaoa {

namespace {

void require_qubits(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw std::invalid_argument(std::string(what) + ": operator acts on " +
                                std::to_string(got) + " qubits, state has " +
                                std::to_string(expected));
  }
}

inline double parity_sign(std::uint64_t z, std::uint64_t mask) {
  return (std::popcount(z & mask) & 1) ? -1.0 : 1.0;
}

// i^k for the Y letters of a string, combined with the string phase.
complex action_prefactor(const PauliString& p) {
  return Phase(static_cast<int>(p.y_count())).value() * p.phase().value();
}

}  // namespace

StateVector StateVector::plus(std::size_t L) {
  if (L < 1 || L > kMaxStateQubits) {
    throw std::invalid_argument("init_plus: L=" + std::to_string(L) +
                                " outside [1, 24]");
  }
  const std::size_t dim = std::size_t{1} << L;
  const double amp = std::pow(2.0, -0.5 * static_cast<double>(L));
  return StateVector(L, std::vector<complex>(dim, complex(amp, 0.0)));
}

StateVector StateVector::basis(std::size_t L, std::uint64_t index) {
  if (L < 1 || L > kMaxStateQubits) {
    throw std::invalid_argument("StateVector::basis: L out of range");
  }
  const std::size_t dim = std::size_t{1} << L;
  if (index >= dim) throw std::out_of_range("StateVector::basis: index");
  std::vector<complex> amps(dim);
  amps[index] = 1.0;
  return StateVector(L, std::move(amps));
}

StateVector StateVector::from_amplitudes(std::size_t L,
                                         std::vector<complex> amplitudes) {
  if (L < 1 || L > kMaxStateQubits ||
      amplitudes.size() != (std::size_t{1} << L)) {
    throw std::invalid_argument("StateVector: amplitude count must be 2^L");
  }
  return StateVector(L, std::move(amplitudes));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return std::sqrt(s);
}

complex StateVector::inner(const StateVector& other) const {
  require_qubits(qubits_, other.qubits_, "inner");
  complex s = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    s += std::conj(amplitudes_[i]) * other.amplitudes_[i];
  }
  return s;
}

StateVector& apply_pauli_rotation(StateVector& state, const PauliString& p,
                                  double theta) {
  require_qubits(state.qubits(), p.length(), "apply_pauli_rotation");
  if (p.phase() == Phase::minus_one()) {
    theta = -theta;
  } else if (p.phase() != Phase::one()) {
    throw std::invalid_argument(
        "apply_pauli_rotation: generator must be Hermitian (phase +-1)");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const std::uint64_t xm = p.x_mask();
  const std::uint64_t zm = p.z_mask();
  auto amps = state.amplitudes();
  const std::size_t dim = amps.size();

  if (xm == 0) {
    const complex plus(c, -s);   // sign +1
    const complex minus(c, s);   // sign -1
    for (std::size_t z = 0; z < dim; ++z) {
      amps[z] *= (std::popcount(z & zm) & 1) ? minus : plus;
    }
    return state;
  }

  // -i * i^{nY}: multiplies the partner amplitude.
  const complex k =
      complex(0.0, -s) * Phase(static_cast<int>(p.y_count())).value();
  const std::size_t pivot = std::bit_floor(xm);
  // Visit each pair (z, z ^ xm) once through its member with the pivot bit
  // clear.
  for (std::size_t hi = 0; hi < dim; hi += 2 * pivot) {
    for (std::size_t z = hi; z < hi + pivot; ++z) {
      const std::size_t w = z ^ xm;
      const complex az = amps[z];
      const complex aw = amps[w];
      if (zm == 0) {
        amps[z] = c * az + k * aw;
        amps[w] = c * aw + k * az;
      } else {
        // (P a)_z = i^{nY} sign(w) a_w, (P a)_w = i^{nY} sign(z) a_z.
        amps[z] = c * az + k * parity_sign(w, zm) * aw;
        amps[w] = c * aw + k * parity_sign(z, zm) * az;
      }
    }
  }
  return state;
}

StateVector& apply_diagonal_phase(StateVector& state,
                                  std::span<const double> energies,
                                  double gamma) {
  auto amps = state.amplitudes();
  if (energies.size() != amps.size()) {
    throw std::invalid_argument(
        "apply_diagonal_phase: energy table size does not match the state");
  }
  for (std::size_t z = 0; z < amps.size(); ++z) {
    amps[z] *= std::polar(1.0, -gamma * energies[z]);
  }
  return state;
}

std::vector<double> diagonal_energies(const PauliSum& h) {
  if (h.length() < 1 || h.length() > kMaxStateQubits) {
    throw std::invalid_argument("diagonal_energies: qubit count out of range");
  }
  const std::size_t dim = std::size_t{1} << h.length();
  std::vector<double> energies(dim, 0.0);
  for (const auto& t : h.terms()) {
    if (!t.string.is_diagonal()) {
      throw std::invalid_argument("diagonal_energies: term " +
                                  t.string.letters() + " is not diagonal");
    }
    if (std::abs(t.coefficient.imag()) > PauliSum::kHermitianTolerance) {
      throw std::domain_error("diagonal_energies: complex coefficient");
    }
    const double c = t.coefficient.real();
    const std::uint64_t zm = t.string.z_mask();
    for (std::size_t z = 0; z < dim; ++z) energies[z] += c * parity_sign(z, zm);
  }
  return energies;
}

void apply_pauli_string(std::span<const complex> in, const PauliString& p,
                        std::span<complex> out, complex scale,
                        bool accumulate) {
  if (in.size() != out.size() || in.size() != (std::size_t{1} << p.length())) {
    throw std::invalid_argument("apply_pauli_string: size mismatch");
  }
  const complex pre = scale * action_prefactor(p);
  const std::uint64_t xm = p.x_mask();
  const std::uint64_t zm = p.z_mask();
  for (std::size_t z = 0; z < in.size(); ++z) {
    const complex v = pre * parity_sign(z, zm) * in[z];
    if (accumulate) {
      out[z ^ xm] += v;
    } else {
      out[z ^ xm] = v;
    }
  }
}

void apply_pauli_sum(std::span<const complex> in, const PauliSum& h,
                     std::span<complex> out) {
  std::fill(out.begin(), out.end(), complex(0.0));
  for (const auto& t : h.terms()) {
    apply_pauli_string(in, t.string, out, t.coefficient, true);
  }
}

StateVector apply(const PauliSum& h, const StateVector& state) {
  require_qubits(state.qubits(), h.length(), "apply");
  std::vector<complex> out(state.dimension());
  apply_pauli_sum(state.amplitudes(), h, out);
  return StateVector::from_amplitudes(state.qubits(), std::move(out));
}

complex matrix_element(const StateVector& bra, const PauliString& p,
                       const StateVector& ket) {
  require_qubits(ket.qubits(), p.length(), "matrix_element");
  require_qubits(bra.qubits(), p.length(), "matrix_element");
  const auto b = bra.amplitudes();
  const auto k = ket.amplitudes();
  const std::uint64_t xm = p.x_mask();
  const std::uint64_t zm = p.z_mask();
  complex s = 0.0;
  for (std::size_t z = 0; z < k.size(); ++z) {
    // <z^x| P |z> = prefactor * sign(z).
    s += std::conj(b[z ^ xm]) * parity_sign(z, zm) * k[z];
  }
  return s * action_prefactor(p);
}

complex expectation(const StateVector& state, const PauliString& p) {
  return matrix_element(state, p, state);
}

double expectation(const StateVector& state, const PauliSum& h) {
  require_qubits(state.qubits(), h.length(), "expectation");
  complex total = 0.0;
  for (const auto& t : h.terms()) {
    total += t.coefficient * expectation(state, t.string);
  }
  if (std::abs(total.imag()) > kExpectationImagTolerance) {
    throw std::domain_error(
        "expectation: imaginary residue " + std::to_string(total.imag()) +
        " (operator not Hermitian?)");
  }
  return total.real();
}

std::vector<double> probabilities(const StateVector& state) {
  std::vector<double> out;
  out.reserve(state.dimension());
  for (const auto& a : state.amplitudes()) out.push_back(std::norm(a));
  return out;
}

}  // namespace dcqaoa
