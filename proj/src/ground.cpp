#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "dcqaoa/models.hpp"
#include "dcqaoa/sim.hpp"
#include "models_detail.hpp"

namespace dcqaoa {

namespace {

using Vector = Eigen::VectorXcd;

GroundState sweep_ground_state(const ProblemInstance& inst) {
  if (inst.L > kMaxSweepQubits) {
    throw std::invalid_argument("ground_energy: L=" + std::to_string(inst.L) +
                                " exceeds the sweep limit of 20");
  }
  const std::uint64_t dim = std::uint64_t{1} << inst.L;
  std::vector<double> energies(dim);
  for (std::uint64_t z = 0; z < dim; ++z) {
    energies[z] = detail::classical_energy_unchecked(inst, z).energy;
  }
  const double e0 = *std::min_element(energies.begin(), energies.end());
  const auto count = std::count_if(energies.begin(), energies.end(), [&](double e) {
    return e - e0 <= kDegeneracyTolerance;
  });
  return {e0, static_cast<std::size_t>(count)};
}

}  // namespace

double lowest_eigenvalue(const PauliSum& h, const LanczosOptions& options) {
  const std::size_t L = h.length();
  if (L < 1 || L > kMaxLanczosQubits) {
    throw std::invalid_argument("lowest_eigenvalue: L=" + std::to_string(L) +
                                " outside [1, 14]");
  }
  if (!h.is_hermitian()) {
    throw std::domain_error("lowest_eigenvalue: operator is not Hermitian");
  }
  const Eigen::Index dim = Eigen::Index{1} << L;
  const std::size_t max_iter = options.max_iterations
                                   ? options.max_iterations
                                   : 10 * static_cast<std::size_t>(dim);
  const std::size_t krylov_cap =
      std::min<std::size_t>(max_iter, static_cast<std::size_t>(dim));

  // Random start so no symmetry sector is missed.
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = complex(normal(rng), normal(rng));
  v.normalize();

  std::vector<Vector> basis;
  std::vector<double> alpha, beta;
  Vector w(dim);

  for (std::size_t m = 0; m < krylov_cap; ++m) {
    basis.push_back(v);
    apply_pauli_sum({v.data(), static_cast<std::size_t>(dim)}, h,
                    {w.data(), static_cast<std::size_t>(dim)});
    alpha.push_back(v.dot(w).real());
    // Full reorthogonalization, applied twice for stability.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) w -= b.dot(w) * b;
    }
    const double b_next = w.norm();

    const auto n = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), n);
    Eigen::VectorXd sub = n > 1 ? Eigen::VectorXd(
                                      Eigen::Map<Eigen::VectorXd>(beta.data(), n - 1))
                                : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()[0];
    const double residual = b_next * std::abs(tri.eigenvectors()(n - 1, 0));

    const double scale = std::max(1.0, std::abs(theta));
    // Small b_next means the Krylov space is invariant and theta is exact.
    if (residual <= options.tolerance * scale || b_next <= 1e-14 * scale) {
      return theta;
    }
    beta.push_back(b_next);
    v = w / b_next;
  }
  throw std::runtime_error("lowest_eigenvalue: Lanczos did not converge to " +
                           std::to_string(options.tolerance));
}

GroundState ground_energy(const ProblemInstance& inst) {
  validate(inst);
  if (inst.is_diagonal()) return sweep_ground_state(inst);
  if (inst.L > kMaxLanczosQubits) {
    throw std::invalid_argument("ground_energy: L=" + std::to_string(inst.L) +
                                " exceeds the iterative-solver limit of 14");
  }
  return {lowest_eigenvalue(build(inst).h_prob), std::nullopt};
}

}  // namespace dcqaoa
