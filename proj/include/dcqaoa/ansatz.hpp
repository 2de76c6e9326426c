#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcqaoa/models.hpp"
#include "dcqaoa/sim.hpp"

namespace dcqaoa {

enum class Variant { QAOA, DCQAOA };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

/// Layer layout. Each layer applies U_p(gamma), U_m(beta), then (DC-QAOA
/// only) U_CD(alpha) = prod_terms exp(-i alpha w P) in term order.
struct AnsatzSpec {
  Variant variant = Variant::QAOA;
  std::size_t p = 1;
  std::optional<CdOperator> cd;

  /// Throws std::invalid_argument on p = 0, a CD operator on plain QAOA, a
  /// missing one on DC-QAOA, or a CD string with even Y-count.
  void validate() const;

  static constexpr const char* kLayerOrder = "problem,mixer,cd";
  /// How a non-diagonal problem Hamiltonian is digitized inside U_p.
  static constexpr const char* kSplitOrder = "diagonal-then-offdiagonal";
};

AnsatzSpec qaoa_spec(std::size_t p);
AnsatzSpec dcqaoa_spec(std::size_t p, CdOperator cd);

struct ParameterVector {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> alpha;

  static ParameterVector zeros(const AnsatzSpec& spec);
  /// Flat layout [gamma..., beta..., alpha...].
  static ParameterVector unflatten(const AnsatzSpec& spec,
                                   std::span<const double> flat);
  std::vector<double> flatten() const;
  std::size_t size() const { return gamma.size() + beta.size() + alpha.size(); }
};

std::size_t parameter_count(const AnsatzSpec& spec);

/// Circuit compiled once per (spec, model): the diagonal part of H_prob is
/// tabulated, the rest becomes a list of Pauli rotations.
class CompiledAnsatz {
 public:
  CompiledAnsatz(AnsatzSpec spec, ModelTriple model);

  const AnsatzSpec& spec() const { return spec_; }
  const ModelTriple& model() const { return model_; }
  std::size_t qubits() const { return model_.h_prob.length(); }

  StateVector run(const ParameterVector& params) const;

  /// F = <psi|H_prob|psi>.
  double cost(const ParameterVector& params) const;

  struct CostGradient {
    double cost = 0.0;
    /// Flat layout matching ParameterVector::flatten.
    std::vector<double> gradient;
  };

  /// Exact gradient by an adjoint (reverse) sweep over the gates.
  CostGradient cost_and_gradient(const ParameterVector& params) const;

 private:
  struct Gate {
    enum class Kind { Diagonal, Rotation } kind;
    std::size_t param;  // flat index
    double scale;       // angle = scale * param
    PauliString string; // Rotation only
  };

  void check(const ParameterVector& params) const;

  AnsatzSpec spec_;
  ModelTriple model_;
  std::vector<double> diagonal_;  // energies of the I/Z part of H_prob
  std::vector<Gate> gates_;
};

StateVector run(const AnsatzSpec& spec, const ParameterVector& params,
                const ModelTriple& model);

struct DepthReport {
  std::size_t per_layer = 0;     // d: problem + mixer
  std::size_t cd_per_layer = 0;  // d_cd
  std::size_t total = 0;         // (d + d_cd) * p
};

/// Depth of exp(-i theta P): 1 for one-qubit strings; otherwise a CNOT
/// ladder each way around an RZ, plus one basis-change layer when X or Y
/// letters are present (ZZ -> 3, ZY -> 4).
std::size_t rotation_depth(const PauliString& p);

DepthReport depth(const AnsatzSpec& spec, const ModelTriple& model);

}  // namespace dcqaoa
