#include "dcqaoa/ansatz.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace dcqaoa {

namespace {

std::size_t first_site(const PauliString& s) {
  return static_cast<std::size_t>(std::countr_zero(s.x_mask() | s.z_mask()));
}

// Terms of a sum sorted by their lowest occupied site (stable on ties).
std::vector<PauliSum::Term> ascending_site_order(const PauliSum& h) {
  std::vector<PauliSum::Term> terms = h.terms();
  std::stable_sort(terms.begin(), terms.end(),
                   [](const PauliSum::Term& a, const PauliSum::Term& b) {
                     return first_site(a.string) < first_site(b.string);
                   });
  return terms;
}

}  // namespace

std::string to_string(Variant v) {
  return v == Variant::QAOA ? "qaoa" : "dcqaoa";
}

Variant variant_from_string(const std::string& name) {
  if (name == "qaoa" || name == "QAOA") return Variant::QAOA;
  if (name == "dcqaoa" || name == "DCQAOA" || name == "dc-qaoa" ||
      name == "DC-QAOA") {
    return Variant::DCQAOA;
  }
  throw std::invalid_argument("unknown variant '" + name + "'");
}

void AnsatzSpec::validate() const {
  if (p < 1) throw std::invalid_argument("ansatz: p must be >= 1");
  if (variant == Variant::QAOA && cd) {
    throw std::invalid_argument("ansatz: QAOA takes no CD operator");
  }
  if (variant == Variant::DCQAOA) {
    if (!cd || cd->terms.empty()) {
      throw std::invalid_argument("ansatz: DC-QAOA needs a CD operator");
    }
    for (const auto& t : cd->terms) {
      if (t.string.y_count() % 2 != 1) {
        throw std::invalid_argument("ansatz: CD string " + t.string.letters() +
                                    " has an even number of Y letters");
      }
    }
  }
}

AnsatzSpec qaoa_spec(std::size_t p) {
  AnsatzSpec spec{Variant::QAOA, p, std::nullopt};
  spec.validate();
  return spec;
}

AnsatzSpec dcqaoa_spec(std::size_t p, CdOperator cd) {
  AnsatzSpec spec{Variant::DCQAOA, p, std::move(cd)};
  spec.validate();
  return spec;
}

std::size_t parameter_count(const AnsatzSpec& spec) {
  spec.validate();
  return (spec.variant == Variant::QAOA ? 2 : 3) * spec.p;
}

ParameterVector ParameterVector::zeros(const AnsatzSpec& spec) {
  ParameterVector v;
  v.gamma.assign(spec.p, 0.0);
  v.beta.assign(spec.p, 0.0);
  if (spec.variant == Variant::DCQAOA) v.alpha.assign(spec.p, 0.0);
  return v;
}

ParameterVector ParameterVector::unflatten(const AnsatzSpec& spec,
                                           std::span<const double> flat) {
  if (flat.size() != parameter_count(spec)) {
    throw std::invalid_argument("parameter vector has " +
                                std::to_string(flat.size()) + " entries, " +
                                std::to_string(parameter_count(spec)) +
                                " expected");
  }
  const std::size_t p = spec.p;
  ParameterVector v;
  v.gamma.assign(flat.begin(), flat.begin() + p);
  v.beta.assign(flat.begin() + p, flat.begin() + 2 * p);
  if (spec.variant == Variant::DCQAOA) {
    v.alpha.assign(flat.begin() + 2 * p, flat.end());
  }
  return v;
}

std::vector<double> ParameterVector::flatten() const {
  std::vector<double> flat = gamma;
  flat.insert(flat.end(), beta.begin(), beta.end());
  flat.insert(flat.end(), alpha.begin(), alpha.end());
  return flat;
}

// ---------------------------------------------------------------------------

CompiledAnsatz::CompiledAnsatz(AnsatzSpec spec, ModelTriple model)
    : spec_(std::move(spec)), model_(std::move(model)) {
  spec_.validate();
  const std::size_t L = model_.h_prob.length();
  if (model_.h_mixer.length() != L) {
    throw std::invalid_argument("ansatz: mixer and problem lengths differ");
  }
  if (spec_.cd) {
    for (const auto& t : spec_.cd->terms) {
      if (t.string.length() != L) {
        throw std::invalid_argument("ansatz: CD operator length mismatch");
      }
    }
  }
  const PauliSum h = model_.h_prob.hermitian();
  auto [diag, offdiag] = h.split_diagonal();
  diagonal_ = diagonal_energies(diag);
  const bool has_diag = !diag.empty();
  const auto offdiag_terms = ascending_site_order(offdiag);
  const auto mixer_terms = ascending_site_order(model_.h_mixer.hermitian());

  const std::size_t p = spec_.p;
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t g = j, b = p + j, a = 2 * p + j;
    if (has_diag) gates_.push_back({Gate::Kind::Diagonal, g, 1.0, {}});
    for (const auto& t : offdiag_terms) {
      gates_.push_back({Gate::Kind::Rotation, g, t.coefficient.real(), t.string});
    }
    for (const auto& t : mixer_terms) {
      gates_.push_back({Gate::Kind::Rotation, b, t.coefficient.real(), t.string});
    }
    if (spec_.variant == Variant::DCQAOA) {
      for (const auto& t : spec_.cd->terms) {
        gates_.push_back({Gate::Kind::Rotation, a, t.weight, t.string});
      }
    }
  }
}

void CompiledAnsatz::check(const ParameterVector& params) const {
  const bool dc = spec_.variant == Variant::DCQAOA;
  if (params.gamma.size() != spec_.p || params.beta.size() != spec_.p ||
      params.alpha.size() != (dc ? spec_.p : 0)) {
    throw std::invalid_argument(
        "ansatz: parameter vector does not match the spec (p=" +
        std::to_string(spec_.p) + ", variant " + to_string(spec_.variant) +
        ")");
  }
}

StateVector CompiledAnsatz::run(const ParameterVector& params) const {
  check(params);
  const auto flat = params.flatten();
  StateVector psi = StateVector::plus(qubits());
  for (const auto& gate : gates_) {
    const double angle = gate.scale * flat[gate.param];
    if (gate.kind == Gate::Kind::Diagonal) {
      apply_diagonal_phase(psi, diagonal_, angle);
    } else {
      apply_pauli_rotation(psi, gate.string, angle);
    }
  }
  return psi;
}

double CompiledAnsatz::cost(const ParameterVector& params) const {
  return expectation(run(params), model_.h_prob);
}

CompiledAnsatz::CostGradient CompiledAnsatz::cost_and_gradient(
    const ParameterVector& params) const {
  const auto flat = params.flatten();
  StateVector psi = run(params);
  StateVector lambda = apply(model_.h_prob, psi);

  CostGradient out;
  out.cost = psi.inner(lambda).real();
  out.gradient.assign(flat.size(), 0.0);

  // Walk back through the gates: psi and lambda are kept at the output of
  // the current gate, and each gate contributes 2 s Im<lambda|G|psi>.
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    const double angle = it->scale * flat[it->param];
    complex overlap;
    if (it->kind == Gate::Kind::Diagonal) {
      const auto l = lambda.amplitudes();
      const auto k = psi.amplitudes();
      for (std::size_t z = 0; z < k.size(); ++z) {
        overlap += std::conj(l[z]) * diagonal_[z] * k[z];
      }
      apply_diagonal_phase(psi, diagonal_, -angle);
      apply_diagonal_phase(lambda, diagonal_, -angle);
    } else {
      overlap = matrix_element(lambda, it->string, psi);
      apply_pauli_rotation(psi, it->string, -angle);
      apply_pauli_rotation(lambda, it->string, -angle);
    }
    out.gradient[it->param] += 2.0 * it->scale * overlap.imag();
  }
  return out;
}

StateVector run(const AnsatzSpec& spec, const ParameterVector& params,
                const ModelTriple& model) {
  return CompiledAnsatz(spec, model).run(params);
}

// ---------------------------------------------------------------------------

std::size_t rotation_depth(const PauliString& p) {
  const std::size_t w = p.weight();
  if (w <= 1) return w;
  const bool basis_change = p.x_mask() != 0;
  return 2 * (w - 1) + 1 + (basis_change ? 1 : 0);
}

namespace {

// Greedy packing of mutually commuting terms into rounds without shared
// qubits; each round costs the deepest rotation in it.
std::size_t scheduled_depth(const std::vector<PauliString>& strings) {
  struct Round {
    std::uint64_t qubits = 0;
    std::size_t depth = 0;
  };
  std::vector<Round> rounds;
  for (const auto& s : strings) {
    const std::uint64_t support = s.x_mask() | s.z_mask();
    if (support == 0) continue;
    auto it = std::find_if(rounds.begin(), rounds.end(), [&](const Round& r) {
      return (r.qubits & support) == 0;
    });
    if (it == rounds.end()) it = rounds.insert(rounds.end(), Round{});
    it->qubits |= support;
    it->depth = std::max(it->depth, rotation_depth(s));
  }
  std::size_t total = 0;
  for (const auto& r : rounds) total += r.depth;
  return total;
}

std::vector<PauliString> strings_of(const PauliSum& h) {
  std::vector<PauliString> out;
  for (const auto& t : h.terms()) out.push_back(t.string);
  // Deeper rotations first so the greedy packing groups like with like.
  std::stable_sort(out.begin(), out.end(),
                   [](const PauliString& a, const PauliString& b) {
                     return rotation_depth(a) > rotation_depth(b);
                   });
  return out;
}

}  // namespace

DepthReport depth(const AnsatzSpec& spec, const ModelTriple& model) {
  spec.validate();
  auto [diag, offdiag] = model.h_prob.split_diagonal();
  DepthReport r;
  r.per_layer = scheduled_depth(strings_of(diag)) +
                scheduled_depth(strings_of(offdiag)) +
                scheduled_depth(strings_of(model.h_mixer));
  if (spec.variant == Variant::DCQAOA) {
    for (const auto& t : spec.cd->terms) {
      r.cd_per_layer = std::max(r.cd_per_layer, rotation_depth(t.string));
    }
  }
  r.total = (r.per_layer + r.cd_per_layer) * spec.p;
  return r;
}

}  // namespace dcqaoa
