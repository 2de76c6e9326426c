#pragma once

#include "dcqaoa/models.hpp"

namespace dcqaoa::detail {

// classical_energy without the per-call validation, for bitstring sweeps.
ClassicalEnergy classical_energy_unchecked(const ProblemInstance& inst,
                                           std::uint64_t bits);

}  // namespace dcqaoa::detail
