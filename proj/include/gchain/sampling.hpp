#pragma once

#include "gchain/kernel.hpp"
#include "gchain/rng.hpp"

namespace gchain {

// One draw from the kernel row at the given state: interval midpoints,
// renormalized. Structurally forbidden symbols are never returned. The
// difference between 1 and the enumerated midpoint mass is reported through
// *defect when requested.
Symbol sample_symbol(const Kernel& k, const KernelState& s, Rng& rng, double tol,
                     double* defect = nullptr);

}  // namespace gchain
