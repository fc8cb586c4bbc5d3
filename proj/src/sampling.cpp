#include "gchain/sampling.hpp"

#include <cmath>

namespace gchain {

Symbol sample_symbol(const Kernel& k, const KernelState& s, Rng& rng, double tol,
                     double* defect) {
    RowEnumeration row = enumerate_row(k, s, tol);
    double mass = 0.0;
    for (const auto& [a, p] : row.entries)
        if (!k.forbidden(s, a)) mass += p.mid();
    if (defect) *defect = std::abs(1.0 - mass);
    if (mass <= 0.0)
        throw Error(Error::Code::TolUnachievable, "kernel row has no usable mass");
    double u = rng.next_double() * mass;
    Symbol last_ok = -1;
    for (const auto& [a, p] : row.entries) {
        if (k.forbidden(s, a)) continue;
        double m = p.mid();
        if (m <= 0.0) continue;
        last_ok = a;
        u -= m;
        if (u < 0.0) return a;
    }
    return last_ok;  // u landed in rounding slack; clamp to the last symbol
}

}  // namespace gchain
