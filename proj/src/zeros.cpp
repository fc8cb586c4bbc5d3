#include "gchain/zeros.hpp"

#include <algorithm>

namespace gchain {

void ZeroDeclaration::validate() const {
    for (const auto& iso : isolated_zeros) {
        for (const auto& cyl : cylinder_zeros) {
            if (cyl.symbol == iso.symbol && iso.past.ends_with(cyl.context))
                throw Error(Error::Code::BadInput,
                            "isolated zero is subsumed by a cylinder zero; it belongs to the "
                            "finite-cylinder class");
        }
    }
}

bool cylinder_matches(const ZeroDeclaration& decl, const Word& recent, Symbol symbol) {
    for (const auto& cyl : decl.cylinder_zeros) {
        if (cyl.symbol != symbol) continue;
        if (recent.size() < cyl.context.size()) continue;
        if (recent.ends_with(cyl.context)) return true;
    }
    return false;
}

IsolatedMatch match_isolated_extensions(const PastSpec& probe, const PastSpec& declared,
                                        size_t max_len) {
    IsolatedMatch out;
    out.family_past = declared;
    // probe.u == declared  <=>  declared ends with u and probe == declared
    // with u stripped. For each length L the candidate u is pinned to the
    // declared past's suffix.
    size_t m = declared.transient().size();
    size_t p = declared.tail().size();
    // Once L reaches past the declared transient, drop(L) cycles with the
    // tail period, so scanning to m + p sees every distinct candidate.
    size_t L_max = std::max(max_len, m + p);
    for (size_t L = 0; L <= L_max; ++L) {
        if (probe == declared.drop(L)) out.elements.push_back(declared.last(L));
    }
    // Matches at lengths beyond the declared transient recur with the tail
    // period, so one hit past that point means an unbounded family.
    for (size_t L = m; L < m + p; ++L) {
        if (probe == declared.drop(L)) {
            out.unbounded_family = true;
            break;
        }
    }
    return out;
}

bool blocked_by_isolated(const ZeroDeclaration& decl, const PastSpec& probe, const Word& v,
                         size_t max_len) {
    if (v.empty()) return true;
    for (const auto& iso : decl.isolated_zeros) {
        IsolatedMatch match = match_isolated_extensions(probe, iso.past, max_len + v.size());
        for (const auto& u : match.elements)
            if (u.contains_substring(v)) return true;
        if (match.unbounded_family) {
            // Substrings of ever longer suffixes exhaust the declared past's
            // windows; checking one suffix long enough to wrap the period
            // plus |v| covers them all.
            size_t span = iso.past.transient().size() + iso.past.tail().size() * 2 + v.size();
            if (iso.past.last(span).contains_substring(v)) return true;
        }
    }
    return false;
}

}  // namespace gchain
