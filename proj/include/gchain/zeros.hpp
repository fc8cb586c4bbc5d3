#pragma once

#include <optional>
#include <vector>

#include "gchain/past.hpp"

namespace gchain {

// g(y . context . symbol) = 0 for every infinite past y.
struct CylinderZero {
    Word context;
    Symbol symbol;
};

// g(past . symbol) = 0 exactly at that one infinite past.
struct IsolatedZero {
    PastSpec past;
    Symbol symbol;
};

// Declared zero structure of a kernel. Structural analysis trusts these
// declarations and never infers zeros from small numeric values.
struct ZeroDeclaration {
    std::vector<CylinderZero> cylinder_zeros;
    std::vector<IsolatedZero> isolated_zeros;
    bool complete = false;

    // Countable alphabets cannot list their cylinder zeros one by one; the
    // only supported finite pattern is the hub form: once the latest symbol
    // differs from `hub`, every next symbol except `hub` is forbidden.
    std::optional<Symbol> countable_hub;

    // No isolated zero may be subsumed by a cylinder zero.
    void validate() const;

    bool has_isolated() const { return !isolated_zeros.empty(); }
};

// Does some declared cylinder zero with this symbol match a past ending in
// `recent` (recent must be at least as long as every declared context)?
bool cylinder_matches(const ZeroDeclaration& decl, const Word& recent, Symbol symbol);

// Finite words u with past . u equal to a declared isolated-zero past.
// Lengths are reported up to max_len; unbounded_family is set when the
// matches continue for arbitrarily long u (the probe past already lies on
// the periodic part of the declared past).
struct IsolatedMatch {
    std::vector<Word> elements;   // members of length <= max_len
    bool unbounded_family = false;
    PastSpec family_past;         // the declared past generating the family
    IsolatedMatch() : family_past(Word{}, Word{0}) {}
};

IsolatedMatch match_isolated_extensions(const PastSpec& probe, const PastSpec& declared,
                                        size_t max_len);

// True when `v` is a substring of some element of S_probe = {u : probe.u is
// a declared isolated-zero past}, including the unbounded families.
bool blocked_by_isolated(const ZeroDeclaration& decl, const PastSpec& probe, const Word& v,
                         size_t max_len);

}  // namespace gchain
