#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "gchain/history.hpp"
#include "gchain/interval.hpp"
#include "gchain/zeros.hpp"

namespace gchain {

// Kernel-specific sufficient statistic of the past.
class KernelState {
public:
    virtual ~KernelState() = default;
    virtual std::unique_ptr<KernelState> clone() const = 0;
};

using StatePtr = std::unique_ptr<KernelState>;

// Exact merge key for enumeration: states with equal keys yield bit-identical
// probability() and forbidden() results for every continuation, provided each
// call uses a tolerance >= the tol the key was derived for.
using CollapseKey = std::vector<int64_t>;

/*
 * A transition-probability rule on left-infinite pasts. Evaluation is
 * interval valued: kernels whose rows involve infinite sums truncate them
 * and certify the error, so an eval with tolerance tol returns an interval
 * of width <= tol around the true probability. Kernels are immutable after
 * construction and safe to share across threads; states are cheap and
 * independently owned.
 */
class Kernel {
public:
    virtual ~Kernel() = default;

    const Alphabet& alphabet() const { return alphabet_; }
    const ZeroDeclaration& zeros() const { return zeros_; }

    virtual StatePtr start(const PastSpec& past) const = 0;
    virtual void advance(KernelState& s, Symbol a) const = 0;

    // Interval of width <= tol containing g(past . a).
    virtual ProbInterval probability(const KernelState& s, Symbol a, double tol) const = 0;

    // Exact structural zero test, driven by the declared zero set.
    virtual bool forbidden(const KernelState& s, Symbol a) const = 0;

    // Analytic upper bound on the order-k variation rate, when available.
    virtual std::optional<double> variation_bound(int /*k*/) const { return std::nullopt; }

    // Set when the kernel depends on finitely many past symbols.
    virtual std::optional<int> markov_order() const { return std::nullopt; }

    // inf{g : g > 0} when the kernel can certify it.
    virtual std::optional<double> positive_floor() const { return std::nullopt; }

    virtual bool continuous() const = 0;

    virtual std::optional<CollapseKey> collapse_key(const KernelState& /*s*/,
                                                    double /*tol*/) const {
        return std::nullopt;
    }

    // Countable alphabets only: smallest symbol m with the mass of symbols
    // >= m certified <= target; returns {m, certified bound}.
    virtual std::pair<Symbol, double> enumeration_cutoff(const KernelState& /*s*/,
                                                         double /*target*/) const {
        return {alphabet_.size, 0.0};
    }

    virtual std::string tag() const = 0;

protected:
    Alphabet alphabet_;
    ZeroDeclaration zeros_;
};

using KernelPtr = std::shared_ptr<const Kernel>;

// --- evaluation helpers -----------------------------------------------------

// g(past . symbol) as an interval of width <= tol.
ProbInterval eval_kernel(const Kernel& k, const PastSpec& past, Symbol symbol, double tol);

// Exact positivity of g_1(past, word) = product of one-step transitions.
bool word_positive(const Kernel& k, const PastSpec& past, const Word& word);

// One row of the kernel, enumerated far enough that the un-enumerated mass
// is certified <= the alphabet's truncation mass (0 for finite alphabets).
struct RowEnumeration {
    std::vector<std::pair<Symbol, ProbInterval>> entries;
    double tail_bound = 0.0;
};
RowEnumeration enumerate_row(const Kernel& k, const KernelState& s, double tol);

// --- variation rate ----------------------------------------------------------

struct VariationBound {
    double upper = 0.0;
    double lower = 0.0;
};

struct SampledVariation {
    int probes = 200;
    uint64_t seed = 0;
};

// Bounds on the order-k variation rate: sup over past pairs sharing the last
// k+1 symbols of the L1 distance between next-symbol rows. Analytic mode
// reports the kernel's certified upper bound; sampled mode reports the best
// lower bound found over random probe pairs.
VariationBound variation_rate(const Kernel& k, int order,
                              const std::optional<SampledVariation>& sampled = std::nullopt);

// --- pairwise squared row divergence -----------------------------------------

// Sum over next symbols of (h(x w a) - h(y w a))^2 with h = sqrt(g) or h = g.
// A structurally forbidden transition on both sides contributes exactly 0.
Interval step_divergence(const Kernel& k, const PastSpec& x, const PastSpec& y, const Word& w,
                         bool use_sqrt, double tol);

// --- iterated kernel ----------------------------------------------------------

// Probability that the next |word| symbols after n-1 free steps spell `word`,
// starting from `past`. Enumerates intermediate histories, merging states
// with equal collapse keys; raw enumeration is capped by node_budget.
ProbInterval iterate_kernel(const Kernel& k, const PastSpec& past, const Word& word, int n,
                            double tol, uint64_t node_budget = 1'000'000);

}  // namespace gchain
