#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "gchain/bool_matrix.hpp"
#include "gchain/kernel.hpp"

namespace gchain {

// Lower/upper boolean approximations of which one-step word transitions are
// possible: under(u,v) = 1 only if the step is positive from every past
// ending in u, over(u,v) = 0 only if it is forbidden from every such past.
struct TransitionBounds {
    int K = 1;
    int alphabet_size = 0;
    BoolMatrix under;
    BoolMatrix over;
    TransitionBounds(int k, int n, uint64_t dim) : K(k), alphabet_size(n), under(dim), over(dim) {}
};

TransitionBounds build_bound_matrices(const Kernel& kernel, int K,
                                      uint64_t row_budget = 1ull << 20);

// --- essential row irreducibility ------------------------------------------------

enum class EriVerdict { ERI, NotERI, Undecided };

struct MonteCarloHitting {
    int trials = 10'000;
    int64_t cap = 1'000'000;
    uint64_t seed = 0;
};

struct HittingEvidence {
    enum class Kind { none, analytic, monte_carlo } kind = Kind::none;
    int trials = 0;
    int64_t cap = 0;
    int timeouts = 0;
    int starts = 0;
};

struct EriReport {
    EriVerdict verdict = EriVerdict::Undecided;
    std::string reason;
    std::set<Word> core;                      // the class over which rows become all-ones
    bool core_is_full_space = false;          // countable case: the class is all of A^K
    std::map<Word, uint64_t> primitivity_witness;  // word -> smallest n with all-ones row
    HittingEvidence hitting;
    std::vector<std::set<Word>> candidates;   // closed classes examined
};

// hitting: analytic closed-class analysis (finite-order kernels only) or
// Monte-Carlo trials from the word prefixes outside the candidate class.
struct HittingSpec {
    bool analytic = true;
    MonteCarloHitting mc;
};

EriReport check_eri(const TransitionBounds& bounds, const Kernel& kernel,
                    const HittingSpec& hitting);

// Countable alphabets carry their transition structure as a declared hub
// pattern instead of explicit matrices.
EriReport check_eri_countable(const Kernel& kernel, int K);

// --- assumptions ------------------------------------------------------------------

struct AssumptionB {
    enum class Status { holds, violated, undecided } status = Status::undecided;
    std::optional<Word> witness;  // offending long context when violated
};

// Every declared forbidden context longer than K must have its length-K
// suffix outside the core class.
AssumptionB check_assumption_B(const Kernel& kernel, int K, const std::set<Word>& core);

struct AssumptionC {
    enum class Status { holds_on_probes, violated, undecided } status = Status::undecided;
    std::map<PastSpec, Word> witnesses;   // probe -> escape word
    std::optional<PastSpec> violating_probe;
};

// For each probe past (suffix inside the core), search for a positive word
// that is not a substring of any finite string leading the probe into a
// declared isolated zero.
AssumptionC check_assumption_C(const Kernel& kernel, int K, const std::set<Word>& core,
                               const std::vector<PastSpec>& probes, int max_len = 6);

// Default probe pasts: each core word preceded by the declaration's isolated
// tails, or by constant tails when nothing is declared.
std::vector<PastSpec> default_probes(const Kernel& kernel, int K, const std::set<Word>& core,
                                     size_t max_probes = 32);

// --- positivity profile -----------------------------------------------------------

// Exact support of the n-step law on length-K words from `past`, resolved
// through the declared zero structure.
std::set<Word> positivity_profile(const Kernel& kernel, const PastSpec& past, int n, int K,
                                  uint64_t node_budget = 1'000'000);

}  // namespace gchain
