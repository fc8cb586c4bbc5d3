#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "gchain/kernel.hpp"
#include "gchain/rng.hpp"

namespace gchain {

struct SimConfig {
    uint64_t seed = 0;
    int replicas = 1;
    int64_t horizon = 1;
    int64_t burn_in = 0;
    double tol = 1e-12;
};

// --- path simulation --------------------------------------------------------

struct PathResult {
    Word path;
    double max_step_defect = 0.0;  // largest per-step renormalization gap
    double sum_step_defect = 0.0;
};

// Samples length symbols from the kernel, step by step, using renormalized
// interval midpoints. Declared-forbidden transitions are never realized.
PathResult simulate_path(const Kernel& k, const PastSpec& past, int64_t length, uint64_t seed,
                         double tol = 1e-12);

// --- hitting times ------------------------------------------------------------

struct HittingReport {
    std::vector<int64_t> samples;  // -1 encodes a timeout
    int64_t cap = 0;
    double empirical_mean = 0.0;   // over non-timeout samples
    double timeout_fraction = 0.0;
};

// First m >= K whose trailing K freshly simulated symbols form a word of
// target; a past already ending in the target does not count.
HittingReport hitting_time(const Kernel& k, const PastSpec& past, const std::set<Word>& target,
                           int K, int64_t cap, const SimConfig& config);

// --- predictable absolute-continuity diagnostic -------------------------------

enum class SummabilityVerdict { summable_evidence, diverging_evidence, inconclusive };

struct DkSeries {
    std::vector<int> ks;            // 2..horizon
    std::vector<double> dk_mean;    // across replicas
    std::vector<double> dk_max;
    std::vector<double> partial_sums;  // running mean partial sums
    SummabilityVerdict verdict = SummabilityVerdict::inconclusive;
    int n_offset = 0;               // window start actually used
    int replicas = 0;
    int retries = 0;                // window enlargements caused by support mismatches
};

struct DkSingle {
    std::vector<double> dk;  // index k-2 holds d_k
    Word path;               // sampled trajectory w_1..w_{n+horizon}
    bool support_mismatch = false;
};

// One trajectory from the x-chain and the per-step squared row divergence
// between the two conditional laws along it (square-root route by default,
// plain differences scaled by 1/(4*floor) otherwise).
DkSingle dk_single(const Kernel& k, const PastSpec& x, const PastSpec& y, int n, int64_t horizon,
                   bool use_sqrt, double tol, uint64_t seed);

// Aggregates replicas; on support mismatch the window start doubles (up to
// 4096) before the run counts. Throws IncompatibleSupports when no window
// works.
DkSeries dk_series(const Kernel& k, const PastSpec& x, const PastSpec& y, int n, int64_t horizon,
                   bool use_sqrt, const SimConfig& config);

// --- total variation over a window ---------------------------------------------

struct TvEstimate {
    Interval value;
    bool exact = false;
    double std_error = 0.0;  // Monte-Carlo only
};

// Total variation distance between the laws of the window_len symbols that
// follow window_start steps, under the chains started from x and from y.
TvEstimate tv_window_exact(const Kernel& k, const PastSpec& x, const PastSpec& y,
                           int window_start, int window_len, uint64_t node_budget = 1'000'000);
TvEstimate tv_window_mc(const Kernel& k, const PastSpec& x, const PastSpec& y, int window_start,
                        int window_len, const SimConfig& config);

// --- first-entrance decomposition check -----------------------------------------

struct DecompositionCheck {
    Interval total_mass;
    bool pass = false;
    Interval exact_mass;      // entrance mass enumerated exactly (n <= exact_depth)
    double mc_fraction = 0.0; // estimated mass of T > exact_depth
    double mc_error = 0.0;    // three standard errors
    int exact_depth = 0;
};

// Splits trajectory mass by the first time the trailing K-word enters the
// target: exact enumeration for small n, Monte-Carlo beyond, and checks the
// pieces cover probability one.
DecompositionCheck hitting_decomposition_check(const Kernel& k, const PastSpec& past,
                                               const std::set<Word>& target, int K, int64_t cap,
                                               const SimConfig& config, int exact_depth = 12);

// --- empirical stationary statistics ---------------------------------------------

// Frequencies of length-cyl_len windows along one long path after burn-in.
std::map<Word, double> empirical_cylinder_distribution(const Kernel& k, const PastSpec& past,
                                                       int cyl_len, const SimConfig& config);

}  // namespace gchain
