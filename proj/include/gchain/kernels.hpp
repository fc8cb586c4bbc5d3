#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gchain/kernel.hpp"

namespace gchain {
namespace kernels {

// --- finite-order Markov ------------------------------------------------------

// rows: one conditional row per length-`order` context, contexts indexed by
// word_index; row width is the alphabet size. Rows must sum to 1 within 1e-12.
KernelPtr make_markov(int order, const std::vector<std::vector<double>>& rows,
                      std::vector<long> labels = {});

// --- history-weighted walk on a directed graph --------------------------------

// Walks the graph restricted to out-edges of the latest vertex; edge weights
// prefer recently visited vertices through an exponentially decaying history
// score (weight 1 + bias * score). The weighting rule is a convention of
// this library; bias = 0 gives the uniform walk.
KernelPtr make_graph_walk(const std::vector<std::pair<Symbol, Symbol>>& edges, double bias,
                          double decay);

// --- binary sparse chain -------------------------------------------------------

// Binary kernel whose probability of emitting 0 is a geometric mixture of
// window-majority rules, damped by 1/sqrt(run-1) after long runs of zeros,
// with transitions after "01", "10", "1000" and from the all-zero past
// forbidden. The remaining mass always goes to symbol 1.
KernelPtr make_sparse_chain();

// --- linear autoregressive on {-1, +1} ----------------------------------------

struct AlphaRule {
    enum class Kind { geometric, powerlaw, explicit_list };
    Kind kind = Kind::geometric;
    double ratio = 0.5;            // geometric: a_i = (1/2)(1-ratio) ratio^(i-1)
    double exponent = 2.0;         // powerlaw:  a_i = c / i^exponent, c normalizing
    std::vector<double> values;    // explicit_list: a_1..a_m, must sum to 1/2

    double value(int i) const;       // a_i, i >= 1
    double tail_upper(int k) const;  // certified upper bound on sum_{i>k} a_i
    double total() const;            // sum of all a_i (1/2 by construction)
    void validate() const;
    double powerlaw_c() const;

private:
    mutable double cached_c_ = 0.0;
};

// g(x . a) = 1/2 + epsilon * a * sum_i alpha_i x_{-i}, symbols read as -1/+1.
KernelPtr make_autoregressive(AlphaRule alphas, int epsilon);

// --- binary renewal ------------------------------------------------------------

struct QRule {
    enum class Kind { constant, harmonic_shift, custom_rational };
    Kind kind = Kind::constant;
    double c = 0.5;                      // constant
    double a = 1.0, b = 2.0;             // harmonic_shift: q_i = a / (i + b)
    double p0 = 0, p1 = 0, r0 = 1, r1 = 0;  // custom_rational: (p0 + p1 i)/(r0 + r1 i)
    std::optional<double> declared_q_inf;   // overrides the natural limit

    double q(int64_t i) const;  // i >= 0
    double limit() const;       // lim over finite i
    double q_inf() const { return declared_q_inf ? *declared_q_inf : limit(); }
    // Range of {q_i : i > k} together with q_inf, for variation bounds.
    std::pair<double, double> range_beyond(int k) const;
    void validate() const;
};

// Probability of emitting 1 depends only on the current run of trailing
// zeros: g(x 1) = q_run, with q_inf at the all-zero past.
KernelPtr make_renewal(QRule q);

// --- renewal classification -----------------------------------------------------

enum class RenewalCase {
    UniqueTrivial_1a,    // q_inf = 0, divergent: only the all-zero point mass
    PhaseTransition_1b,  // q_inf = 0, convergent: several stationary measures
    NoStationary_2a,     // q_inf > 0, divergent: none
    UniqueRenewal_2b,    // q_inf > 0, convergent: the renewal measure
};

enum class SeriesVerdict { convergent, divergent, inconclusive };

struct RenewalClassification {
    std::optional<RenewalCase> verdict;  // absent when the series is inconclusive
    double q_inf = 0.0;
    SeriesVerdict series = SeriesVerdict::inconclusive;
    double partial_sum = 0.0;  // numeric sum of prod_{i<=n}(1-q_i) over n < terms
    long terms = 0;
};

// Decides convergence of sum_n prod_{i<=n}(1 - q_i) from the rule's structure
// (numeric partial sums are reported but never decide), then combines with
// q_inf into the four-case verdict.
RenewalClassification classify_renewal(const QRule& q, long terms, double tol);

// --- infinite-alphabet conditional Poisson --------------------------------------

struct BetaRule {
    enum class Kind { geometric, explicit_list };
    Kind kind = Kind::geometric;
    double b0 = 0.0, ratio = 0.5;  // geometric: beta_j = b0 * ratio^j
    std::vector<double> values;    // explicit_list: beta_0..beta_m

    double value(int j) const;         // beta_j, j >= 0
    double abs_tail(int k) const;      // certified bound on sum_{j>k} |beta_j|
    double abs_total() const;
    void validate() const;
};

// Emits a Poisson(v(x)) count after a zero, where log v(x) =
// -sum_j beta_j (x_{-j} ^ gamma); any nonzero symbol forces the next symbol
// back to 0.
KernelPtr make_poisson(BetaRule betas, double gamma);

}  // namespace kernels
}  // namespace gchain
