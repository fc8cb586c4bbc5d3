#include <algorithm>
#include <cmath>

#include "gchain/kernels.hpp"

namespace gchain {
namespace kernels {

double QRule::q(int64_t i) const {
    switch (kind) {
        case Kind::constant:
            return c;
        case Kind::harmonic_shift:
            return a / (static_cast<double>(i) + b);
        case Kind::custom_rational:
            return (p0 + p1 * static_cast<double>(i)) / (r0 + r1 * static_cast<double>(i));
    }
    return 0.0;
}

double QRule::limit() const {
    switch (kind) {
        case Kind::constant:
            return c;
        case Kind::harmonic_shift:
            return 0.0;
        case Kind::custom_rational:
            return r1 > 0.0 ? p1 / r1 : p0 / r0;
    }
    return 0.0;
}

std::pair<double, double> QRule::range_beyond(int k) const {
    // All rule kinds are monotone in i, so the hull of q_{k+1} and the
    // natural limit covers {q_i : i > k}; the declared q_inf joins the hull.
    double e1 = q(k + 1);
    double e2 = limit();
    double lo = std::min({e1, e2, q_inf()});
    double hi = std::max({e1, e2, q_inf()});
    return {lo, hi};
}

void QRule::validate() const {
    switch (kind) {
        case Kind::constant:
            if (c <= 0.0 || c >= 1.0)
                throw Error(Error::Code::BadQ, "constant q must lie in (0,1)");
            break;
        case Kind::harmonic_shift:
            if (a <= 0.0 || b <= 0.0 || a >= b)
                throw Error(Error::Code::BadQ, "harmonic_shift needs 0 < a < b");
            break;
        case Kind::custom_rational:
            if (r0 <= 0.0 || r1 < 0.0 || p0 <= 0.0 || p1 < 0.0)
                throw Error(Error::Code::BadQ, "custom_rational needs positive coefficients");
            if (p0 >= r0 || p1 > r1)
                throw Error(Error::Code::BadQ, "custom_rational q_i must stay below 1");
            break;
    }
    double qi = q_inf();
    if (qi < 0.0 || qi > 1.0) throw Error(Error::Code::BadQ, "q_inf must lie in [0,1]");
}

namespace {

struct RenewalState final : KernelState {
    int64_t run;    // trailing zeros; -1 encodes the all-zero past
    StatePtr clone() const override { return std::make_unique<RenewalState>(*this); }
};

class RenewalKernel final : public Kernel {
public:
    explicit RenewalKernel(QRule q) : q_(q) {
        q_.validate();
        alphabet_ = Alphabet::make_finite(2);
        if (q_.q_inf() == 0.0)
            zeros_.isolated_zeros.push_back({PastSpec::constant(0), 1});
        else if (q_.q_inf() == 1.0)
            zeros_.isolated_zeros.push_back({PastSpec::constant(0), 0});
        zeros_.complete = true;
    }

    StatePtr start(const PastSpec& past) const override {
        auto s = std::make_unique<RenewalState>();
        if (past.is_constant(0)) {
            s->run = -1;
        } else {
            s->run = 0;
            while (past.at(-s->run) == 0) ++s->run;
        }
        return s;
    }

    void advance(KernelState& s, Symbol a) const override {
        auto& st = static_cast<RenewalState&>(s);
        if (a == 1)
            st.run = 0;
        else if (st.run >= 0)
            ++st.run;
    }

    ProbInterval probability(const KernelState& s, Symbol a, double) const override {
        if (!alphabet_.contains(a)) throw unknown_symbol(a);
        const auto& st = static_cast<const RenewalState&>(s);
        double q1 = st.run < 0 ? q_.q_inf() : q_.q(st.run);
        return ProbInterval::point(a == 1 ? q1 : 1.0 - q1);
    }

    bool forbidden(const KernelState& s, Symbol a) const override {
        const auto& st = static_cast<const RenewalState&>(s);
        if (st.run >= 0) return false;  // q_i in (0,1) for finite runs
        return a == 1 ? q_.q_inf() == 0.0 : q_.q_inf() == 1.0;
    }

    std::optional<double> variation_bound(int k) const override {
        auto [lo, hi] = q_.range_beyond(k);
        return 2.0 * (hi - lo);
    }

    std::optional<int> markov_order() const override {
        if (q_.kind == QRule::Kind::constant && q_.q_inf() == q_.c) return 1;
        return std::nullopt;
    }

    std::optional<double> positive_floor() const override {
        if (q_.kind == QRule::Kind::constant && q_.q_inf() == q_.c)
            return std::min(q_.c, 1.0 - q_.c);
        return std::nullopt;
    }

    bool continuous() const override { return q_.q_inf() == q_.limit(); }

    std::optional<CollapseKey> collapse_key(const KernelState& s, double) const override {
        return CollapseKey{static_cast<const RenewalState&>(s).run};
    }

    std::string tag() const override { return "renewal"; }

private:
    QRule q_;
};

}  // namespace

KernelPtr make_renewal(QRule q) { return std::make_shared<RenewalKernel>(q); }

RenewalClassification classify_renewal(const QRule& q, long terms, double tol) {
    q.validate();
    RenewalClassification out;
    out.q_inf = q.q_inf();
    out.terms = terms;

    double product = 1.0;
    double sum = 0.0;
    for (long n = 0; n < terms; ++n) {
        product *= 1.0 - q.q(n);
        sum += product;
        if (product < 1e-300) break;
    }
    out.partial_sum = sum;

    // The verdict comes from the rule's structure, never from the numeric
    // partial sums: products against a decreasing q with limit L > 0 are
    // geometrically dominated; harmonic-type tails q_i ~ a/i give products
    // ~ n^-a, summable exactly when a > 1.
    double lim = q.limit();
    double harmonic_strength = -1.0;
    if (q.kind == QRule::Kind::harmonic_shift)
        harmonic_strength = q.a;
    else if (q.kind == QRule::Kind::custom_rational && lim == 0.0 && q.r1 > 0.0)
        harmonic_strength = q.p0 / q.r1;

    if (lim > 0.0 || (q.kind == QRule::Kind::constant && q.c > 0.0))
        out.series = SeriesVerdict::convergent;
    else if (harmonic_strength > 0.0) {
        if (harmonic_strength != 1.0 && std::abs(harmonic_strength - 1.0) <= tol)
            out.series = SeriesVerdict::inconclusive;  // too close to the boundary to certify
        else
            out.series = harmonic_strength > 1.0 ? SeriesVerdict::convergent
                                                 : SeriesVerdict::divergent;
    } else {
        out.series = SeriesVerdict::inconclusive;
    }

    if (out.series == SeriesVerdict::inconclusive) return out;
    bool conv = out.series == SeriesVerdict::convergent;
    if (out.q_inf == 0.0)
        out.verdict = conv ? RenewalCase::PhaseTransition_1b : RenewalCase::UniqueTrivial_1a;
    else
        out.verdict = conv ? RenewalCase::UniqueRenewal_2b : RenewalCase::NoStationary_2a;
    return out;
}

}  // namespace kernels
}  // namespace gchain
