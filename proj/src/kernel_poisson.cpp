#include <algorithm>
#include <cmath>

#include "gchain/kernels.hpp"

namespace gchain {
namespace kernels {

double BetaRule::value(int j) const {
    switch (kind) {
        case Kind::geometric:
            return b0 * std::pow(ratio, j);
        case Kind::explicit_list:
            return j < static_cast<int>(values.size()) ? values[static_cast<size_t>(j)] : 0.0;
    }
    return 0.0;
}

double BetaRule::abs_tail(int k) const {
    if (k < -1) k = -1;
    switch (kind) {
        case Kind::geometric:
            return std::abs(b0) * std::pow(ratio, k + 1) / (1.0 - ratio);
        case Kind::explicit_list: {
            double s = 0.0;
            for (size_t j = static_cast<size_t>(k + 1); j < values.size(); ++j)
                s += std::abs(values[j]);
            return s;
        }
    }
    return 0.0;
}

double BetaRule::abs_total() const { return abs_tail(-1); }

void BetaRule::validate() const {
    switch (kind) {
        case Kind::geometric:
            if (!std::isfinite(b0) || ratio <= 0.0 || ratio >= 1.0)
                throw Error(Error::Code::BadBetas, "geometric beta needs ratio in (0,1)");
            break;
        case Kind::explicit_list:
            for (double v : values)
                if (!std::isfinite(v))
                    throw Error(Error::Code::BadBetas, "beta entries must be finite");
            break;
    }
}

namespace {

struct PoissonState final : KernelState {
    History h;
    explicit PoissonState(PastSpec p) : h(std::move(p)) {}
    StatePtr clone() const override { return std::make_unique<PoissonState>(*this); }
};

class PoissonKernel final : public Kernel {
public:
    PoissonKernel(BetaRule betas, double gamma) : betas_(betas), gamma_(gamma) {
        betas_.validate();
        if (!(gamma_ > 0.0) || !std::isfinite(gamma_))
            throw Error(Error::Code::BadBetas, "gamma must be positive");
        alphabet_ = Alphabet::make_countable();
        zeros_.countable_hub = 0;  // a nonzero symbol forbids everything except 0
        zeros_.complete = true;
        v_max_ = std::exp(gamma_ * betas_.abs_total());
    }

    StatePtr start(const PastSpec& past) const override {
        return std::make_unique<PoissonState>(past);
    }

    void advance(KernelState& s, Symbol a) const override {
        static_cast<PoissonState&>(s).h.push(a);
    }

    ProbInterval probability(const KernelState& s, Symbol a, double tol) const override {
        if (!alphabet_.contains(a)) throw unknown_symbol(a);
        const auto& h = static_cast<const PoissonState&>(s).h;
        if (h.at(0) != 0) return a == 0 ? ProbInterval::one() : ProbInterval::zero();
        auto [v_lo, v_hi] = rate_interval(h, tol);
        return pmf_interval(a, v_lo, v_hi);
    }

    bool forbidden(const KernelState& s, Symbol a) const override {
        const auto& h = static_cast<const PoissonState&>(s).h;
        return h.at(0) != 0 && a != 0;
    }

    std::optional<double> variation_bound(int k) const override {
        // Rows after a nonzero symbol coincide; after a zero the rate moves
        // by at most a factor exp(delta), and Poisson L1 distance is bounded
        // by twice the rate gap.
        double delta = gamma_ * betas_.abs_tail(k);
        return std::min(2.0, 2.0 * v_max_ * std::expm1(delta));
    }

    std::optional<int> markov_order() const override {
        if (betas_.kind == BetaRule::Kind::explicit_list)
            return std::max<int>(1, static_cast<int>(betas_.values.size()));
        return std::nullopt;
    }

    bool continuous() const override { return true; }

    std::optional<CollapseKey> collapse_key(const KernelState& s, double tol) const override {
        const auto& h = static_cast<const PoissonState&>(s).h;
        int w = depth_for(tol);
        int64_t cap = static_cast<int64_t>(std::ceil(gamma_));
        CollapseKey key;
        key.push_back(h.at(0) == 0 ? 0 : 1);
        for (int i = 0; i < w; ++i) key.push_back(std::min<int64_t>(h.at(-i), cap));
        return key;
    }

    std::pair<Symbol, double> enumeration_cutoff(const KernelState& s,
                                                 double target) const override {
        const auto& h = static_cast<const PoissonState&>(s).h;
        if (h.at(0) != 0) return {1, 0.0};
        auto [v_lo, v_hi] = rate_interval(h, 1e-15);
        // The un-enumerated mass is at most 1 minus the certified lower pmf
        // accumulated so far.
        double cum = 0.0;
        Symbol m = 0;
        while (1.0 - cum > target && m < 20000) {
            cum += pmf_interval(m, v_lo, v_hi).lo;
            ++m;
        }
        return {m, std::max(0.0, 1.0 - cum) + 1e-14};
    }

    std::string tag() const override { return "poisson_infinite"; }

private:
    int depth_for(double tol) const {
        double target = tol / (4.0 * (v_max_ + 1.0));
        int w = 1;
        while (gamma_ * betas_.abs_tail(w - 1) > target && w < 1 << 20) w *= 2;
        return w;
    }

    std::pair<double, double> rate_interval(const History& h, double tol) const {
        int w = depth_for(tol);
        double expo = 0.0;
        for (int j = 0; j < w; ++j)
            expo += betas_.value(j) * std::min(static_cast<double>(h.at(-j)), gamma_);
        double delta = gamma_ * betas_.abs_tail(w - 1);
        return {std::exp(-expo - delta), std::exp(-expo + delta)};
    }

    static ProbInterval pmf_interval(Symbol a, double v_lo, double v_hi) {
        double f_lo = pmf(a, v_lo);
        double f_hi = pmf(a, v_hi);
        double lo = std::min(f_lo, f_hi);
        double hi = std::max(f_lo, f_hi);
        // pmf is unimodal in the rate with its peak at v = a
        double da = static_cast<double>(a);
        if (v_lo <= da && da <= v_hi) hi = pmf(a, da);
        // pad for exp/lgamma rounding so the interval really brackets
        return ProbInterval(lo * (1.0 - 1e-13), hi * (1.0 + 1e-13));
    }

    static double pmf(Symbol a, double v) {
        double lg = -v + static_cast<double>(a) * std::log(v) - std::lgamma(a + 1.0);
        return std::exp(lg);
    }

    BetaRule betas_;
    double gamma_;
    double v_max_;
};

}  // namespace

KernelPtr make_poisson(BetaRule betas, double gamma) {
    return std::make_shared<PoissonKernel>(betas, gamma);
}

}  // namespace kernels
}  // namespace gchain
