#include <algorithm>
#include <cmath>

#include "gchain/kernels.hpp"

namespace gchain {
namespace kernels {

double AlphaRule::value(int i) const {
    switch (kind) {
        case Kind::geometric:
            return 0.5 * (1.0 - ratio) * std::pow(ratio, i - 1);
        case Kind::powerlaw:
            return powerlaw_c() / std::pow(static_cast<double>(i), exponent);
        case Kind::explicit_list:
            return i <= static_cast<int>(values.size()) ? values[static_cast<size_t>(i - 1)]
                                                        : 0.0;
    }
    return 0.0;
}

double AlphaRule::tail_upper(int k) const {
    if (k < 0) k = 0;
    switch (kind) {
        case Kind::geometric:
            return 0.5 * std::pow(ratio, k);  // exact
        case Kind::powerlaw:
            if (k == 0) return 0.5;
            // sum_{i>k} i^-p <= integral_k^inf x^-p dx
            return powerlaw_c() * std::pow(static_cast<double>(k), 1.0 - exponent) /
                   (exponent - 1.0);
        case Kind::explicit_list: {
            double s = 0.0;
            for (size_t i = static_cast<size_t>(k); i < values.size(); ++i) s += values[i];
            return s;
        }
    }
    return 0.0;
}

double AlphaRule::total() const { return 0.5; }

void AlphaRule::validate() const {
    switch (kind) {
        case Kind::geometric:
            if (ratio <= 0.0 || ratio >= 1.0)
                throw Error(Error::Code::BadTotal, "geometric ratio must lie in (0,1)");
            break;
        case Kind::powerlaw:
            if (exponent <= 1.0)
                throw Error(Error::Code::BadTotal, "powerlaw exponent must exceed 1");
            break;
        case Kind::explicit_list: {
            double s = 0.0;
            for (double v : values) {
                if (v <= 0.0 || !std::isfinite(v))
                    throw Error(Error::Code::BadTotal, "alpha entries must be positive");
                s += v;
            }
            if (std::abs(s - 0.5) > 1e-12)
                throw Error(Error::Code::BadTotal, "alpha entries must sum to 1/2");
            break;
        }
    }
}

double AlphaRule::powerlaw_c() const {
    if (cached_c_ > 0.0) return cached_c_;
    // zeta(p) via direct terms plus a midpoint integral correction
    double s = 0.0;
    const int n = 200000;
    for (int i = 1; i <= n; ++i) s += std::pow(static_cast<double>(i), -exponent);
    s += std::pow(n + 0.5, 1.0 - exponent) / (exponent - 1.0);
    cached_c_ = 0.5 / s;
    return cached_c_;
}

namespace {

constexpr Symbol kMinus = 0;  // label -1
constexpr Symbol kPlus = 1;   // label +1

inline double sign_of(Symbol s) { return s == kPlus ? 1.0 : -1.0; }

struct AutoregState final : KernelState {
    History h;
    bool all_plus;
    bool all_minus;
    AutoregState(PastSpec p, bool ap, bool am) : h(std::move(p)), all_plus(ap), all_minus(am) {}
    StatePtr clone() const override { return std::make_unique<AutoregState>(*this); }
};

class AutoregressiveKernel final : public Kernel {
public:
    AutoregressiveKernel(AlphaRule alphas, int epsilon) : alphas_(alphas), eps_(epsilon) {
        if (epsilon != 1 && epsilon != -1)
            throw Error(Error::Code::BadInput, "epsilon must be +1 or -1");
        alphas_.validate();
        alphabet_ = Alphabet::make_finite(std::vector<long>{-1, 1});
        if (alphas_.kind == AlphaRule::Kind::explicit_list) {
            // Finite memory: the consensus zeros are plain cylinders.
            int m = static_cast<int>(alphas_.values.size());
            zeros_.cylinder_zeros.push_back(
                {Word::repeated(kPlus, static_cast<size_t>(m)), eps_ == -1 ? kPlus : kMinus});
            zeros_.cylinder_zeros.push_back(
                {Word::repeated(kMinus, static_cast<size_t>(m)), eps_ == -1 ? kMinus : kPlus});
        } else {
            zeros_.isolated_zeros.push_back(
                {PastSpec::constant(kPlus), eps_ == -1 ? kPlus : kMinus});
            zeros_.isolated_zeros.push_back(
                {PastSpec::constant(kMinus), eps_ == -1 ? kMinus : kPlus});
        }
        zeros_.complete = true;
    }

    StatePtr start(const PastSpec& past) const override {
        return std::make_unique<AutoregState>(past, past.is_constant(kPlus),
                                              past.is_constant(kMinus));
    }

    void advance(KernelState& s, Symbol a) const override {
        auto& st = static_cast<AutoregState&>(s);
        st.h.push(a);
        st.all_plus = st.all_plus && a == kPlus;
        st.all_minus = st.all_minus && a == kMinus;
    }

    ProbInterval probability(const KernelState& s, Symbol a, double tol) const override {
        if (!alphabet_.contains(a)) throw unknown_symbol(a);
        const auto& st = static_cast<const AutoregState&>(s);
        double sgn = sign_of(a) * static_cast<double>(eps_);
        if (st.all_plus) return ProbInterval::point(0.5 + sgn * 0.5);
        if (st.all_minus) return ProbInterval::point(0.5 - sgn * 0.5);
        int w = depth_for(tol);
        double sum = 0.0;
        for (int i = 1; i <= w; ++i) sum += alphas_.value(i) * sign_of(st.h.at(-(i - 1)));
        double t = alphas_.tail_upper(w);
        double lo = 0.5 + sgn * sum - t;
        double hi = 0.5 + sgn * sum + t;
        return ProbInterval(std::max(0.0, lo), std::min(1.0, hi));
    }

    bool forbidden(const KernelState& s, Symbol a) const override {
        const auto& st = static_cast<const AutoregState&>(s);
        double sgn = sign_of(a) * static_cast<double>(eps_);
        if (st.all_plus && sgn == -1.0) return true;
        if (st.all_minus && sgn == 1.0) return true;
        return false;
    }

    std::optional<double> variation_bound(int k) const override {
        return std::min(2.0, 4.0 * alphas_.tail_upper(k));
    }

    std::optional<int> markov_order() const override {
        if (alphas_.kind == AlphaRule::Kind::explicit_list)
            return static_cast<int>(alphas_.values.size());
        return std::nullopt;
    }

    bool continuous() const override { return true; }

    std::optional<CollapseKey> collapse_key(const KernelState& s, double tol) const override {
        const auto& st = static_cast<const AutoregState&>(s);
        int w = depth_for(tol);
        CollapseKey key;
        key.push_back(st.all_plus ? 1 : 0);
        key.push_back(st.all_minus ? 1 : 0);
        Word recent = st.h.last(static_cast<size_t>(w));
        key.insert(key.end(), recent.symbols().begin(), recent.symbols().end());
        return key;
    }

    std::string tag() const override { return "autoregressive"; }

private:
    int depth_for(double tol) const {
        int w = 1;
        while (alphas_.tail_upper(w) > tol / 4.0 && w < 1 << 20) w *= 2;
        return w;
    }

    AlphaRule alphas_;
    int eps_;
};

}  // namespace

KernelPtr make_autoregressive(AlphaRule alphas, int epsilon) {
    return std::make_shared<AutoregressiveKernel>(alphas, epsilon);
}

}  // namespace kernels
}  // namespace gchain
