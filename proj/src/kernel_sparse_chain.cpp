#include <cmath>

#include "gchain/kernels.hpp"

namespace gchain {
namespace kernels {

namespace {

struct SparseState final : KernelState {
    History h;
    int64_t run;    // trailing zeros since the latest 1 (meaningless when all_zero)
    bool all_zero;  // the entire realized past is zeros
    explicit SparseState(PastSpec p, int64_t r, bool z) : h(std::move(p)), run(r), all_zero(z) {}
    StatePtr clone() const override { return std::make_unique<SparseState>(*this); }
};

/*
 * Binary kernel over {0,1}. Writing r for the current run of trailing
 * zeros, the probability of emitting another 0 is
 *
 *   r = 0, last two symbols 11   : m(x)
 *   r = 0, last two symbols 01   : 0
 *   r = 1                ( ..10) : 0
 *   r = 2                (..100) : m(x)
 *   r = 3               (..1000) : 0
 *   r >= 4                       : m(x) / sqrt(r - 1)
 *   all-zero past                : 0
 *
 * where m(x) = sum_j 2^-(j+1) p_j(0 | last j+1 symbols) mixes window-majority
 * rules p_j(1|.) in {2/3, 1/3} with geometric weights. Symbol 1 takes the
 * complementary mass.
 */
class SparseChainKernel final : public Kernel {
public:
    SparseChainKernel() {
        alphabet_ = Alphabet::make_finite(2);
        zeros_.cylinder_zeros.push_back({Word{0, 1}, 0});
        zeros_.cylinder_zeros.push_back({Word{1, 0}, 0});
        zeros_.cylinder_zeros.push_back({Word{1, 0, 0, 0}, 0});
        zeros_.isolated_zeros.push_back({PastSpec::constant(0), 0});
        zeros_.complete = true;
    }

    StatePtr start(const PastSpec& past) const override {
        bool all_zero = past.is_constant(0);
        int64_t run = 0;
        if (!all_zero)
            while (past.at(-run) == 0) ++run;
        return std::make_unique<SparseState>(past, run, all_zero);
    }

    void advance(KernelState& s, Symbol a) const override {
        auto& st = static_cast<SparseState&>(s);
        st.h.push(a);
        if (a == 0) {
            if (!st.all_zero) ++st.run;
        } else {
            st.all_zero = false;
            st.run = 0;
        }
    }

    ProbInterval probability(const KernelState& s, Symbol a, double tol) const override {
        if (!alphabet_.contains(a)) throw unknown_symbol(a);
        const auto& st = static_cast<const SparseState&>(s);
        ProbInterval p0 = prob_zero(st, tol);
        if (a == 0) return p0;
        return ProbInterval(1.0 - p0.hi, 1.0 - p0.lo);
    }

    bool forbidden(const KernelState& s, Symbol a) const override {
        if (a == 1) return false;
        const auto& st = static_cast<const SparseState&>(s);
        if (st.all_zero) return true;
        return st.run == 1 || st.run == 3 || (st.run == 0 && st.h.at(-1) == 0);
    }

    std::optional<double> variation_bound(int k) const override {
        if (k <= 2) return 2.0;
        // Pasts sharing the last k+1 >= 4 symbols either pin the branch (a 1
        // inside the window, leaving only the mixture tail) or show an
        // all-zero window, where every row value is <= (2/3)/sqrt(k).
        double mix_tail = std::pow(2.0, -k) / 3.0;
        double zero_window = (4.0 / 3.0) / std::sqrt(static_cast<double>(k + 1) - 1.0);
        return std::max(mix_tail, zero_window);
    }

    bool continuous() const override { return true; }

    std::optional<CollapseKey> collapse_key(const KernelState& s, double tol) const override {
        const auto& st = static_cast<const SparseState&>(s);
        int w = std::max(mixture_depth(tol) + 1, 4);
        CollapseKey key;
        key.push_back(st.all_zero ? 1 : 0);
        key.push_back(st.all_zero ? -1 : st.run);
        for (int i = w - 1; i >= 0; --i) key.push_back(st.h.at(-i));
        return key;
    }

    std::string tag() const override { return "sparse_chain"; }

private:
    static int mixture_depth(double tol) {
        // Terms beyond J contribute between t/3 and 2t/3 with t = 2^-(J+1).
        int j = 0;
        double t = 0.5;
        while (t / 3.0 > tol && j < 1060) {
            t *= 0.5;
            ++j;
        }
        return j;
    }

    Interval mixture(const SparseState& st, double tol) const {
        int depth = mixture_depth(tol);
        double sum = 0.0;
        double weight = 0.5;
        int64_t ones = 0;
        for (int j = 0; j <= depth; ++j) {
            ones += st.h.at(-j);
            // p_j(1|.) = 2/3 when the last j+1 symbols average at least 1/2
            double pj_zero = (2 * ones >= j + 1) ? (1.0 / 3.0) : (2.0 / 3.0);
            sum += weight * pj_zero;
            weight *= 0.5;
        }
        // weight now equals 2^-(depth+1), the total mass of dropped terms
        return Interval(sum + weight / 3.0, sum + 2.0 * weight / 3.0);
    }

    ProbInterval prob_zero(const SparseState& st, double tol) const {
        if (st.all_zero) return ProbInterval::zero();
        if (st.run == 1 || st.run == 3) return ProbInterval::zero();
        if (st.run == 0 && st.h.at(-1) == 0) return ProbInterval::zero();
        Interval m = mixture(st, tol);
        if (st.run >= 4) {
            double f = 1.0 / std::sqrt(static_cast<double>(st.run - 1));
            return ProbInterval(m.lo * f, m.hi * f);
        }
        return ProbInterval(m.lo, m.hi);
    }
};

}  // namespace

KernelPtr make_sparse_chain() { return std::make_shared<SparseChainKernel>(); }

}  // namespace kernels
}  // namespace gchain
