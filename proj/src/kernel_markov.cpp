#include <algorithm>
#include <cmath>

#include "gchain/kernels.hpp"

namespace gchain {
namespace kernels {

namespace {

struct MarkovState final : KernelState {
    std::vector<Symbol> window;  // last `order` symbols, oldest first
    StatePtr clone() const override { return std::make_unique<MarkovState>(*this); }
};

class MarkovKernel final : public Kernel {
public:
    MarkovKernel(int order, std::vector<std::vector<double>> rows, std::vector<long> labels)
        : order_(order), rows_(std::move(rows)) {
        if (order_ < 1) throw Error(Error::Code::BadInput, "markov order must be >= 1");
        if (rows_.empty()) throw Error(Error::Code::BadRow, "markov table is empty");
        int n = static_cast<int>(rows_[0].size());
        if (n < 1) throw Error(Error::Code::BadRow, "markov rows must be nonempty");
        uint64_t expect = 1;
        for (int i = 0; i < order_; ++i) expect *= static_cast<uint64_t>(n);
        if (rows_.size() != expect)
            throw Error(Error::Code::BadRow, "markov table needs one row per length-k context");
        for (const auto& row : rows_) {
            if (static_cast<int>(row.size()) != n)
                throw Error(Error::Code::BadRow, "ragged markov table");
            double sum = 0.0;
            for (double v : row) {
                if (v < 0.0 || v > 1.0 || !std::isfinite(v))
                    throw Error(Error::Code::BadRow, "markov entry outside [0,1]");
                sum += v;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw Error(Error::Code::BadRow, "markov row does not sum to 1");
        }
        alphabet_ = labels.empty() ? Alphabet::make_finite(n)
                                   : Alphabet::make_finite(std::move(labels));
        for (uint64_t c = 0; c < rows_.size(); ++c)
            for (Symbol a = 0; a < n; ++a)
                if (rows_[c][static_cast<size_t>(a)] == 0.0)
                    zeros_.cylinder_zeros.push_back({word_at_index(c, order_, n), a});
        zeros_.complete = true;
    }

    StatePtr start(const PastSpec& past) const override {
        auto s = std::make_unique<MarkovState>();
        s->window = past.last(static_cast<size_t>(order_)).symbols();
        return s;
    }

    void advance(KernelState& s, Symbol a) const override {
        auto& st = static_cast<MarkovState&>(s);
        st.window.erase(st.window.begin());
        st.window.push_back(a);
    }

    ProbInterval probability(const KernelState& s, Symbol a, double) const override {
        if (!alphabet_.contains(a)) throw unknown_symbol(a);
        return ProbInterval::point(entry(s, a));
    }

    bool forbidden(const KernelState& s, Symbol a) const override { return entry(s, a) == 0.0; }

    std::optional<double> variation_bound(int k) const override {
        if (k >= order_) return 0.0;
        // Exact sup over context pairs sharing their last k+1 coordinates
        // (the predicted symbol plus k recent ones).
        int n = alphabet_.size;
        double best = 0.0;
        for (uint64_t c1 = 0; c1 < rows_.size(); ++c1) {
            Word w1 = word_at_index(c1, order_, n);
            for (uint64_t c2 = c1 + 1; c2 < rows_.size(); ++c2) {
                Word w2 = word_at_index(c2, order_, n);
                if (w1.suffix(static_cast<size_t>(k)) != w2.suffix(static_cast<size_t>(k)))
                    continue;
                double sum = 0.0;
                for (int a = 0; a < n; ++a)
                    sum += std::abs(rows_[c1][static_cast<size_t>(a)] -
                                    rows_[c2][static_cast<size_t>(a)]);
                best = std::max(best, sum);
            }
        }
        return best;
    }

    std::optional<int> markov_order() const override { return order_; }

    std::optional<double> positive_floor() const override {
        double floor = 1.0;
        for (const auto& row : rows_)
            for (double v : row)
                if (v > 0.0) floor = std::min(floor, v);
        return floor;
    }

    bool continuous() const override { return true; }

    std::optional<CollapseKey> collapse_key(const KernelState& s, double) const override {
        const auto& st = static_cast<const MarkovState&>(s);
        return CollapseKey(st.window.begin(), st.window.end());
    }

    std::string tag() const override { return "markov"; }

private:
    double entry(const KernelState& s, Symbol a) const {
        const auto& st = static_cast<const MarkovState&>(s);
        uint64_t c = word_index(Word(st.window), alphabet_.size);
        return rows_[c][static_cast<size_t>(a)];
    }

    int order_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace

KernelPtr make_markov(int order, const std::vector<std::vector<double>>& rows,
                      std::vector<long> labels) {
    return std::make_shared<MarkovKernel>(order, rows, std::move(labels));
}

}  // namespace kernels
}  // namespace gchain
