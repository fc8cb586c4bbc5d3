#include <algorithm>
#include <cmath>

#include "gchain/kernels.hpp"

namespace gchain {
namespace kernels {

namespace {

struct WalkState final : KernelState {
    History h;
    explicit WalkState(PastSpec p) : h(std::move(p)) {}
    StatePtr clone() const override { return std::make_unique<WalkState>(*this); }
};

class GraphWalkKernel final : public Kernel {
public:
    GraphWalkKernel(const std::vector<std::pair<Symbol, Symbol>>& edges, double bias,
                    double decay)
        : bias_(bias), decay_(decay) {
        if (bias_ < 0.0 || !std::isfinite(bias_))
            throw Error(Error::Code::BadInput, "graph walk bias must be >= 0");
        if (decay_ <= 0.0 || decay_ >= 1.0)
            throw Error(Error::Code::BadInput, "graph walk decay must lie in (0,1)");
        Symbol n = 0;
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0) throw Error(Error::Code::BadInput, "negative vertex");
            n = std::max(n, std::max(u, v) + 1);
        }
        if (n == 0) throw Error(Error::Code::BadInput, "empty graph");
        adj_.assign(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
        out_.assign(static_cast<size_t>(n), {});
        for (auto [u, v] : edges) {
            if (!adj_[u][v]) {
                adj_[u][v] = true;
                out_[u].push_back(v);
            }
        }
        for (Symbol v = 0; v < n; ++v) {
            std::sort(out_[v].begin(), out_[v].end());
            if (out_[v].empty())
                throw Error(Error::Code::SinkVertex,
                            "vertex " + std::to_string(v) + " has no outgoing edge");
        }
        alphabet_ = Alphabet::make_finite(n);
        for (Symbol u = 0; u < n; ++u)
            for (Symbol v = 0; v < n; ++v)
                if (!adj_[u][v]) zeros_.cylinder_zeros.push_back({Word{u}, v});
        zeros_.complete = true;
    }

    StatePtr start(const PastSpec& past) const override {
        return std::make_unique<WalkState>(past);
    }

    void advance(KernelState& s, Symbol a) const override {
        static_cast<WalkState&>(s).h.push(a);
    }

    ProbInterval probability(const KernelState& s, Symbol a, double tol) const override {
        if (!alphabet_.contains(a)) throw unknown_symbol(a);
        const auto& h = static_cast<const WalkState&>(s).h;
        Symbol here = h.at(0);
        if (!adj_[here][a]) return ProbInterval::zero();
        size_t deg = out_[here].size();
        if (bias_ == 0.0) return ProbInterval::point(1.0 / static_cast<double>(deg));

        int window = score_window(tol);
        double num = 0.0, others = 0.0;
        for (Symbol b : out_[here]) {
            double w = 1.0 + bias_ * truncated_score(h, b, window);
            if (b == a)
                num = w;
            else
                others += w;
        }
        // Un-scanned history contributes at most delta to each weight.
        double delta = bias_ * std::pow(decay_, window) / (1.0 - decay_);
        double lo = num / (num + others + static_cast<double>(deg - 1) * delta);
        double hi = (num + delta) / (num + delta + others);
        return ProbInterval(lo, hi);
    }

    bool forbidden(const KernelState& s, Symbol a) const override {
        const auto& h = static_cast<const WalkState&>(s).h;
        return !adj_[h.at(0)][a];
    }

    std::optional<double> variation_bound(int k) const override {
        if (bias_ == 0.0) return 0.0;
        double delta = bias_ * std::pow(decay_, k + 1) / (1.0 - decay_);
        return std::min(2.0, 2.0 * delta);
    }

    std::optional<int> markov_order() const override {
        if (bias_ == 0.0) return 1;
        return std::nullopt;
    }

    std::optional<double> positive_floor() const override {
        size_t max_deg = 1;
        for (const auto& o : out_) max_deg = std::max(max_deg, o.size());
        double smax = bias_ / (1.0 - decay_);
        return 1.0 / (static_cast<double>(max_deg) * (1.0 + smax));
    }

    bool continuous() const override { return true; }

    std::optional<CollapseKey> collapse_key(const KernelState& s, double tol) const override {
        const auto& h = static_cast<const WalkState&>(s).h;
        int window = bias_ == 0.0 ? 1 : score_window(tol);
        Word w = h.last(static_cast<size_t>(window));
        return CollapseKey(w.symbols().begin(), w.symbols().end());
    }

    std::string tag() const override { return "graph_walk"; }

private:
    int score_window(double tol) const {
        // Depth after which the remaining geometric history mass cannot move
        // any probability by more than tol/2.
        double target = tol / (2.0 * static_cast<double>(alphabet_.size) + 2.0);
        double delta_one = bias_ / (1.0 - decay_);
        int w = 1;
        double d = delta_one * decay_;
        while (d > target && w < 4096) {
            d *= decay_;
            ++w;
        }
        return w;
    }

    double truncated_score(const History& h, Symbol b, int window) const {
        double score = 0.0;
        double f = 1.0;
        for (int i = 0; i < window; ++i) {
            if (h.at(-i) == b) score += f;
            f *= decay_;
        }
        return score;
    }

    double bias_, decay_;
    std::vector<std::vector<bool>> adj_;
    std::vector<std::vector<Symbol>> out_;
};

}  // namespace

KernelPtr make_graph_walk(const std::vector<std::pair<Symbol, Symbol>>& edges, double bias,
                          double decay) {
    return std::make_shared<GraphWalkKernel>(edges, bias, decay);
}

}  // namespace kernels
}  // namespace gchain
