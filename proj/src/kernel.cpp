#include "gchain/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gchain/rng.hpp"

namespace gchain {

ProbInterval eval_kernel(const Kernel& k, const PastSpec& past, Symbol symbol, double tol) {
    if (tol <= 0.0) throw Error(Error::Code::TolUnachievable, "tolerance must be positive");
    if (!k.alphabet().contains(symbol)) throw unknown_symbol(symbol);
    StatePtr s = k.start(past);
    return k.probability(*s, symbol, tol);
}

bool word_positive(const Kernel& k, const PastSpec& past, const Word& word) {
    StatePtr s = k.start(past);
    for (Symbol a : word.symbols()) {
        if (!k.alphabet().contains(a)) throw unknown_symbol(a);
        if (k.forbidden(*s, a)) return false;
        k.advance(*s, a);
    }
    return true;
}

RowEnumeration enumerate_row(const Kernel& k, const KernelState& s, double tol) {
    RowEnumeration row;
    if (k.alphabet().finite) {
        double per = tol / std::max(1, k.alphabet().size);
        for (Symbol a = 0; a < k.alphabet().size; ++a)
            row.entries.emplace_back(a, k.probability(s, a, per));
        return row;
    }
    auto [cutoff, bound] = k.enumeration_cutoff(s, k.alphabet().truncation_mass);
    double per = tol / std::max<Symbol>(1, cutoff);
    for (Symbol a = 0; a < cutoff; ++a)
        row.entries.emplace_back(a, k.probability(s, a, per));
    row.tail_bound = bound;
    return row;
}

namespace {

PastSpec random_past(Rng& rng, int alphabet_size) {
    size_t tail_len = 1 + rng.next_below(3);
    size_t trans_len = rng.next_below(4);
    std::vector<Symbol> tail(tail_len), trans(trans_len);
    for (auto& s : tail) s = static_cast<Symbol>(rng.next_below(alphabet_size));
    for (auto& s : trans) s = static_cast<Symbol>(rng.next_below(alphabet_size));
    return PastSpec(Word(std::move(trans)), Word(std::move(tail)));
}

}  // namespace

VariationBound variation_rate(const Kernel& k, int order,
                              const std::optional<SampledVariation>& sampled) {
    VariationBound out;
    if (!sampled) {
        auto bound = k.variation_bound(order);
        if (!bound)
            throw Error(Error::Code::NoAnalyticBound,
                        "kernel provides no analytic variation bound");
        out.upper = *bound;
        out.lower = 0.0;
        return out;
    }
    if (!k.alphabet().finite)
        throw Error(Error::Code::AlphabetInfinite, "sampled variation needs a finite alphabet");
    int n = k.alphabet().size;
    Rng rng(sampled->seed, 0x7a21u);
    double best = 0.0;
    const double tol = 1e-12;
    for (int probe = 0; probe < sampled->probes; ++probe) {
        // Shared block of the last order+1 coordinates; the rest is free.
        std::vector<Symbol> shared(static_cast<size_t>(order) + 1);
        for (auto& s : shared) s = static_cast<Symbol>(rng.next_below(n));
        PastSpec x = random_past(rng, n).append(Word(shared));
        PastSpec y = (probe % 16 == 0) ? x : random_past(rng, n).append(Word(shared));
        double sum = 0.0;
        for (Symbol a = 0; a < n; ++a)
            sum += std::abs(eval_kernel(k, x, a, tol).mid() - eval_kernel(k, y, a, tol).mid());
        best = std::max(best, sum);
    }
    out.lower = best;
    auto bound = k.variation_bound(order);
    out.upper = bound ? *bound : 2.0;
    return out;
}

Interval step_divergence(const Kernel& k, const PastSpec& x, const PastSpec& y, const Word& w,
                         bool use_sqrt, double tol) {
    if (w.empty()) throw Error(Error::Code::BadInput, "step_divergence needs a nonempty word");
    StatePtr sx = k.start(x);
    StatePtr sy = k.start(y);
    for (Symbol a : w.symbols()) {
        k.advance(*sx, a);
        k.advance(*sy, a);
    }

    Symbol cutoff;
    double tail = 0.0;
    if (k.alphabet().finite) {
        cutoff = k.alphabet().size;
    } else {
        auto [cx, bx] = k.enumeration_cutoff(*sx, k.alphabet().truncation_mass);
        auto [cy, by] = k.enumeration_cutoff(*sy, k.alphabet().truncation_mass);
        cutoff = std::max(cx, cy);
        // (h(xa) - h(ya))^2 <= g(xa) + g(ya) for both h choices.
        tail = bx + by;
    }

    // Square roots flatten tolerance quadratically near zero, so evaluate
    // the underlying probabilities much tighter than the requested width.
    double per = tol / std::max<Symbol>(1, cutoff);
    double tol_eval = use_sqrt ? std::min(per / 4, (per / 4) * (per / 4)) : per / 8;
    tol_eval = std::max(tol_eval, 1e-300);

    Interval total(0.0, tail);
    for (Symbol a = 0; a < cutoff; ++a) {
        bool zx = k.forbidden(*sx, a);
        bool zy = k.forbidden(*sy, a);
        if (zx && zy) continue;  // 0 - 0 contributes exactly 0
        Interval gx = zx ? Interval(0, 0) : k.probability(*sx, a, tol_eval);
        Interval gy = zy ? Interval(0, 0) : k.probability(*sy, a, tol_eval);
        Interval diff = use_sqrt ? (gx.sqrt() - gy.sqrt()) : (gx - gy);
        total += diff.squared();
    }
    return total;
}

ProbInterval iterate_kernel(const Kernel& k, const PastSpec& past, const Word& word, int n,
                            double tol, uint64_t node_budget) {
    if (n < 1) throw Error(Error::Code::BadInput, "iterate_kernel needs n >= 1");
    if (word.empty()) throw Error(Error::Code::BadInput, "iterate_kernel needs a nonempty word");

    struct Node {
        StatePtr state;
        Interval weight;
    };

    int branching = k.alphabet().finite ? k.alphabet().size : 8;
    double paths = std::pow(static_cast<double>(std::max(branching, 1)),
                            static_cast<double>(n - 1));
    double tol_eval = tol / (static_cast<double>(n - 1 + static_cast<int>(word.size())) + 1.0) /
                      std::max(1.0, paths);
    tol_eval = std::max(tol_eval, 1e-300);

    std::vector<Node> level;
    level.push_back(Node{k.start(past), Interval(1.0, 1.0)});
    double lost_upper = 0.0;  // mass dropped by countable-row truncation

    for (int step = 0; step < n - 1; ++step) {
        std::vector<Node> next;
        std::map<CollapseKey, size_t> merged;
        for (const auto& node : level) {
            RowEnumeration row = enumerate_row(k, *node.state, tol_eval);
            lost_upper += node.weight.hi * row.tail_bound;
            for (const auto& [a, p] : row.entries) {
                if (p.hi == 0.0) continue;
                Interval w = node.weight * p;
                StatePtr child = node.state->clone();
                k.advance(*child, a);
                if (auto key = k.collapse_key(*child, tol_eval)) {
                    auto it = merged.find(*key);
                    if (it != merged.end()) {
                        next[it->second].weight += w;
                        continue;
                    }
                    merged.emplace(*key, next.size());
                }
                next.push_back(Node{std::move(child), w});
                if (next.size() > node_budget)
                    throw Error(Error::Code::BudgetExceeded,
                                "iterate_kernel enumeration exceeded node budget");
            }
        }
        level = std::move(next);
    }

    Interval total(0.0, 0.0);
    for (auto& node : level) {
        Interval w = node.weight;
        bool dead = false;
        for (Symbol a : word.symbols()) {
            ProbInterval p = k.probability(*node.state, a, tol_eval);
            if (p.hi == 0.0) { dead = true; break; }
            w = w * p;
            k.advance(*node.state, a);
        }
        if (!dead) total += w;
    }
    return ProbInterval(total.lo, total.hi + lost_upper);
}

}  // namespace gchain
