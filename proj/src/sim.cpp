#include "gchain/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "gchain/sampling.hpp"

namespace gchain {

PathResult simulate_path(const Kernel& k, const PastSpec& past, int64_t length, uint64_t seed,
                         double tol) {
    if (length < 1) throw Error(Error::Code::BadInput, "path length must be >= 1");
    PathResult out;
    Rng rng(seed, 0);
    StatePtr s = k.start(past);
    std::vector<Symbol> syms;
    syms.reserve(static_cast<size_t>(length));
    for (int64_t i = 0; i < length; ++i) {
        double defect = 0.0;
        Symbol a = sample_symbol(k, *s, rng, tol, &defect);
        k.advance(*s, a);
        syms.push_back(a);
        out.max_step_defect = std::max(out.max_step_defect, defect);
        out.sum_step_defect += defect;
    }
    out.path = Word(std::move(syms));
    return out;
}

HittingReport hitting_time(const Kernel& k, const PastSpec& past, const std::set<Word>& target,
                           int K, int64_t cap, const SimConfig& config) {
    if (target.empty()) throw Error(Error::Code::BadInput, "empty target class");
    if (cap < K) throw Error(Error::Code::BadInput, "cap must be at least K");
    HittingReport report;
    report.cap = cap;
    double sum = 0.0;
    int64_t hits = 0, timeouts = 0;
    for (int r = 0; r < config.replicas; ++r) {
        Rng rng(config.seed, static_cast<uint64_t>(r));
        StatePtr s = k.start(past);
        std::deque<Symbol> window;
        int64_t t = -1;
        for (int64_t m = 1; m <= cap; ++m) {
            Symbol a = sample_symbol(k, *s, rng, config.tol);
            k.advance(*s, a);
            window.push_back(a);
            if (static_cast<int64_t>(window.size()) > K) window.pop_front();
            if (m >= K &&
                target.count(Word(std::vector<Symbol>(window.begin(), window.end())))) {
                t = m;
                break;
            }
        }
        if (t < 0) {
            report.samples.push_back(-1);
            ++timeouts;
        } else {
            report.samples.push_back(t);
            sum += static_cast<double>(t);
            ++hits;
        }
    }
    report.empirical_mean = hits > 0 ? sum / static_cast<double>(hits) : 0.0;
    report.timeout_fraction =
        static_cast<double>(timeouts) / static_cast<double>(config.replicas);
    return report;
}

DkSingle dk_single(const Kernel& k, const PastSpec& x, const PastSpec& y, int n, int64_t horizon,
                   bool use_sqrt, double tol, uint64_t seed) {
    if (horizon < 2) throw Error(Error::Code::BadInput, "horizon must be >= 2");
    DkSingle out;
    Rng rng(seed, 0);
    StatePtr sx = k.start(x);
    StatePtr sy = k.start(y);
    std::vector<Symbol> w;

    double scale = 1.0;
    if (!use_sqrt) {
        if (auto floor = k.positive_floor(); floor && *floor > 0.0) scale = 1.0 / (4.0 * *floor);
    }

    auto row_divergence = [&](int64_t /*pos*/) -> double {
        Symbol cutoff;
        double tail = 0.0;
        if (k.alphabet().finite) {
            cutoff = k.alphabet().size;
        } else {
            auto [cx, bx] = k.enumeration_cutoff(*sx, k.alphabet().truncation_mass);
            auto [cy, by] = k.enumeration_cutoff(*sy, k.alphabet().truncation_mass);
            cutoff = std::max(cx, cy);
            tail = bx + by;
        }
        double term = tail;
        double tpe = use_sqrt ? (tol / (4.0 * cutoff)) * (tol / (4.0 * cutoff)) : tol / cutoff;
        tpe = std::max(tpe, 1e-300);
        for (Symbol a = 0; a < cutoff; ++a) {
            bool zx = k.forbidden(*sx, a);
            bool zy = k.forbidden(*sy, a);
            if (zx && zy) continue;  // the 0/0 convention
            if (zy && !zx) {
                out.support_mismatch = true;
                continue;
            }
            double gx = zx ? 0.0 : k.probability(*sx, a, tpe).mid();
            double gy = k.probability(*sy, a, tpe).mid();
            double d = use_sqrt ? std::sqrt(gx) - std::sqrt(gy) : gx - gy;
            term += d * d;
        }
        return scale * term;
    };

    // Rows at positions >= n are scanned symbol by symbol, which both feeds
    // the series (positions n+2 onward) and detects any transition that the
    // y-chain forbids while the x-chain allows.
    for (int64_t pos = 1; pos <= n + horizon; ++pos) {
        if (pos >= std::max<int64_t>(n, 1)) {
            double d = row_divergence(pos);
            if (pos >= n + 2) out.dk.push_back(d);
        }
        if (out.support_mismatch) break;
        Symbol a = sample_symbol(k, *sx, rng, tol);
        k.advance(*sx, a);
        k.advance(*sy, a);
        w.push_back(a);
    }
    out.path = Word(std::move(w));
    return out;
}

DkSeries dk_series(const Kernel& k, const PastSpec& x, const PastSpec& y, int n, int64_t horizon,
                   bool use_sqrt, const SimConfig& config) {
    if (horizon < 2) throw Error(Error::Code::BadInput, "horizon must be >= 2");
    DkSeries out;
    int window = std::max(0, n);
    const int window_cap = 4096;

    // Enlarge the window until a probe batch shows no support mismatch.
    while (true) {
        bool mismatch = false;
        int probe_count = std::min(config.replicas, 8);
        for (int r = 0; r < probe_count && !mismatch; ++r) {
            DkSingle probe = dk_single(k, x, y, window, horizon, use_sqrt, config.tol,
                                       rng::derive(config.seed, 0xab00ull + static_cast<uint64_t>(r)));
            mismatch = probe.support_mismatch;
        }
        if (!mismatch) break;
        ++out.retries;
        window = window == 0 ? 1 : window * 2;
        if (window > window_cap)
            throw Error(Error::Code::IncompatibleSupports,
                        "no window start up to the bound removes the support mismatch");
    }
    out.n_offset = window;

    size_t terms = static_cast<size_t>(horizon - 1);
    out.ks.resize(terms);
    for (size_t i = 0; i < terms; ++i) out.ks[i] = static_cast<int>(i) + 2;
    out.dk_mean.assign(terms, 0.0);
    out.dk_max.assign(terms, 0.0);
    int good = 0;
    int tail_quiet = 0;

    for (int r = 0; r < config.replicas; ++r) {
        DkSingle one = dk_single(k, x, y, window, horizon, use_sqrt, config.tol,
                                 rng::derive(config.seed, 1000 + static_cast<uint64_t>(r)));
        if (one.support_mismatch)
            throw Error(Error::Code::IncompatibleSupports,
                        "support mismatch recurred after the probe batch");
        ++good;
        double tail_inc = 0.0;
        for (size_t i = 0; i < terms && i < one.dk.size(); ++i) {
            out.dk_mean[i] += one.dk[i];
            out.dk_max[i] = std::max(out.dk_max[i], one.dk[i]);
            if (out.ks[i] > horizon / 2) tail_inc += one.dk[i];
        }
        if (tail_inc < config.tol) ++tail_quiet;
    }
    for (double& v : out.dk_mean) v /= std::max(1, good);
    out.partial_sums.resize(terms);
    double acc = 0.0;
    for (size_t i = 0; i < terms; ++i) {
        acc += out.dk_mean[i];
        out.partial_sums[i] = acc;
    }
    out.replicas = good;

    // Heuristic evidence only: finite horizons cannot certify convergence.
    double quiet_frac = good > 0 ? static_cast<double>(tail_quiet) / good : 0.0;
    if (quiet_frac >= 0.95)
        out.verdict = SummabilityVerdict::summable_evidence;
    else if (quiet_frac <= 0.5)
        out.verdict = SummabilityVerdict::diverging_evidence;
    else
        out.verdict = SummabilityVerdict::inconclusive;
    return out;
}

namespace {

// Distribution of the window_len symbols after window_start steps, as
// intervals indexed by word, via collapse-key enumeration.
std::map<Word, Interval> window_law(const Kernel& k, const PastSpec& past, int window_start,
                                    int window_len, uint64_t node_budget, double* lost) {
    struct Node {
        StatePtr state;
        Word window;  // last window_len symbols once past the start
        Interval weight;
    };
    double tol_eval = 1e-15;
    std::vector<Node> level;
    level.push_back(Node{k.start(past), Word{}, Interval(1.0, 1.0)});
    *lost = 0.0;

    for (int step = 0; step < window_start + window_len; ++step) {
        bool in_window = step >= window_start;
        std::vector<Node> next;
        std::map<std::pair<CollapseKey, Word>, size_t> merged;
        for (auto& node : level) {
            RowEnumeration row = enumerate_row(k, *node.state, tol_eval);
            *lost += node.weight.hi * row.tail_bound;
            for (const auto& [a, p] : row.entries) {
                if (p.hi == 0.0) continue;
                Word w = in_window ? node.window.append(a) : node.window;
                Interval wt = node.weight * p;
                StatePtr child = node.state->clone();
                k.advance(*child, a);
                if (auto key = k.collapse_key(*child, tol_eval)) {
                    auto mk = std::make_pair(*key, w);
                    auto it = merged.find(mk);
                    if (it != merged.end()) {
                        next[it->second].weight += wt;
                        continue;
                    }
                    merged.emplace(mk, next.size());
                }
                next.push_back(Node{std::move(child), std::move(w), wt});
                if (next.size() > node_budget)
                    throw Error(Error::Code::BudgetExceeded,
                                "window law enumeration exceeded the budget");
            }
        }
        level = std::move(next);
    }

    std::map<Word, Interval> law;
    for (const auto& node : level) {
        auto it = law.find(node.window);
        if (it == law.end())
            law.emplace(node.window, node.weight);
        else
            it->second += node.weight;
    }
    return law;
}

}  // namespace

TvEstimate tv_window_exact(const Kernel& k, const PastSpec& x, const PastSpec& y,
                           int window_start, int window_len, uint64_t node_budget) {
    if (window_len < 1) throw Error(Error::Code::BadInput, "window length must be >= 1");
    double lost_x = 0.0, lost_y = 0.0;
    std::map<Word, Interval> px = window_law(k, x, window_start, window_len, node_budget, &lost_x);
    std::map<Word, Interval> py = window_law(k, y, window_start, window_len, node_budget, &lost_y);
    Interval half_l1(0.0, lost_x + lost_y);
    for (const auto& [w, ix] : px) {
        auto it = py.find(w);
        Interval iy = it == py.end() ? Interval(0, 0) : it->second;
        Interval d = ix - iy;
        double alo = std::min(std::abs(d.lo), std::abs(d.hi));
        if (d.lo <= 0 && d.hi >= 0) alo = 0.0;
        half_l1 += Interval(alo, std::max(std::abs(d.lo), std::abs(d.hi)));
    }
    for (const auto& [w, iy] : py)
        if (!px.count(w)) half_l1 += Interval(iy.lo, iy.hi);
    TvEstimate out;
    out.value = Interval(std::max(0.0, 0.5 * half_l1.lo), std::min(1.0, 0.5 * half_l1.hi));
    out.exact = true;
    return out;
}

TvEstimate tv_window_mc(const Kernel& k, const PastSpec& x, const PastSpec& y, int window_start,
                        int window_len, const SimConfig& config) {
    if (window_len < 1) throw Error(Error::Code::BadInput, "window length must be >= 1");
    std::map<Word, std::pair<int64_t, int64_t>> counts;
    int64_t total = config.replicas;
    for (int r = 0; r < total; ++r) {
        for (int side = 0; side < 2; ++side) {
            Rng rng(config.seed, static_cast<uint64_t>(r) * 2 + static_cast<uint64_t>(side));
            StatePtr s = k.start(side == 0 ? x : y);
            std::vector<Symbol> w;
            for (int step = 0; step < window_start + window_len; ++step) {
                Symbol a = sample_symbol(k, *s, rng, config.tol);
                k.advance(*s, a);
                if (step >= window_start) w.push_back(a);
            }
            auto& c = counts[Word(std::move(w))];
            if (side == 0)
                ++c.first;
            else
                ++c.second;
        }
    }
    // Delta method for (1/2) sum_w s_w (fx_w - fy_w) with s_w the observed
    // signs: each side contributes (1 - (sum_w s_w f_w)^2) / N.
    double half_l1 = 0.0;
    double mx = 0.0, my = 0.0;
    for (const auto& [w, c] : counts) {
        double fx = static_cast<double>(c.first) / static_cast<double>(total);
        double fy = static_cast<double>(c.second) / static_cast<double>(total);
        half_l1 += std::abs(fx - fy);
        double sign = fx > fy ? 1.0 : fx < fy ? -1.0 : 0.0;
        mx += sign * fx;
        my += sign * fy;
    }
    TvEstimate out;
    double tv = 0.5 * half_l1;
    out.std_error = 0.5 * std::sqrt((1.0 - mx * mx) / static_cast<double>(total) +
                                    (1.0 - my * my) / static_cast<double>(total));
    out.value = Interval(std::max(0.0, tv - 3 * out.std_error),
                         std::min(1.0, tv + 3 * out.std_error));
    out.exact = false;
    return out;
}

DecompositionCheck hitting_decomposition_check(const Kernel& k, const PastSpec& past,
                                               const std::set<Word>& target, int K, int64_t cap,
                                               const SimConfig& config, int exact_depth) {
    // Entrance counts fresh windows only (T >= K), so a start past already
    // ending in the target is harmless: it cannot produce T = 0.
    DecompositionCheck out;
    out.exact_depth = static_cast<int>(std::min<int64_t>(exact_depth, cap));

    // Exact first-entrance mass for n <= exact_depth by direct enumeration.
    struct Node {
        StatePtr state;
        std::deque<Symbol> window;
        Interval weight;
    };
    Interval entered(0.0, 0.0);
    double lost = 0.0;
    std::vector<Node> level;
    level.push_back(Node{k.start(past), {}, Interval(1.0, 1.0)});
    const double tol_eval = 1e-15;
    for (int step = 1; step <= out.exact_depth; ++step) {
        std::vector<Node> next;
        std::map<std::pair<CollapseKey, std::vector<Symbol>>, size_t> merged;
        for (auto& node : level) {
            RowEnumeration row = enumerate_row(k, *node.state, tol_eval);
            lost += node.weight.hi * row.tail_bound;
            for (const auto& [a, p] : row.entries) {
                if (p.hi == 0.0) continue;
                Node child{node.state->clone(), node.window, node.weight * p};
                k.advance(*child.state, a);
                child.window.push_back(a);
                if (static_cast<int>(child.window.size()) > K) child.window.pop_front();
                if (step >= K &&
                    target.count(Word(std::vector<Symbol>(child.window.begin(),
                                                          child.window.end())))) {
                    entered += child.weight;  // first entrance at time `step`
                    continue;
                }
                if (auto key = k.collapse_key(*child.state, tol_eval)) {
                    auto mk = std::make_pair(
                        *key, std::vector<Symbol>(child.window.begin(), child.window.end()));
                    auto it = merged.find(mk);
                    if (it != merged.end()) {
                        next[it->second].weight += child.weight;
                        continue;
                    }
                    merged.emplace(std::move(mk), next.size());
                }
                next.push_back(std::move(child));
                if (next.size() > 2'000'000)
                    throw Error(Error::Code::BudgetExceeded,
                                "first-entrance enumeration exceeded the budget");
            }
        }
        level = std::move(next);
    }
    out.exact_mass = entered;

    // Monte-Carlo estimate of P[T > exact_depth] for the remaining mass
    // (timeouts beyond cap are part of that residual and are data).
    SimConfig mc = config;
    HittingReport rep = hitting_time(k, past, target, K, cap, mc);
    int64_t beyond = 0;
    for (int64_t t : rep.samples)
        if (t < 0 || t > out.exact_depth) ++beyond;
    double frac = static_cast<double>(beyond) / static_cast<double>(config.replicas);
    out.mc_fraction = frac;
    out.mc_error =
        3.0 * std::sqrt(std::max(frac * (1 - frac), 1e-12) /
                        static_cast<double>(config.replicas));

    out.total_mass = Interval(entered.lo + frac - out.mc_error - lost,
                              entered.hi + frac + out.mc_error + lost);
    out.pass = out.total_mass.contains(1.0);
    return out;
}

std::map<Word, double> empirical_cylinder_distribution(const Kernel& k, const PastSpec& past,
                                                       int cyl_len, const SimConfig& config) {
    if (cyl_len < 1) throw Error(Error::Code::BadInput, "cylinder length must be >= 1");
    PathResult run = simulate_path(k, past, config.burn_in + config.horizon, config.seed,
                                   config.tol);
    std::map<Word, int64_t> counts;
    int64_t total = 0;
    for (int64_t i = config.burn_in; i + cyl_len <= config.burn_in + config.horizon; ++i) {
        std::vector<Symbol> w;
        for (int j = 0; j < cyl_len; ++j) w.push_back(run.path[static_cast<size_t>(i + j)]);
        ++counts[Word(std::move(w))];
        ++total;
    }
    std::map<Word, double> freq;
    for (const auto& [w, c] : counts)
        freq[w] = static_cast<double>(c) / static_cast<double>(total);
    return freq;
}

}  // namespace gchain
