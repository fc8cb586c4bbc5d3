#include "gchain/structure.hpp"

#include <algorithm>
#include <deque>

#include "gchain/sampling.hpp"

namespace gchain {

TransitionBounds build_bound_matrices(const Kernel& kernel, int K, uint64_t row_budget) {
    if (!kernel.alphabet().finite)
        throw Error(Error::Code::AlphabetInfinite,
                    "bound matrices need a finite alphabet; countable kernels use the declared "
                    "hub structure");
    if (K < 1) throw Error(Error::Code::BadInput, "K must be >= 1");
    int n = kernel.alphabet().size;
    uint64_t dim = 1;
    for (int i = 0; i < K; ++i) {
        dim *= static_cast<uint64_t>(n);
        if (dim > row_budget)
            throw Error(Error::Code::BudgetExceeded, "|A|^K exceeds the row budget");
    }

    const ZeroDeclaration& decl = kernel.zeros();
    TransitionBounds out(K, n, dim);

    for (uint64_t ui = 0; ui < dim; ++ui) {
        Word u = word_at_index(ui, K, n);
        Word shifted = u.drop_front(1);
        for (Symbol a = 0; a < n; ++a) {
            Word v = shifted.append(a);
            uint64_t vi = word_index(v, n);

            // over(u,v) = 0 only when a declared context inside the K-window
            // forbids the step from every past ending in u.
            bool over_zero = false;
            // under(u,v) = 1 only when no declared zero of any kind can match
            // a past ending in u.
            bool under_one = decl.complete;
            for (const auto& cyl : decl.cylinder_zeros) {
                if (cyl.symbol != a) continue;
                if (cyl.context.size() <= static_cast<size_t>(K)) {
                    if (u.ends_with(cyl.context)) {
                        over_zero = true;
                        under_one = false;
                    }
                } else if (cyl.context.ends_with(u)) {
                    under_one = false;
                }
            }
            if (under_one) {
                for (const auto& iso : decl.isolated_zeros) {
                    if (iso.symbol != a) continue;
                    if (iso.past.ends_with(u)) {
                        under_one = false;
                        break;
                    }
                }
            }
            out.over.set(ui, vi, !over_zero);
            out.under.set(ui, vi, under_one);
        }
    }
    return out;
}

namespace {

BoolMatrix restrict_to(const BoolMatrix& m, const std::vector<uint64_t>& verts) {
    BoolMatrix sub(verts.size());
    for (uint64_t i = 0; i < verts.size(); ++i)
        for (uint64_t j = 0; j < verts.size(); ++j)
            if (m.get(verts[i], verts[j])) sub.set(i, j, true);
    return sub;
}

std::set<Word> words_of(const std::vector<uint64_t>& idxs, int K, int n) {
    std::set<Word> out;
    for (uint64_t i : idxs) out.insert(word_at_index(i, K, n));
    return out;
}

// Per-row smallest exponent with an all-ones row on the class; nullopt when
// some row never saturates within the cap.
std::optional<std::map<uint64_t, uint64_t>> primitivity_witnesses(const BoolMatrix& sub,
                                                                  uint64_t cap) {
    uint64_t d = sub.dim();
    SccResult scc = strongly_connected_components(sub);
    if (scc.components.size() != 1) return std::nullopt;
    std::vector<uint64_t> all(d);
    for (uint64_t i = 0; i < d; ++i) all[i] = i;
    if (class_period(sub, all) != 1) return std::nullopt;

    // Saturation is monotone once every column has an in-edge, so the first
    // power with an all-ones row is the witness.
    uint64_t wielandt = d <= 1 ? 2 : (d - 1) * (d - 1) + 2;
    cap = std::min(cap, wielandt);
    std::map<uint64_t, uint64_t> found;
    BoolMatrix power = sub;
    for (uint64_t e = 1; e <= cap && found.size() < d; ++e) {
        if (e > 1) power = power.multiply(sub);
        for (uint64_t i = 0; i < d; ++i) {
            if (found.count(i)) continue;
            if (power.row_all_ones_on(i, all)) found[i] = e;
        }
    }
    if (found.size() < d) return std::nullopt;
    return found;
}

}  // namespace

EriReport check_eri(const TransitionBounds& bounds, const Kernel& kernel,
                    const HittingSpec& hitting) {
    if (!bounds.under.dominated_by(bounds.over))
        throw Error(Error::Code::InconsistentBounds,
                    "lower bound matrix exceeds the upper one");
    const int K = bounds.K;
    const int n = bounds.alphabet_size;
    EriReport report;
    bool incomplete = !kernel.zeros().complete;

    // Any class satisfying closure plus primitivity is exactly a sink
    // component of the over-graph, so those are the only candidates.
    std::vector<std::vector<uint64_t>> sinks = sink_components(bounds.over);
    for (const auto& s : sinks) report.candidates.push_back(words_of(s, K, n));

    std::vector<uint64_t> passing;
    std::map<uint64_t, std::map<uint64_t, uint64_t>> witnesses;
    uint64_t cap = 2 * bounds.over.dim();
    for (size_t ci = 0; ci < sinks.size(); ++ci) {
        auto wit = primitivity_witnesses(restrict_to(bounds.under, sinks[ci]), cap);
        if (wit) {
            passing.push_back(ci);
            witnesses[ci] = std::move(*wit);
        }
    }

    auto settle = [&](EriVerdict v, const std::string& why) {
        report.verdict = incomplete && v != EriVerdict::Undecided ? EriVerdict::Undecided : v;
        report.reason = incomplete ? "incomplete zero declaration: " + why : why;
    };

    if (passing.empty()) {
        settle(EriVerdict::NotERI,
               sinks.size() > 1 ? "no closed class saturates under the lower matrix"
                                : "the closed class is not primitive under the lower matrix");
        return report;
    }
    if (passing.size() > 1) {
        settle(EriVerdict::NotERI, "several closed classes satisfy closure and primitivity");
        return report;
    }

    const auto& cls = sinks[passing.front()];
    report.core = words_of(cls, K, n);
    for (const auto& [row, e] : witnesses[passing.front()])
        report.primitivity_witness[word_at_index(cls[row], K, n)] = e;

    // Condition (iii): the trailing word must a.s. reach the class from
    // every outside start.
    std::vector<bool> in_cls(bounds.over.dim(), false);
    for (uint64_t i : cls) in_cls[i] = true;
    bool vacuous = cls.size() == bounds.over.dim();

    if (vacuous) {
        report.hitting.kind = HittingEvidence::Kind::analytic;
        settle(EriVerdict::ERI, "all length-K words already belong to the class");
        return report;
    }

    if (hitting.analytic) {
        auto order = kernel.markov_order();
        if (!order) {
            settle(EriVerdict::Undecided,
                   "analytic hitting evidence needs a finite-order kernel");
            return report;
        }
        report.hitting.kind = HittingEvidence::Kind::analytic;
        if (*order > K) {
            // Lift to the kernel's own order: absorption is certain exactly
            // when every closed class up there meets the lifted target.
            TransitionBounds lifted = build_bound_matrices(kernel, *order);
            for (const auto& sink : sink_components(lifted.over)) {
                bool meets = false;
                for (uint64_t wi : sink) {
                    Word w = word_at_index(wi, *order, n);
                    if (in_cls[word_index(w.suffix(static_cast<size_t>(K)), n)]) {
                        meets = true;
                        break;
                    }
                }
                if (!meets) {
                    settle(EriVerdict::NotERI, "a closed class never reaches the target words");
                    return report;
                }
            }
        }
        // order <= K: the unique closed class of the word chain absorbs.
        settle(EriVerdict::ERI, "unique primitive closed class; absorption certain");
        return report;
    }

    // Monte-Carlo evidence from every outside prefix and canonical tail.
    report.hitting.kind = HittingEvidence::Kind::monte_carlo;
    report.hitting.cap = hitting.mc.cap;
    report.hitting.trials = hitting.mc.trials;
    std::vector<Word> tails;
    for (const auto& iso : kernel.zeros().isolated_zeros) tails.push_back(iso.past.tail());
    if (tails.empty())
        for (Symbol a = 0; a < std::min(n, 4); ++a) tails.push_back(Word{a});

    std::vector<PastSpec> starts;
    for (uint64_t ui = 0; ui < bounds.over.dim() && starts.size() < 64; ++ui) {
        if (in_cls[ui]) continue;
        Word u = word_at_index(ui, K, n);
        for (const auto& t : tails) starts.push_back(PastSpec(u, t));
    }
    report.hitting.starts = static_cast<int>(starts.size());

    const double tol = 1e-12;
    for (size_t si = 0; si < starts.size(); ++si) {
        for (int trial = 0; trial < hitting.mc.trials; ++trial) {
            Rng rng(hitting.mc.seed, si * 1000003ull + static_cast<uint64_t>(trial));
            StatePtr state = kernel.start(starts[si]);
            std::deque<Symbol> window;
            bool hit = false;
            for (int64_t step = 1; step <= hitting.mc.cap; ++step) {
                Symbol a = sample_symbol(kernel, *state, rng, tol);
                kernel.advance(*state, a);
                window.push_back(a);
                if (static_cast<int>(window.size()) > K) window.pop_front();
                if (static_cast<int>(window.size()) == K &&
                    in_cls[word_index(Word(std::vector<Symbol>(window.begin(), window.end())),
                                      n)]) {
                    hit = true;
                    break;
                }
            }
            if (!hit) ++report.hitting.timeouts;
        }
    }
    if (report.hitting.timeouts > 0) {
        settle(EriVerdict::Undecided, "hitting trials exceeded the step cap");
        return report;
    }
    settle(EriVerdict::ERI, "unique primitive closed class; hitting supported by Monte-Carlo");
    return report;
}

EriReport check_eri_countable(const Kernel& kernel, int K) {
    EriReport report;
    if (kernel.alphabet().finite)
        throw Error(Error::Code::BadInput, "kernel has a finite alphabet");
    if (K != 1)
        throw Error(Error::Code::AlphabetInfinite,
                    "countable alphabets are analyzed at K = 1 only");
    auto hub = kernel.zeros().countable_hub;
    if (!hub || !kernel.zeros().complete) {
        report.verdict = EriVerdict::Undecided;
        report.reason = "no declared transition structure for the countable alphabet";
        return report;
    }
    // Declared star pattern: hub -> everything, everything -> hub, nothing
    // else. Spot-check the declaration against the kernel before using it.
    std::vector<Symbol> sample = {*hub, *hub + 1, *hub + 2, *hub + 7};
    for (Symbol from : sample) {
        StatePtr s = kernel.start(PastSpec(Word{from}, Word{*hub}));
        for (Symbol to : sample) {
            bool expect_edge = from == *hub || to == *hub;
            if (kernel.forbidden(*s, to) == expect_edge) {
                report.verdict = EriVerdict::Undecided;
                report.reason = "kernel disagrees with its declared hub structure";
                return report;
            }
        }
    }
    report.verdict = EriVerdict::ERI;
    report.reason = "hub pattern: all rows saturate in two steps and the class is everything";
    report.core_is_full_space = true;
    report.primitivity_witness[Word{*hub}] = 2;
    report.hitting.kind = HittingEvidence::Kind::analytic;
    return report;
}

AssumptionB check_assumption_B(const Kernel& kernel, int K, const std::set<Word>& core) {
    const ZeroDeclaration& decl = kernel.zeros();
    AssumptionB out;
    for (const auto& cyl : decl.cylinder_zeros) {
        if (cyl.context.size() <= static_cast<size_t>(K)) continue;
        // Pasts matching this long context may already sit in a short
        // declared cylinder, in which case they are not "new" zeros.
        bool subsumed = false;
        for (const auto& other : decl.cylinder_zeros) {
            if (other.context.size() <= static_cast<size_t>(K) &&
                cyl.context.ends_with(other.context)) {
                subsumed = true;
                break;
            }
        }
        if (subsumed) continue;
        if (core.count(cyl.context.suffix(static_cast<size_t>(K)))) {
            out.status = AssumptionB::Status::violated;
            out.witness = cyl.context;
            return out;
        }
    }
    out.status = decl.complete ? AssumptionB::Status::holds : AssumptionB::Status::undecided;
    return out;
}

AssumptionC check_assumption_C(const Kernel& kernel, int K, const std::set<Word>& core,
                               const std::vector<PastSpec>& probes, int max_len) {
    AssumptionC out;
    const ZeroDeclaration& decl = kernel.zeros();
    if (!decl.complete && !decl.countable_hub) {
        out.status = AssumptionC::Status::undecided;
        return out;
    }
    int branch = kernel.alphabet().finite ? kernel.alphabet().size : 4;
    bool any_unresolved = false;

    for (const auto& probe : probes) {
        if (kernel.alphabet().finite && !core.empty() &&
            !core.count(probe.last(static_cast<size_t>(K))))
            throw Error(Error::Code::BadInput, "probe suffix lies outside the core class");

        std::optional<Word> witness;
        for (int len = 1; len <= max_len && !witness; ++len) {
            uint64_t count = 1;
            for (int i = 0; i < len; ++i) count *= static_cast<uint64_t>(branch);
            for (uint64_t wi = 0; wi < count; ++wi) {
                Word v = word_at_index(wi, len, branch);
                if (!word_positive(kernel, probe, v)) continue;
                if (blocked_by_isolated(decl, probe, v, static_cast<size_t>(max_len))) continue;
                witness = v;
                break;
            }
        }
        if (witness) {
            out.witnesses[probe] = *witness;
            continue;
        }

        // Certified trap: a single allowed symbol that maps the probe onto
        // itself, with the probe among the declared isolated-zero pasts, can
        // only ever produce powers of that symbol, all of which lead into
        // the isolated zero.
        std::vector<Symbol> allowed;
        StatePtr s = kernel.start(probe);
        for (Symbol a = 0; a < branch; ++a)
            if (!kernel.forbidden(*s, a)) allowed.push_back(a);
        bool declared_past = false;
        for (const auto& iso : decl.isolated_zeros)
            if (iso.past == probe) declared_past = true;
        if (allowed.size() == 1 && probe.append(allowed[0]) == probe && declared_past) {
            out.status = AssumptionC::Status::violated;
            out.violating_probe = probe;
            return out;
        }
        any_unresolved = true;
        if (!out.violating_probe) out.violating_probe = probe;  // unresolved probe
    }
    out.status = any_unresolved ? AssumptionC::Status::undecided
                                : AssumptionC::Status::holds_on_probes;
    return out;
}

std::vector<PastSpec> default_probes(const Kernel& kernel, [[maybe_unused]] int K,
                                     const std::set<Word>& core, size_t max_probes) {
    std::vector<Word> tails;
    for (const auto& iso : kernel.zeros().isolated_zeros) {
        Word t = iso.past.tail();
        if (std::find(tails.begin(), tails.end(), t) == tails.end()) tails.push_back(t);
    }
    int n = kernel.alphabet().finite ? kernel.alphabet().size : 2;
    for (Symbol a = 0; a < std::min(n, 4); ++a) {
        Word t{a};
        if (std::find(tails.begin(), tails.end(), t) == tails.end()) tails.push_back(t);
    }

    std::vector<PastSpec> probes;
    if (!kernel.alphabet().finite) {
        // Hub structure: probe from a hub suffix and from a non-hub one.
        Symbol hub = kernel.zeros().countable_hub.value_or(0);
        probes.push_back(PastSpec(Word{hub}, Word{hub}));
        probes.push_back(PastSpec(Word{hub + 1}, Word{hub}));
        return probes;
    }
    if (core.empty()) {
        // No class to anchor the suffix condition (the pair was not e.r.i.);
        // probe the declared isolated pasts and the constant ones directly.
        for (const auto& iso : kernel.zeros().isolated_zeros) {
            if (std::find(probes.begin(), probes.end(), iso.past) == probes.end())
                probes.push_back(iso.past);
        }
        for (Symbol a = 0; a < std::min(n, 4); ++a) {
            PastSpec p = PastSpec::constant(a);
            if (std::find(probes.begin(), probes.end(), p) == probes.end()) probes.push_back(p);
        }
        return probes;
    }
    for (const Word& u : core) {
        for (const auto& t : tails) {
            if (probes.size() >= max_probes) return probes;
            PastSpec p(u, t);
            if (std::find(probes.begin(), probes.end(), p) == probes.end())
                probes.push_back(p);
        }
    }
    return probes;
}

std::set<Word> positivity_profile(const Kernel& kernel, const PastSpec& past, int n, int K,
                                  uint64_t node_budget) {
    if (!kernel.alphabet().finite)
        throw Error(Error::Code::AlphabetInfinite, "positivity profile needs a finite alphabet");
    if (n < 1 || K < 1) throw Error(Error::Code::BadInput, "positivity profile needs n, K >= 1");
    int sz = kernel.alphabet().size;

    std::vector<StatePtr> level;
    level.push_back(kernel.start(past));
    const double key_tol = 1e-9;
    for (int step = 0; step < n - 1; ++step) {
        std::vector<StatePtr> next;
        std::set<CollapseKey> seen;
        for (const auto& s : level) {
            for (Symbol a = 0; a < sz; ++a) {
                if (kernel.forbidden(*s, a)) continue;
                StatePtr child = s->clone();
                kernel.advance(*child, a);
                if (auto key = kernel.collapse_key(*child, key_tol)) {
                    if (!seen.insert(*key).second) continue;
                }
                next.push_back(std::move(child));
                if (next.size() > node_budget)
                    throw Error(Error::Code::BudgetExceeded, "positivity profile too wide");
            }
        }
        level = std::move(next);
    }

    uint64_t dim = 1;
    for (int i = 0; i < K; ++i) {
        dim *= static_cast<uint64_t>(sz);
        if (dim > node_budget)
            throw Error(Error::Code::BudgetExceeded, "|A|^K exceeds the node budget");
    }
    std::set<Word> support;
    for (uint64_t vi = 0; vi < dim; ++vi) {
        Word v = word_at_index(vi, K, sz);
        for (const auto& s : level) {
            StatePtr walk = s->clone();
            bool ok = true;
            for (Symbol a : v.symbols()) {
                if (kernel.forbidden(*walk, a)) {
                    ok = false;
                    break;
                }
                kernel.advance(*walk, a);
            }
            if (ok) {
                support.insert(v);
                break;
            }
        }
    }
    return support;
}

}  // namespace gchain
