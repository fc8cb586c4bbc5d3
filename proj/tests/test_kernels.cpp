#include <doctest.h>

#include <cmath>

#include "gchain/kernels.hpp"
#include "gchain/rng.hpp"

using namespace gchain;
using namespace gchain::kernels;

namespace {

PastSpec random_binary_past(Rng& rng) {
    size_t tl = 1 + rng.next_below(3);
    size_t el = rng.next_below(5);
    std::vector<Symbol> tail(tl), trans(el);
    for (auto& s : tail) s = static_cast<Symbol>(rng.next_below(2));
    for (auto& s : trans) s = static_cast<Symbol>(rng.next_below(2));
    return PastSpec{Word(trans), Word(tail)};
}

std::vector<KernelPtr> binary_builtins() {
    return {
        make_markov(1, {{0.9, 0.1}, {0.3, 0.7}}),
        make_sparse_chain(),
        make_renewal(QRule{}),  // constant 1/2
        make_graph_walk({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, 0.8, 0.5),
        make_autoregressive(AlphaRule{}, -1),  // geometric ratio 1/2
    };
}

}  // namespace

TEST_CASE("renewal with constant q is q everywhere") {
    KernelPtr k = make_renewal(QRule{});
    CHECK(eval_kernel(*k, PastSpec::constant(0), 1, 1e-12).lo == 0.5);
    CHECK(eval_kernel(*k, PastSpec::constant(0), 1, 1e-12).hi == 0.5);
    CHECK(eval_kernel(*k, PastSpec{Word{1, 0, 0, 0}, Word{1}}, 1, 1e-12).lo == 0.5);
}

TEST_CASE("renewal reads the trailing-zero run") {
    QRule q;
    q.kind = QRule::Kind::harmonic_shift;
    q.a = 1;
    q.b = 2;
    KernelPtr k = make_renewal(q);
    // run length 3 -> q_3 = 1/5 exactly
    PastSpec p{Word{1, 0, 0, 0}, Word{1}};
    CHECK(eval_kernel(*k, p, 1, 1e-12).lo == doctest::Approx(0.2).epsilon(1e-15));
    // all-zero past -> q_inf = 0, so symbol 1 is forbidden there
    CHECK(eval_kernel(*k, PastSpec::constant(0), 1, 1e-12).is_zero());
    CHECK(eval_kernel(*k, PastSpec::constant(0), 0, 1e-12).hi == 1.0);
}

TEST_CASE("sparse chain forbidden patterns evaluate to the exact zero interval") {
    KernelPtr k = make_sparse_chain();
    PastSpec end01{Word{0, 1}, Word{1}};
    CHECK(eval_kernel(*k, end01, 0, 1e-10).is_zero());
    PastSpec end10{Word{1, 0}, Word{1}};
    CHECK(eval_kernel(*k, end10, 0, 1e-10).is_zero());
    PastSpec end1000{Word{1, 0, 0, 0}, Word{1}};
    CHECK(eval_kernel(*k, end1000, 0, 1e-10).is_zero());
    CHECK(eval_kernel(*k, PastSpec::constant(0), 0, 1e-10).is_zero());
    // the complementary symbol then carries the full mass, exactly
    CHECK(eval_kernel(*k, end01, 1, 1e-10).lo == 1.0);
}

TEST_CASE("sparse chain mixture from the all-ones past is exactly 1/3") {
    KernelPtr k = make_sparse_chain();
    ProbInterval p = eval_kernel(*k, PastSpec::constant(1), 0, 1e-12);
    CHECK(p.width() <= 1e-12);
    CHECK(p.contains(1.0 / 3.0));
}

TEST_CASE("sparse chain damps long runs by 1/sqrt(run-1)") {
    KernelPtr k = make_sparse_chain();
    // run of four zeros after a 1 against the all-ones older past
    PastSpec p{Word{1, 0, 0, 0, 0}, Word{1}};
    ProbInterval got = eval_kernel(*k, p, 0, 1e-12);
    // brute-force the mixture independently from the window averages
    double mix = 0.0;
    auto avg_window = [&](int j) {
        double s = 0;
        for (int l = 0; l <= j; ++l) s += p.at(-l);
        return s / (j + 1);
    };
    double w = 0.5;
    for (int j = 0; j <= 60; ++j) {
        mix += w * (avg_window(j) >= 0.5 ? 1.0 / 3.0 : 2.0 / 3.0);
        w *= 0.5;
    }
    CHECK(got.contains(mix / std::sqrt(3.0)));
    CHECK(got.width() <= 1e-12);
}

TEST_CASE("autoregressive consensus pasts are deterministic") {
    KernelPtr k = make_autoregressive(AlphaRule{}, -1);
    const Alphabet& a = k->alphabet();
    Symbol plus = a.symbol_of(1), minus = a.symbol_of(-1);
    // escape from consensus is forced
    CHECK(eval_kernel(*k, PastSpec::constant(plus), minus, 1e-12).lo == 1.0);
    CHECK(eval_kernel(*k, PastSpec::constant(plus), plus, 1e-12).is_zero());
    CHECK(eval_kernel(*k, PastSpec::constant(minus), minus, 1e-12).is_zero());

    KernelPtr trap = make_autoregressive(AlphaRule{}, +1);
    CHECK(eval_kernel(*trap, PastSpec::constant(plus), plus, 1e-12).lo == 1.0);
    CHECK(eval_kernel(*trap, PastSpec::constant(plus), minus, 1e-12).is_zero());
}

TEST_CASE("autoregressive mixed past evaluates the weighted sum") {
    KernelPtr k = make_autoregressive(AlphaRule{}, -1);
    const Alphabet& a = k->alphabet();
    Symbol plus = a.symbol_of(1), minus = a.symbol_of(-1);
    // past ...111(-1): the most recent symbol enters with weight alpha_1
    PastSpec p = PastSpec::constant(plus).append(Word{minus});
    double sum = 0.25 * (-1.0) + 0.25;  // alpha_1*(-1) + tail of all +1
    ProbInterval got = eval_kernel(*k, p, plus, 1e-12);
    CHECK(got.contains(0.5 - sum));
    CHECK(got.width() <= 1e-12);
}

TEST_CASE("autoregressive explicit alphas validate their total") {
    AlphaRule bad;
    bad.kind = AlphaRule::Kind::explicit_list;
    bad.values = {0.25, 0.2};
    CHECK_THROWS_AS(make_autoregressive(bad, -1), Error);
    AlphaRule good;
    good.kind = AlphaRule::Kind::explicit_list;
    good.values = {0.25, 0.25};
    KernelPtr k = make_autoregressive(good, -1);
    CHECK(k->markov_order() == 2);
    CHECK(k->zeros().cylinder_zeros.size() == 2);
    CHECK(k->zeros().isolated_zeros.empty());
}

TEST_CASE("markov kernel rejects bad rows") {
    CHECK_THROWS_AS(make_markov(1, {{0.9, 0.2}, {0.3, 0.7}}), Error);
    CHECK_THROWS_AS(make_markov(1, {{0.9, 0.1}}), Error);
    CHECK_THROWS_AS(make_markov(2, {{1.0, 0.0}, {0.5, 0.5}}), Error);
}

TEST_CASE("graph walk requires out-edges everywhere") {
    CHECK_THROWS_AS(make_graph_walk({{0, 1}}, 0.0, 0.5), Error);
    KernelPtr k = make_graph_walk({{0, 1}, {1, 0}, {1, 1}}, 0.0, 0.5);
    // deterministic edge from vertex 0
    CHECK(eval_kernel(*k, PastSpec::constant(0), 1, 1e-12).lo == 1.0);
    CHECK(eval_kernel(*k, PastSpec::constant(0), 0, 1e-12).is_zero());
    // uniform split from vertex 1
    CHECK(eval_kernel(*k, PastSpec::constant(1), 0, 1e-12).lo == 0.5);
}

TEST_CASE("graph walk with history bias prefers recent vertices") {
    KernelPtr k = make_graph_walk({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, 1.0, 0.5);
    ProbInterval after_ones = eval_kernel(*k, PastSpec::constant(1), 1, 1e-10);
    ProbInterval after_zeros = eval_kernel(*k, PastSpec::constant(0).append(Word{1}), 1, 1e-10);
    CHECK(after_ones.lo > after_zeros.hi);  // long-one history raises the weight of 1
    CHECK(after_ones.width() <= 1e-10);
}

TEST_CASE("poisson kernel after a nonzero symbol is a point mass at 0") {
    BetaRule b;
    b.kind = BetaRule::Kind::geometric;
    b.b0 = 0.3;
    b.ratio = 0.5;
    KernelPtr k = make_poisson(b, 1.0);
    PastSpec p{Word{5}, Word{0}};
    CHECK(eval_kernel(*k, p, 0, 1e-12).lo == 1.0);
    CHECK(eval_kernel(*k, p, 3, 1e-12).is_zero());
    StatePtr s = k->start(p);
    CHECK(k->forbidden(*s, 3));
    CHECK(!k->forbidden(*s, 0));
}

TEST_CASE("poisson kernel with zero betas is a unit-rate row") {
    BetaRule b;
    b.kind = BetaRule::Kind::explicit_list;
    KernelPtr k = make_poisson(b, 1.0);
    for (Symbol a = 0; a < 6; ++a) {
        ProbInterval got = eval_kernel(*k, PastSpec::constant(0), a, 1e-12);
        double expect = std::exp(-1.0);
        for (Symbol i = 1; i <= a; ++i) expect /= i;
        CHECK(got.contains(expect));
        CHECK(got.width() <= 1e-12);
    }
}

TEST_CASE("unknown symbols and bad tolerances are rejected") {
    KernelPtr k = make_sparse_chain();
    CHECK_THROWS_AS(eval_kernel(*k, PastSpec::constant(0), 2, 1e-12), Error);
    CHECK_THROWS_AS(eval_kernel(*k, PastSpec::constant(0), 0, 0.0), Error);
}

TEST_CASE("rows are normalized: interval midpoints sum to 1") {
    Rng rng(2024, 0);
    for (const auto& k : binary_builtins()) {
        for (int trial = 0; trial < 40; ++trial) {
            PastSpec p = random_binary_past(rng);
            StatePtr s = k->start(p);
            RowEnumeration row = enumerate_row(*k, *s, 1e-10);
            double mass = 0;
            for (auto& [a, pi] : row.entries) mass += pi.mid();
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("countable rows are normalized up to the certified tail") {
    BetaRule b;
    b.kind = BetaRule::Kind::geometric;
    b.b0 = -0.4;
    b.ratio = 0.6;
    KernelPtr k = make_poisson(b, 2.0);
    PastSpec p = PastSpec::constant(0).append(Word{3, 0});
    StatePtr s = k->start(p);
    RowEnumeration row = enumerate_row(*k, *s, 1e-10);
    double mass = 0;
    for (auto& [a, pi] : row.entries) mass += pi.mid();
    CHECK(mass + row.tail_bound >= 1.0 - 1e-8);
    CHECK(mass <= 1.0 + 1e-8);
}

TEST_CASE("state updates agree exactly with fresh initialization") {
    Rng rng(99, 0);
    for (const auto& k : binary_builtins()) {
        for (int trial = 0; trial < 30; ++trial) {
            PastSpec p = random_binary_past(rng);
            size_t len = 1 + rng.next_below(20);
            std::vector<Symbol> u(len);
            for (auto& s : u) s = static_cast<Symbol>(rng.next_below(2));

            StatePtr incremental = k->start(p);
            for (Symbol a : u) k->advance(*incremental, a);
            StatePtr fresh = k->start(p.append(Word(u)));

            for (Symbol a = 0; a < 2; ++a) {
                ProbInterval pi = k->probability(*incremental, a, 1e-11);
                ProbInterval pf = k->probability(*fresh, a, 1e-11);
                CHECK(pi.lo == pf.lo);
                CHECK(pi.hi == pf.hi);
                CHECK(k->forbidden(*incremental, a) == k->forbidden(*fresh, a));
            }
        }
    }
}

TEST_CASE("declared zeros evaluate to the exact zero interval") {
    for (const auto& k : binary_builtins()) {
        const ZeroDeclaration& decl = k->zeros();
        decl.validate();
        for (const auto& cyl : decl.cylinder_zeros) {
            for (Symbol tail_sym = 0; tail_sym < 2; ++tail_sym) {
                PastSpec p = PastSpec::constant(tail_sym).append(cyl.context);
                CHECK(eval_kernel(*k, p, cyl.symbol, 1e-10).is_zero());
                CHECK(k->forbidden(*k->start(p), cyl.symbol));
            }
        }
        for (const auto& iso : decl.isolated_zeros) {
            CHECK(eval_kernel(*k, iso.past, iso.symbol, 1e-10).is_zero());
        }
    }
}

TEST_CASE("complete declarations leave every undeclared transition positive") {
    Rng rng(555, 0);
    for (const auto& k : binary_builtins()) {
        if (!k->zeros().complete) continue;
        int checked = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            PastSpec p = random_binary_past(rng);
            Symbol a = static_cast<Symbol>(rng.next_below(2));
            StatePtr s = k->start(p);
            if (k->forbidden(*s, a)) continue;
            ProbInterval got = k->probability(*s, a, 1e-13);
            CHECK(got.hi > 0.0);
            ++checked;
        }
        CHECK(checked > 700);
    }
}

TEST_CASE("isolated zeros may not duplicate cylinder zeros") {
    ZeroDeclaration decl;
    decl.cylinder_zeros.push_back({Word{0, 0}, 1});
    decl.isolated_zeros.push_back({PastSpec::constant(0), 1});
    CHECK_THROWS_AS(decl.validate(), Error);
}
