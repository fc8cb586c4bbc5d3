#include <doctest.h>

#include <cmath>

#include "gchain/kernels.hpp"
#include "gchain/sim.hpp"

using namespace gchain;
using namespace gchain::kernels;

TEST_CASE("deterministic rows force the whole path") {
    // period-2 rotation: 0 -> 1 -> 0
    KernelPtr k = make_markov(1, {{0.0, 1.0}, {1.0, 0.0}});
    PathResult r = simulate_path(*k, PastSpec::constant(0), 8, 123);
    CHECK(r.path == Word{1, 0, 1, 0, 1, 0, 1, 0});
    CHECK(r.max_step_defect == 0.0);
}

TEST_CASE("a renewal chain that always fires emits only ones") {
    QRule q;
    q.c = 1.0 - 1e-9;  // q must stay inside (0,1); this is as forced as it gets
    KernelPtr k = make_renewal(q);
    PathResult r = simulate_path(*k, PastSpec::constant(0), 200, 5);
    for (size_t i = 0; i < r.path.size(); ++i) CHECK(r.path[i] == 1);
}

TEST_CASE("identical seeds give bit-identical paths, different seeds differ") {
    KernelPtr k = make_sparse_chain();
    PathResult a = simulate_path(*k, PastSpec::constant(1), 500, 42);
    PathResult b = simulate_path(*k, PastSpec::constant(1), 500, 42);
    PathResult c = simulate_path(*k, PastSpec::constant(1), 500, 43);
    CHECK(a.path == b.path);
    CHECK(a.path != c.path);
}

TEST_CASE("long-run symbol frequency matches the stationary law") {
    KernelPtr k = make_markov(1, {{0.9, 0.1}, {0.3, 0.7}});
    const int64_t burn = 1000, n = 100000;
    PathResult r = simulate_path(*k, PastSpec::constant(0), burn + n, 2718);
    int64_t zeros = 0;
    for (int64_t i = burn; i < burn + n; ++i)
        if (r.path[static_cast<size_t>(i)] == 0) ++zeros;
    double freq = static_cast<double>(zeros) / static_cast<double>(n);
    // exact stationary mass of 0 is 0.75; three standard errors, stretched
    // because neighbouring samples are positively correlated
    double se = std::sqrt(0.75 * 0.25 / static_cast<double>(n)) * 3;
    CHECK(std::abs(freq - 0.75) < 4 * se);
}

TEST_CASE("simulated paths never realize a declared-forbidden transition") {
    std::vector<KernelPtr> ks = {make_sparse_chain(), make_autoregressive(AlphaRule{}, -1)};
    for (const auto& k : ks) {
        PastSpec p = PastSpec::constant(1);
        PathResult r = simulate_path(*k, p, 5000, 9);
        StatePtr s = k->start(p);
        for (size_t i = 0; i < r.path.size(); ++i) {
            CHECK(!k->forbidden(*s, r.path[i]));
            k->advance(*s, r.path[i]);
        }
    }
}

TEST_CASE("hitting the full word space takes exactly K fresh symbols") {
    KernelPtr k = make_markov(1, {{0.5, 0.5}, {0.5, 0.5}});
    std::set<Word> all;
    for (uint64_t i = 0; i < 8; ++i) all.insert(word_at_index(i, 3, 2));
    SimConfig cfg{77, 50, 1, 0, 1e-12};
    HittingReport r = hitting_time(*k, PastSpec::constant(0), all, 3, 100, cfg);
    for (int64_t t : r.samples) CHECK(t == 3);
    CHECK(r.timeout_fraction == 0.0);

    std::set<Word> single = {Word{0}, Word{1}};
    HittingReport r1 = hitting_time(*k, PastSpec::constant(0), single, 1, 100, cfg);
    for (int64_t t : r1.samples) CHECK(t == 1);
}

TEST_CASE("two-state hitting time matches first-step analysis") {
    // expected time to reach symbol 1 from a past ending in 0 is 1/0.1 = 10
    KernelPtr k = make_markov(1, {{0.9, 0.1}, {0.3, 0.7}});
    SimConfig cfg{31, 4000, 1, 0, 1e-12};
    HittingReport r = hitting_time(*k, PastSpec::constant(0), {Word{1}}, 1, 100000, cfg);
    CHECK(r.timeout_fraction == 0.0);
    // geometric(0.1): sd ~ sqrt(0.9)/0.1 ~ 9.49
    double se = 9.49 / std::sqrt(4000.0);
    CHECK(std::abs(r.empirical_mean - 10.0) < 3 * se);
}

TEST_CASE("sparse chain reaches its class immediately and never times out") {
    KernelPtr k = make_sparse_chain();
    std::set<Word> core = {Word{1, 0}, Word{0, 1}, Word{1, 1}};
    SimConfig cfg{8, 2000, 1, 0, 1e-12};
    HittingReport r = hitting_time(*k, PastSpec{Word{0, 0}, Word{1}}, core, 2, 10000, cfg);
    CHECK(r.timeout_fraction == 0.0);
    // whatever the first fresh symbol is, the second window is in the class
    for (int64_t t : r.samples) CHECK(t == 2);
}

TEST_CASE("timeouts are data, not errors") {
    // the identity chain never leaves symbol 0
    KernelPtr k = make_markov(1, {{1.0, 0.0}, {0.0, 1.0}});
    SimConfig cfg{3, 50, 1, 0, 1e-12};
    HittingReport r = hitting_time(*k, PastSpec::constant(0), {Word{1}}, 1, 200, cfg);
    CHECK(r.timeout_fraction == 1.0);
    CHECK(r.empirical_mean == 0.0);
    for (int64_t t : r.samples) CHECK(t == -1);
}

TEST_CASE("per-replica streams are independent of scheduling order") {
    KernelPtr k = make_sparse_chain();
    std::set<Word> core = {Word{1, 0}, Word{0, 1}, Word{1, 1}};
    SimConfig cfg{99, 64, 1, 0, 1e-12};
    HittingReport merged = hitting_time(*k, PastSpec{Word{0, 0}, Word{1}}, core, 2, 1000, cfg);
    // running a prefix of the replicas reproduces the same leading samples,
    // so any parallel schedule merging by index gives identical reports
    for (int r = 1; r < 64; r += 13) {
        SimConfig prefix{cfg.seed, r, 1, 0, 1e-12};
        HittingReport upto =
            hitting_time(*k, PastSpec{Word{0, 0}, Word{1}}, core, 2, 1000, prefix);
        for (int i = 0; i < r; ++i)
            CHECK(upto.samples[static_cast<size_t>(i)] == merged.samples[static_cast<size_t>(i)]);
    }
}

TEST_CASE("first-entrance decomposition is exact for the geometric case") {
    KernelPtr k = make_markov(1, {{0.9, 0.1}, {0.3, 0.7}});
    SimConfig cfg{17, 20000, 1, 0, 1e-12};
    DecompositionCheck c =
        hitting_decomposition_check(*k, PastSpec::constant(0), {Word{1}}, 1, 30, cfg, 30);
    CHECK(c.pass);
    // enumerated entrance mass is the geometric series sum_{n<=30} 0.9^(n-1) 0.1
    double want = 1.0 - std::pow(0.9, 30);
    CHECK(c.exact_mass.mid() == doctest::Approx(want).epsilon(1e-12));
    CHECK(c.total_mass.contains(1.0));
}

TEST_CASE("first-entrance decomposition with a universal target sits at n = K") {
    KernelPtr k = make_markov(1, {{0.5, 0.5}, {0.5, 0.5}});
    std::set<Word> all = {Word{0, 0}, Word{1, 0}, Word{0, 1}, Word{1, 1}};
    SimConfig cfg{21, 2000, 1, 0, 1e-12};
    DecompositionCheck c =
        hitting_decomposition_check(*k, PastSpec::constant(0), all, 2, 10, cfg, 10);
    CHECK(c.pass);
    CHECK(c.exact_mass.mid() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.mc_fraction == 0.0);
}

TEST_CASE("sparse-chain decomposition covers the mass") {
    KernelPtr k = make_sparse_chain();
    std::set<Word> core = {Word{1, 0}, Word{0, 1}, Word{1, 1}};
    SimConfig cfg{4, 20000, 1, 0, 1e-12};
    DecompositionCheck c =
        hitting_decomposition_check(*k, PastSpec{Word{0, 0}, Word{1}}, core, 2, 50, cfg, 12);
    CHECK(c.pass);
    CHECK(std::abs(c.total_mass.mid() - 1.0) < 1e-3);
}

TEST_CASE("empirical window frequencies: forced alternation") {
    KernelPtr k = make_markov(1, {{0.0, 1.0}, {1.0, 0.0}});
    SimConfig cfg{12, 1, 4000, 100, 1e-12};
    auto freq = empirical_cylinder_distribution(*k, PastSpec::constant(0), 1, cfg);
    CHECK(std::abs(freq.at(Word{0}) - 0.5) < 2.0 / 4000);
    CHECK(std::abs(freq.at(Word{1}) - 0.5) < 2.0 / 4000);
}

TEST_CASE("empirical window frequencies: two-state stationary mass") {
    KernelPtr k = make_markov(1, {{0.9, 0.1}, {0.3, 0.7}});
    SimConfig cfg{13, 1, 60000, 1000, 1e-12};
    auto freq = empirical_cylinder_distribution(*k, PastSpec::constant(0), 1, cfg);
    double se = 3 * std::sqrt(0.75 * 0.25 / 60000.0);
    CHECK(std::abs(freq.at(Word{0}) - 0.75) < 4 * se);
    double total = 0;
    for (auto& [w, f] : freq) total += f;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empirical window frequencies: renewal return rate") {
    KernelPtr k = make_renewal(QRule{});  // constant 1/2
    SimConfig cfg{14, 1, 60000, 1000, 1e-12};
    auto freq = empirical_cylinder_distribution(*k, PastSpec::constant(0), 1, cfg);
    double se = 3 * std::sqrt(0.25 / 60000.0);
    CHECK(std::abs(freq.at(Word{1}) - 0.5) < 4 * se);
}
