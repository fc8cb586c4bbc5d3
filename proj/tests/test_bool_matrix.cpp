#include <doctest.h>

#include "gchain/bool_matrix.hpp"
#include "gchain/rng.hpp"

using namespace gchain;

namespace {

BoolMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    BoolMatrix m(rows.size());
    for (uint64_t i = 0; i < rows.size(); ++i)
        for (uint64_t j = 0; j < rows.size(); ++j)
            if (rows[i][j]) m.set(i, j, true);
    return m;
}

// O(d^3) reference product, independent of the bit-packed path.
BoolMatrix naive_multiply(const BoolMatrix& a, const BoolMatrix& b) {
    BoolMatrix out(a.dim());
    for (uint64_t i = 0; i < a.dim(); ++i)
        for (uint64_t j = 0; j < a.dim(); ++j) {
            bool v = false;
            for (uint64_t k = 0; k < a.dim() && !v; ++k) v = a.get(i, k) && b.get(k, j);
            out.set(i, j, v);
        }
    return out;
}

BoolMatrix random_matrix(Rng& rng, uint64_t dim, double density) {
    BoolMatrix m(dim);
    for (uint64_t i = 0; i < dim; ++i)
        for (uint64_t j = 0; j < dim; ++j)
            if (rng.next_double() < density) m.set(i, j, true);
    return m;
}

// Lower matrix of the sparse-chain pair in word order 00, 10, 01, 11.
BoolMatrix sparse_under() {
    return from_rows({{0, 0, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 1, 0, 1}});
}

}  // namespace

TEST_CASE("identity is fixed by boolean powers") {
    BoolMatrix id = BoolMatrix::identity(5);
    CHECK(bool_power(id, 1) == id);
    CHECK(bool_power(id, 9) == id);
}

TEST_CASE("first power is the matrix itself") {
    Rng rng(4, 0);
    BoolMatrix m = random_matrix(rng, 9, 0.3);
    CHECK(bool_power(m, 1) == m);
}

TEST_CASE("fourth power of the sparse lower matrix saturates the class") {
    BoolMatrix m4 = bool_power(sparse_under(), 4);
    std::vector<uint64_t> cls = {1, 2, 3};  // 10, 01, 11
    for (uint64_t i : cls) {
        CHECK(m4.row_all_ones_on(i, cls));
        CHECK(!m4.get(i, 0));
    }
}

TEST_CASE("repeated squaring equals the naive iterated product") {
    Rng rng(12, 0);
    for (int trial = 0; trial < 12; ++trial) {
        BoolMatrix m = random_matrix(rng, 16, 0.15 + 0.05 * (trial % 4));
        BoolMatrix naive = m;
        for (int n = 1; n <= 16; ++n) {
            CHECK(bool_power(m, static_cast<uint64_t>(n)) == naive);
            naive = naive_multiply(naive, m);
        }
    }
}

TEST_CASE("strongly connected components of a two-block graph") {
    // 0 <-> 1 feeding 2 <-> 3, plus an isolated vertex 4 with a self-loop
    BoolMatrix m = from_rows({{0, 1, 0, 0, 0},
                              {1, 0, 1, 0, 0},
                              {0, 0, 0, 1, 0},
                              {0, 0, 1, 0, 0},
                              {0, 0, 0, 0, 1}});
    SccResult scc = strongly_connected_components(m);
    CHECK(scc.components.size() == 3);
    CHECK(scc.component_of[0] == scc.component_of[1]);
    CHECK(scc.component_of[2] == scc.component_of[3]);
    CHECK(scc.component_of[0] != scc.component_of[2]);
    auto sinks = sink_components(m);
    CHECK(sinks.size() == 2);  // {2,3} and {4}
}

TEST_CASE("class period distinguishes cycles from aperiodic classes") {
    BoolMatrix cycle3 = from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    std::vector<uint64_t> all3 = {0, 1, 2};
    CHECK(class_period(cycle3, all3) == 3);

    BoolMatrix mixed = from_rows({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}});  // 3-cycle + 2-cycle
    CHECK(class_period(mixed, all3) == 1);

    std::vector<uint64_t> cls = {1, 2, 3};
    CHECK(class_period(sparse_under(), cls) == 1);
}

TEST_CASE("power monotonicity on planted closed classes") {
    // Once a row saturates the class, it stays saturated for larger powers.
    Rng rng(77, 0);
    for (int trial = 0; trial < 100; ++trial) {
        uint64_t dim = 6 + rng.next_below(5);
        uint64_t cls_size = 2 + rng.next_below(dim - 2);
        std::vector<uint64_t> cls(cls_size);
        for (uint64_t i = 0; i < cls_size; ++i) cls[i] = i;

        BoolMatrix m = random_matrix(rng, dim, 0.25);
        // plant: class rows stay inside the class, with a covering cycle,
        // a self-loop for aperiodicity, and random extra in-class edges
        for (uint64_t i : cls)
            for (uint64_t j = 0; j < dim; ++j)
                if (j >= cls_size) m.set(i, j, false);
        for (uint64_t i = 0; i < cls_size; ++i) m.set(i, (i + 1) % cls_size, true);
        m.set(0, 0, true);

        // find the first exponent whose row 0 saturates the class
        BoolMatrix p = m;
        uint64_t first = 0;
        for (uint64_t n = 1; n <= 2 * dim * dim; ++n) {
            if (n > 1) p = p.multiply(m);
            if (p.row_all_ones_on(0, cls)) {
                first = n;
                break;
            }
        }
        REQUIRE(first > 0);
        for (uint64_t extra = 1; extra <= 5; ++extra) {
            p = p.multiply(m);
            CHECK(p.row_all_ones_on(0, cls));
        }
    }
}

TEST_CASE("entrywise domination") {
    Rng rng(5, 0);
    BoolMatrix m = random_matrix(rng, 10, 0.4);
    CHECK(m.dominated_by(m));
    BoolMatrix bigger = m;
    bigger.set(3, 7, true);
    if (!m.get(3, 7)) CHECK(!bigger.dominated_by(m));
    CHECK(m.dominated_by(bigger));
}
