#pragma once

#include <cstdint>
#include <vector>

#include "gchain/word.hpp"

namespace gchain {

// Square 0/1 matrix under boolean algebra (1+1 = 1), rows bit-packed.
// Rows and columns of the word-indexed matrices follow word_index order.
class BoolMatrix {
public:
    explicit BoolMatrix(uint64_t dim);
    static BoolMatrix identity(uint64_t dim);

    uint64_t dim() const { return dim_; }

    bool get(uint64_t i, uint64_t j) const {
        return (rows_[i * stride_ + (j >> 6)] >> (j & 63)) & 1u;
    }
    void set(uint64_t i, uint64_t j, bool v) {
        uint64_t& cell = rows_[i * stride_ + (j >> 6)];
        uint64_t bit = 1ull << (j & 63);
        if (v)
            cell |= bit;
        else
            cell &= ~bit;
    }

    // this[i][*] |= other[k][*]
    void or_row_into(uint64_t k, const BoolMatrix& other, uint64_t i);

    bool row_all_ones_on(uint64_t i, const std::vector<uint64_t>& cols) const;

    BoolMatrix multiply(const BoolMatrix& rhs) const;

    bool operator==(const BoolMatrix& o) const { return dim_ == o.dim_ && rows_ == o.rows_; }
    bool operator!=(const BoolMatrix& o) const { return !(*this == o); }

    // Entrywise comparison.
    bool dominated_by(const BoolMatrix& o) const;

    std::vector<uint64_t> out_neighbors(uint64_t i) const;

    std::string row_bits(uint64_t i) const;  // "0101..." for reports

private:
    uint64_t dim_;
    uint64_t stride_;
    std::vector<uint64_t> rows_;
};

// m^n under boolean product, by repeated squaring.
BoolMatrix bool_power(const BoolMatrix& m, uint64_t n);

// Strongly connected components of the directed graph {(i,j) : m(i,j) = 1},
// returned as the component index of each vertex plus the component list.
struct SccResult {
    std::vector<uint64_t> component_of;
    std::vector<std::vector<uint64_t>> components;
};
SccResult strongly_connected_components(const BoolMatrix& m);

// Components with no edge leaving them (candidate closed classes).
std::vector<std::vector<uint64_t>> sink_components(const BoolMatrix& m);

// gcd of cycle lengths of a strongly connected vertex set (1 = aperiodic).
uint64_t class_period(const BoolMatrix& m, const std::vector<uint64_t>& cls);

}  // namespace gchain
