#include "gchain/bool_matrix.hpp"

#include <algorithm>
#include <numeric>

namespace gchain {

BoolMatrix::BoolMatrix(uint64_t dim)
    : dim_(dim), stride_((dim + 63) / 64), rows_(dim * stride_, 0) {}

BoolMatrix BoolMatrix::identity(uint64_t dim) {
    BoolMatrix m(dim);
    for (uint64_t i = 0; i < dim; ++i) m.set(i, i, true);
    return m;
}

void BoolMatrix::or_row_into(uint64_t k, const BoolMatrix& other, uint64_t i) {
    const uint64_t* src = &other.rows_[k * stride_];
    uint64_t* dst = &rows_[i * stride_];
    for (uint64_t w = 0; w < stride_; ++w) dst[w] |= src[w];
}

bool BoolMatrix::row_all_ones_on(uint64_t i, const std::vector<uint64_t>& cols) const {
    for (uint64_t j : cols)
        if (!get(i, j)) return false;
    return true;
}

BoolMatrix BoolMatrix::multiply(const BoolMatrix& rhs) const {
    BoolMatrix out(dim_);
    for (uint64_t i = 0; i < dim_; ++i) {
        const uint64_t* row = &rows_[i * stride_];
        for (uint64_t w = 0; w < stride_; ++w) {
            uint64_t bits = row[w];
            while (bits) {
                uint64_t k = (w << 6) + static_cast<uint64_t>(__builtin_ctzll(bits));
                bits &= bits - 1;
                out.or_row_into(k, rhs, i);
            }
        }
    }
    return out;
}

bool BoolMatrix::dominated_by(const BoolMatrix& o) const {
    if (dim_ != o.dim_) return false;
    for (size_t w = 0; w < rows_.size(); ++w)
        if (rows_[w] & ~o.rows_[w]) return false;
    return true;
}

std::vector<uint64_t> BoolMatrix::out_neighbors(uint64_t i) const {
    std::vector<uint64_t> out;
    const uint64_t* row = &rows_[i * stride_];
    for (uint64_t w = 0; w < stride_; ++w) {
        uint64_t bits = row[w];
        while (bits) {
            out.push_back((w << 6) + static_cast<uint64_t>(__builtin_ctzll(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

std::string BoolMatrix::row_bits(uint64_t i) const {
    std::string s(dim_, '0');
    for (uint64_t j = 0; j < dim_; ++j)
        if (get(i, j)) s[j] = '1';
    return s;
}

BoolMatrix bool_power(const BoolMatrix& m, uint64_t n) {
    if (n == 0) return BoolMatrix::identity(m.dim());
    BoolMatrix base = m;
    BoolMatrix acc = BoolMatrix::identity(m.dim());
    bool acc_used = false;
    while (n > 0) {
        if (n & 1) {
            acc = acc_used ? acc.multiply(base) : base;
            acc_used = true;
        }
        n >>= 1;
        if (n) base = base.multiply(base);
    }
    return acc;
}

SccResult strongly_connected_components(const BoolMatrix& m) {
    // Iterative Tarjan.
    uint64_t n = m.dim();
    SccResult res;
    res.component_of.assign(n, UINT64_MAX);
    std::vector<int64_t> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<uint64_t> stack;
    int64_t counter = 0;

    struct Frame {
        uint64_t v;
        std::vector<uint64_t> nbrs;
        size_t next;
    };

    for (uint64_t start = 0; start < n; ++start) {
        if (index[start] != -1) continue;
        std::vector<Frame> call;
        call.push_back({start, m.out_neighbors(start), 0});
        index[start] = low[start] = counter++;
        stack.push_back(start);
        on_stack[start] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < f.nbrs.size()) {
                uint64_t w = f.nbrs[f.next++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, m.out_neighbors(w), 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                uint64_t v = f.v;
                if (low[v] == index[v]) {
                    std::vector<uint64_t> comp;
                    while (true) {
                        uint64_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        res.component_of[w] = res.components.size();
                        comp.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    res.components.push_back(std::move(comp));
                }
                call.pop_back();
                if (!call.empty()) {
                    uint64_t parent = call.back().v;
                    low[parent] = std::min(low[parent], low[v]);
                }
            }
        }
    }
    return res;
}

std::vector<std::vector<uint64_t>> sink_components(const BoolMatrix& m) {
    SccResult scc = strongly_connected_components(m);
    std::vector<bool> has_exit(scc.components.size(), false);
    for (uint64_t i = 0; i < m.dim(); ++i)
        for (uint64_t j : m.out_neighbors(i))
            if (scc.component_of[i] != scc.component_of[j]) has_exit[scc.component_of[i]] = true;
    std::vector<std::vector<uint64_t>> sinks;
    for (size_t c = 0; c < scc.components.size(); ++c)
        if (!has_exit[c]) sinks.push_back(scc.components[c]);
    return sinks;
}

uint64_t class_period(const BoolMatrix& m, const std::vector<uint64_t>& cls) {
    if (cls.empty()) return 0;
    std::vector<int64_t> level(m.dim(), -1);
    std::vector<bool> in_cls(m.dim(), false);
    for (uint64_t v : cls) in_cls[v] = true;
    std::vector<uint64_t> queue{cls[0]};
    level[cls[0]] = 0;
    uint64_t g = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint64_t v = queue[qi];
        for (uint64_t w : m.out_neighbors(v)) {
            if (!in_cls[w]) continue;
            if (level[w] == -1) {
                level[w] = level[v] + 1;
                queue.push_back(w);
            } else {
                int64_t d = level[v] + 1 - level[w];
                g = std::gcd(g, static_cast<uint64_t>(d < 0 ? -d : d));
            }
        }
    }
    return g == 0 ? 0 : g;
}

}  // namespace gchain
