#include "gchain/past.hpp"

#include <algorithm>

namespace gchain {

namespace {

Word rotate_left(const Word& w, size_t r) {
    size_t n = w.size();
    r %= n;
    std::vector<Symbol> s;
    s.reserve(n);
    for (size_t i = 0; i < n; ++i) s.push_back(w[(i + r) % n]);
    return Word(std::move(s));
}

// Smallest d dividing |w| such that w is a repetition of its first d symbols.
size_t primitive_period(const Word& w) {
    size_t n = w.size();
    for (size_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        bool ok = true;
        for (size_t i = d; i < n && ok; ++i)
            if (w[i] != w[i % d]) ok = false;
        if (ok) return d;
    }
    return n;
}

}  // namespace

PastSpec::PastSpec(Word transient, Word tail)
    : transient_(std::move(transient)), tail_(std::move(tail)) {
    if (tail_.empty()) throw Error(Error::Code::BadInput, "PastSpec tail must be nonempty");
    canonicalize();
}

void PastSpec::canonicalize() {
    size_t d = primitive_period(tail_);
    if (d < tail_.size()) tail_ = tail_.prefix(d);
    // Absorbing the transient's first symbol into the periodic part is
    // possible exactly when it extends the periodicity by one step.
    while (!transient_.empty() && transient_.front() == tail_.front()) {
        transient_ = transient_.drop_front(1);
        tail_ = rotate_left(tail_, 1);
    }
}

Symbol PastSpec::at(int64_t i) const {
    int64_t from_right = -i;  // 0-based distance from coordinate 0
    int64_t m = static_cast<int64_t>(transient_.size());
    if (from_right < m) return transient_[static_cast<size_t>(m - 1 - from_right)];
    int64_t into_tail = from_right - m;
    int64_t p = static_cast<int64_t>(tail_.size());
    return tail_[static_cast<size_t>(p - 1 - (into_tail % p))];
}

PastSpec PastSpec::append(const Word& w) const {
    return PastSpec(transient_.concat(w), tail_);
}

PastSpec PastSpec::drop(size_t n) const {
    if (n <= transient_.size())
        return PastSpec(transient_.prefix(transient_.size() - n), tail_);
    size_t k = n - transient_.size();
    size_t p = tail_.size();
    // Removing k symbols from the right of ...tail tail shifts the alignment.
    return PastSpec(Word{}, rotate_left(tail_, p - (k % p)));
}

Word PastSpec::last(size_t k) const {
    std::vector<Symbol> s(k);
    for (size_t i = 0; i < k; ++i)
        s[i] = at(-static_cast<int64_t>(k - 1 - i));
    return Word(std::move(s));
}

bool PastSpec::ends_with(const Word& w) const {
    for (size_t i = 0; i < w.size(); ++i)
        if (at(-static_cast<int64_t>(w.size() - 1 - i)) != w[i]) return false;
    return true;
}

bool PastSpec::is_constant(Symbol a) const {
    for (Symbol s : transient_.symbols())
        if (s != a) return false;
    for (Symbol s : tail_.symbols())
        if (s != a) return false;
    return true;
}

std::string PastSpec::to_string(const Alphabet& alph) const {
    std::string out = tail_.to_string(alph) + "^inf";
    if (!transient_.empty()) out += " " + transient_.to_string(alph);
    return out;
}

}  // namespace gchain
