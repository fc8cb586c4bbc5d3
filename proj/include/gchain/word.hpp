#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gchain/common.hpp"

namespace gchain {

// A finite string of symbols. The empty word is the neutral element of
// concatenation.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Symbol> syms) : syms_(std::move(syms)) {}
    Word(std::initializer_list<Symbol> syms) : syms_(syms) {}

    static Word repeated(Symbol a, size_t n) { return Word(std::vector<Symbol>(n, a)); }

    size_t size() const { return syms_.size(); }
    bool empty() const { return syms_.empty(); }
    Symbol operator[](size_t i) const { return syms_[i]; }
    Symbol front() const { return syms_.front(); }
    Symbol back() const { return syms_.back(); }
    const std::vector<Symbol>& symbols() const { return syms_; }

    Word concat(const Word& other) const {
        std::vector<Symbol> s = syms_;
        s.insert(s.end(), other.syms_.begin(), other.syms_.end());
        return Word(std::move(s));
    }
    Word append(Symbol a) const {
        std::vector<Symbol> s = syms_;
        s.push_back(a);
        return Word(std::move(s));
    }
    Word prefix(size_t n) const {
        return Word(std::vector<Symbol>(syms_.begin(), syms_.begin() + std::min(n, size())));
    }
    Word suffix(size_t n) const {
        size_t k = std::min(n, size());
        return Word(std::vector<Symbol>(syms_.end() - k, syms_.end()));
    }
    Word drop_front(size_t n) const {
        size_t k = std::min(n, size());
        return Word(std::vector<Symbol>(syms_.begin() + k, syms_.end()));
    }

    bool ends_with(const Word& w) const {
        if (w.size() > size()) return false;
        for (size_t i = 0; i < w.size(); ++i)
            if (syms_[size() - w.size() + i] != w[i]) return false;
        return true;
    }
    bool contains_substring(const Word& w) const {
        if (w.empty()) return true;
        if (w.size() > size()) return false;
        for (size_t start = 0; start + w.size() <= size(); ++start) {
            bool ok = true;
            for (size_t i = 0; i < w.size(); ++i)
                if (syms_[start + i] != w[i]) { ok = false; break; }
            if (ok) return true;
        }
        return false;
    }

    bool operator==(const Word& o) const { return syms_ == o.syms_; }
    bool operator!=(const Word& o) const { return !(*this == o); }
    bool operator<(const Word& o) const { return syms_ < o.syms_; }

    std::string to_string(const Alphabet& alph) const {
        // Single-character labels are packed; anything else is comma separated.
        bool compact = true;
        for (Symbol s : syms_) {
            long lab = alph.label_of(s);
            if (lab < 0 || lab > 9) { compact = false; break; }
        }
        std::string out;
        for (size_t i = 0; i < syms_.size(); ++i) {
            if (!compact && i > 0) out += ',';
            out += std::to_string(alph.label_of(syms_[i]));
        }
        return out;
    }

private:
    std::vector<Symbol> syms_;
};

// Words of a fixed length K index matrix rows/columns. The index reads the
// word from its most recent symbol backwards, so for binary K = 2 the order
// is 00, 10, 01, 11.
inline uint64_t word_index(const Word& w, int alphabet_size) {
    uint64_t idx = 0;
    uint64_t mult = 1;
    for (size_t i = 0; i < w.size(); ++i) {
        idx += static_cast<uint64_t>(w[i]) * mult;
        mult *= static_cast<uint64_t>(alphabet_size);
    }
    return idx;
}

inline Word word_at_index(uint64_t idx, int length, int alphabet_size) {
    std::vector<Symbol> syms(static_cast<size_t>(length));
    for (int i = 0; i < length; ++i) {
        syms[static_cast<size_t>(i)] = static_cast<Symbol>(idx % static_cast<uint64_t>(alphabet_size));
        idx /= static_cast<uint64_t>(alphabet_size);
    }
    return Word(std::move(syms));
}

struct WordHash {
    size_t operator()(const Word& w) const {
        size_t h = 1469598103934665603ull;
        for (Symbol s : w.symbols()) {
            h ^= static_cast<size_t>(s) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace gchain
