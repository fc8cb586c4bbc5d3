#pragma once

#include <cstdint>
#include <vector>

#include "gchain/past.hpp"

namespace gchain {

// A realized past: an eventually periodic base extended by observed symbols.
// Gives O(1) access to recent coordinates without re-canonicalizing on every
// step, which keeps long simulations linear.
class History {
public:
    explicit History(PastSpec base) : base_(std::move(base)) {}

    Symbol at(int64_t i) const {  // i <= 0, 0 = most recent
        int64_t from_right = -i;
        int64_t n = static_cast<int64_t>(appended_.size());
        if (from_right < n) return appended_[static_cast<size_t>(n - 1 - from_right)];
        return base_.at(i + n);
    }

    void push(Symbol a) { appended_.push_back(a); }

    const PastSpec& base() const { return base_; }
    size_t grown() const { return appended_.size(); }
    const std::vector<Symbol>& appended() const { return appended_; }

    // Canonicalized full sequence (linear in the appended length).
    PastSpec as_past() const {
        if (appended_.empty()) return base_;
        return base_.append(Word(appended_));
    }

    Word last(size_t k) const {
        std::vector<Symbol> s(k);
        for (size_t i = 0; i < k; ++i)
            s[i] = at(-static_cast<int64_t>(k - 1 - i));
        return Word(std::move(s));
    }

    bool ends_with(const Word& w) const {
        for (size_t i = 0; i < w.size(); ++i)
            if (at(-static_cast<int64_t>(w.size() - 1 - i)) != w[i]) return false;
        return true;
    }

private:
    PastSpec base_;
    std::vector<Symbol> appended_;
};

}  // namespace gchain
