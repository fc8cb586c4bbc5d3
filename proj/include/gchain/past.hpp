#pragma once

#include <cstdint>
#include <string>

#include "gchain/word.hpp"

namespace gchain {

/*
 * An eventually periodic left-infinite sequence: ...tail tail transient,
 * with the transient's last symbol sitting at coordinate 0.
 *
 * Instances are kept in canonical form (primitive tail period, minimal
 * transient after absorbing tail repetitions), so two specs denoting the
 * same sequence compare equal.
 */
class PastSpec {
public:
    // tail must be nonempty.
    PastSpec(Word transient, Word tail);

    static PastSpec constant(Symbol a) { return PastSpec(Word{}, Word{a}); }

    const Word& transient() const { return transient_; }
    const Word& tail() const { return tail_; }

    // Symbol at coordinate i <= 0 (0 = most recent).
    Symbol at(int64_t i) const;

    // The sequence followed by w (w's last symbol becomes coordinate 0).
    PastSpec append(const Word& w) const;
    PastSpec append(Symbol a) const { return append(Word{a}); }

    // The sequence with its last n symbols removed.
    PastSpec drop(size_t n) const;

    // Last k symbols as a word (oldest first).
    Word last(size_t k) const;

    bool ends_with(const Word& w) const;

    // True when every symbol of the sequence equals a.
    bool is_constant(Symbol a) const;

    bool operator==(const PastSpec& o) const {
        return transient_ == o.transient_ && tail_ == o.tail_;
    }
    bool operator!=(const PastSpec& o) const { return !(*this == o); }
    bool operator<(const PastSpec& o) const {
        if (tail_ != o.tail_) return tail_ < o.tail_;
        return transient_ < o.transient_;
    }

    std::string to_string(const Alphabet& alph) const;

private:
    void canonicalize();

    Word transient_;
    Word tail_;
};

}  // namespace gchain
