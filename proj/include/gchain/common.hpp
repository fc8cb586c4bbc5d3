#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gchain {

// Symbols are nonnegative integer indices into the alphabet. User-facing
// labels (e.g. {-1,+1}) map bijectively onto these via Alphabet::labels.
using Symbol = int32_t;

struct Error : std::runtime_error {
    enum class Code {
        UnknownSymbol,
        TolUnachievable,
        BudgetExceeded,
        AlphabetInfinite,
        NoAnalyticBound,
        InconsistentBounds,
        IncompatibleSupports,
        BadRow,
        BadTotal,
        BadQ,
        BadBetas,
        SinkVertex,
        BadInput,
    };
    Code code;
    Error(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline Error unknown_symbol(Symbol a) {
    return Error(Error::Code::UnknownSymbol, "unknown symbol index " + std::to_string(a));
}

// Finite alphabets have a fixed size; countable ones enumerate symbols in
// increasing index until the kernel certifies the remaining row mass is
// below truncation_mass.
struct Alphabet {
    bool finite = true;
    int size = 0;                     // valid when finite
    double truncation_mass = 1e-12;   // valid when countable
    std::vector<long> labels;         // finite only; empty means identity

    static Alphabet make_finite(int n) {
        Alphabet a;
        a.finite = true;
        a.size = n;
        return a;
    }
    static Alphabet make_finite(std::vector<long> labs) {
        Alphabet a;
        a.finite = true;
        a.size = static_cast<int>(labs.size());
        a.labels = std::move(labs);
        return a;
    }
    static Alphabet make_countable(double trunc = 1e-12) {
        Alphabet a;
        a.finite = false;
        a.size = -1;
        a.truncation_mass = trunc;
        return a;
    }

    bool contains(Symbol s) const { return s >= 0 && (!finite || s < size); }

    long label_of(Symbol s) const {
        if (finite && !labels.empty()) return labels.at(static_cast<size_t>(s));
        return s;
    }
    // Returns -1 if no symbol carries this label.
    Symbol symbol_of(long label) const {
        if (!finite || labels.empty())
            return (label >= 0 && (!finite || label < size)) ? static_cast<Symbol>(label) : -1;
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return static_cast<Symbol>(i);
        return -1;
    }
};

}  // namespace gchain
