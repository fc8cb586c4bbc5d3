#pragma once

#include <algorithm>
#include <cmath>

#include "gchain/common.hpp"

namespace gchain {

// Closed interval certified to contain a real quantity.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {}
    static Interval point(double v) { return {v, v}; }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool is_point() const { return lo == hi; }

    Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
    Interval& operator+=(const Interval& o) {
        lo += o.lo;
        hi += o.hi;
        return *this;
    }
    Interval operator-(const Interval& o) const { return {lo - o.hi, hi - o.lo}; }
    // Valid for intervals of nonnegative quantities.
    Interval operator*(const Interval& o) const { return {lo * o.lo, hi * o.hi}; }

    Interval squared() const {
        double alo = std::abs(lo), ahi = std::abs(hi);
        double m = std::max(alo, ahi);
        if (lo <= 0.0 && hi >= 0.0) return {0.0, m * m};
        double s = std::min(alo, ahi);
        return {s * s, m * m};
    }
    Interval sqrt() const { return {std::sqrt(std::max(0.0, lo)), std::sqrt(std::max(0.0, hi))}; }
};

// Interval constrained to [0,1]; exact probabilities are points (lo == hi).
struct ProbInterval : Interval {
    ProbInterval() = default;
    ProbInterval(double l, double h) : Interval(std::max(0.0, l), std::min(1.0, std::max(l, h))) {}
    static ProbInterval point(double v) { return ProbInterval(v, v); }
    static ProbInterval zero() { return ProbInterval(0.0, 0.0); }
    static ProbInterval one() { return ProbInterval(1.0, 1.0); }
    bool is_zero() const { return lo == 0.0 && hi == 0.0; }
};

}  // namespace gchain
