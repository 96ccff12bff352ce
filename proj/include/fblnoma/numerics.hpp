#pragma once

// Scalar root finding and 1-D maximization used by the solvers.

#include <cmath>

namespace fblnoma {

struct BisectionResult {
    double lo = 0.0;    // fn(lo) keeps the sign of fn at the left end
    double hi = 0.0;    // fn(hi) keeps the sign of fn at the right end
    int iterations = 0;
    double root() const { return 0.5 * (lo + hi); }
};

/// Bisection on [lo, hi] for a function with a sign change. Stops when the
/// bracket is narrower than `tol` or when the midpoint can no longer be
/// represented between the ends.
template <typename Fn>
BisectionResult bisect(Fn&& fn, double lo, double hi, double tol, int max_iter) {
    const bool left_positive = fn(lo) > 0.0;
    BisectionResult res{lo, hi, 0};
    while (res.iterations < max_iter && (res.hi - res.lo) > tol) {
        const double mid = 0.5 * (res.lo + res.hi);
        if (mid <= res.lo || mid >= res.hi) break;
        ++res.iterations;
        if ((fn(mid) > 0.0) == left_positive) {
            res.lo = mid;
        } else {
            res.hi = mid;
        }
    }
    return res;
}

struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
};

/// Golden-section maximization on [lo, hi]. Exact for unimodal functions.
template <typename Fn>
GoldenResult golden_section_max(Fn&& fn, double lo, double hi, double tol, int max_iter) {
    constexpr double inv_phi = 0.6180339887498948482;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fn(c);
    double fd = fn(d);
    int it = 0;
    while ((b - a) > tol && it < max_iter) {
        ++it;
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
        }
    }
    return fc >= fd ? GoldenResult{c, fc, it} : GoldenResult{d, fd, it};
}

}  // namespace fblnoma
