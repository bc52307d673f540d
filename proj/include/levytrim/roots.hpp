#pragma once

// Right-continuous inverse of a nonincreasing function by bracketing
// bisection: inv(v) = inf{ y > 0 : f(y) <= v }.

#include <cmath>

#include "levytrim/common.hpp"

namespace levytrim {

struct BisectOptions {
    double rel_tol = 1e-12;
    int max_iter = 200;
    double seed = 1.0;  // initial probe point
};

template <typename F>
double decreasing_inverse(const F& f, double v, const BisectOptions& opts = {}) {
    require_positive(v, "inverse argument v");
    double lo = opts.seed;
    double hi = opts.seed;
    // Grow hi until f(hi) <= v. Tails vanish at infinity, so this terminates.
    int guard = 0;
    while (f(hi) > v) {
        hi *= 8.0;
        if (++guard > 400 || hi > 1e300) {
            throw numeric_error("decreasing_inverse: no upper bracket found");
        }
    }
    // Shrink lo until f(lo) > v; if f stays <= v all the way down, inf is 0.
    guard = 0;
    while (f(lo) <= v) {
        lo /= 8.0;
        if (++guard > 400 || lo < 1e-300) return 0.0;
    }
    // Invariant from here: f(lo) > v >= f(hi), lo <= hi.
    for (int i = 0; i < opts.max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) <= v) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo <= opts.rel_tol * std::max(1.0, hi)) break;
    }
    return hi;  // f(hi) <= v is maintained throughout
}

}  // namespace levytrim
