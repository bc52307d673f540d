#pragma once

// Adaptive Simpson quadrature over real or complex integrands, with caller
// supplied breakpoints so that kinks and step discontinuities land on panel
// boundaries.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "levytrim/common.hpp"

namespace levytrim {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 48;
    // Hard cap on subdivisions across the whole call.
    long max_intervals = 1000000;
};

namespace detail {

template <typename T>
double magnitude(T v) {
    if constexpr (std::is_same_v<T, std::complex<double>>) {
        return std::abs(v);
    } else {
        return std::fabs(v);
    }
}

template <typename F, typename T>
T simpson_rec(const F& f, double a, double fa_x, double b, T fa, T fm, T fb, T whole,
              double tol, int depth, const QuadratureOptions& opts, long& budget) {
    (void)fa_x;
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f(lm);
    const T frm = f(rm);
    const double h = b - a;
    const T left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const T right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    budget -= 2;
    if (depth <= 0 || budget < 0) {
        if (detail::magnitude(delta) > 64.0 * std::max(opts.abs_tol, tol)) {
            throw numeric_error("quadrature failed to converge on [" + std::to_string(a) +
                                ", " + std::to_string(b) + "]");
        }
        return left + right + delta / 15.0;
    }
    if (detail::magnitude(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, opts, budget) +
           simpson_rec(f, m, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, opts, budget);
}

template <typename F, typename T>
T simpson_panel(const F& f, double a, double b, const QuadratureOptions& opts, long& budget) {
    const double m = 0.5 * (a + b);
    const T fa = f(a);
    const T fm = f(m);
    const T fb = f(b);
    budget -= 3;
    const T whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    const double tol = std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(whole));
    return simpson_rec(f, a, a, b, fa, fm, fb, whole, tol, opts.max_depth, opts, budget);
}

}  // namespace detail

// Integrate f over [a,b]; `breakpoints` inside (a,b) split the integration
// into panels so the integrand only needs to be smooth panel-by-panel.
template <typename T = double, typename F>
T integrate(const F& f, double a, double b, std::vector<double> breakpoints = {},
            const QuadratureOptions& opts = {}) {
    if (!(b > a)) return T{};
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    T total{};
    long budget = opts.max_intervals;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double lo = breakpoints[i];
        const double hi = breakpoints[i + 1];
        if (hi <= a || lo >= b) continue;
        const double pa = std::max(lo, a);
        const double pb = std::min(hi, b);
        if (pb - pa <= 0.0) continue;
        total += detail::simpson_panel<F, T>(f, pa, pb, opts, budget);
    }
    return total;
}

// Integral of f over (0, x] where f may blow up like y^{-p}, p < 1, at 0.
// Integrates on a log axis from below, extending left until the panel
// contribution is negligible.
template <typename F>
double integrate_from_zero(const F& f, double x, const std::vector<double>& breakpoints = {},
                           const QuadratureOptions& opts = {}) {
    if (!(x > 0.0)) return 0.0;
    auto g = [&](double s) {
        const double y = std::exp(s);
        return f(y) * y;  // dy = y ds
    };
    const double s_hi = std::log(x);
    std::vector<double> bps;
    for (double b : breakpoints) {
        if (b > 0.0 && b < x) bps.push_back(std::log(b));
    }
    double total = 0.0;
    double hi = s_hi;
    double width = 8.0;
    for (int block = 0; block < 64; ++block) {
        const double lo = hi - width;
        std::vector<double> local;
        for (double b : bps) {
            if (b > lo && b < hi) local.push_back(b);
        }
        const double piece = integrate(g, lo, hi, local, opts);
        total += piece;
        if (block >= 2 && std::fabs(piece) <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(total))) {
            break;
        }
        hi = lo;
        width *= 1.5;
    }
    return total;
}

}  // namespace levytrim
