#pragma once

// Continuity removal: replace each jump d by d + sign(d) u d^2 with an
// independent Uniform(0,1) mark u. The transformed measure has continuous
// tails given by a one-dimensional integral over the mark, evaluated here by
// adaptive quadrature with atom preimages as breakpoints.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "levytrim/common.hpp"
#include "levytrim/jump_sampler.hpp"
#include "levytrim/levy_measure.hpp"
#include "levytrim/quadrature.hpp"
#include "levytrim/roots.hpp"
#include "levytrim/tail_function.hpp"

namespace levytrim {

namespace detail_smooth {

// Preimage of level x under d -> d + u d^2: the jump size whose marked image
// reaches x. Algebraically (sqrt(1+4ux)-1)/(2u), written in a form stable as
// u -> 0 where it tends to x.
inline double mark_preimage(double u, double x) {
    return 2.0 * x / (std::sqrt(1.0 + 4.0 * u * x) + 1.0);
}

}  // namespace detail_smooth

// One side of the smoothed measure. Exact values come from quadrature and are
// memoized; samplers use a lazily built log-log interpolation table.
class SmoothedSideKernel final : public ContinuousTailKernel {
  public:
    SmoothedSideKernel(TailFunction base_side, double base_support_end)
        : base_(std::move(base_side)), base_end_(base_support_end) {
        base_.collect_atoms(0.0, kInf, atoms_);
    }

    double value(double x) const override {
        require_positive(x, "smoothed tail argument x");
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = memo_.find(x);
            if (it != memo_.end()) return it->second;
        }
        const double v = integrate_marks(x);
        std::lock_guard<std::mutex> lock(mutex_);
        memo_.emplace(x, v);
        return v;
    }

    double fast_value(double x) const override {
        ensure_table();
        if (table_x_.empty() || x < table_x_.front() || x > table_x_.back()) return value(x);
        return std::exp(interp(table_logx_, table_logt_, std::log(x)));
    }

    double fast_inverse(double v) const override {
        ensure_table();
        if (table_x_.empty()) return exact_inverse(v);
        // table_t_ is strictly decreasing in x.
        if (v >= table_t_.front()) return exact_inverse(v);
        if (v <= table_t_.back()) {
            if (std::isfinite(support_end())) return exact_inverse(v);
            // Extrapolate along the last power-like segment.
            const std::size_t n = table_logx_.size();
            const double slope = (table_logx_[n - 1] - table_logx_[n - 2]) /
                                 (table_logt_[n - 1] - table_logt_[n - 2]);
            return std::exp(table_logx_[n - 1] + slope * (std::log(v) - table_logt_[n - 1]));
        }
        const double lv = std::log(v);
        // Binary search over decreasing table_logt_.
        std::size_t lo = 0, hi = table_logt_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (table_logt_[mid] > lv) lo = mid; else hi = mid;
        }
        const double denom = table_logt_[hi] - table_logt_[lo];
        if (denom == 0.0) return table_x_[lo];
        const double w = (lv - table_logt_[lo]) / denom;
        return std::exp(table_logx_[lo] + w * (table_logx_[hi] - table_logx_[lo]));
    }

    double value_at_zero() const override { return base_.value_at_zero(); }

    double support_end() const override {
        if (!std::isfinite(base_end_)) return kInf;
        return base_end_ + base_end_ * base_end_;  // largest mark inflation
    }

    double integral_tail(double a, double b) const override {
        ensure_table();
        if (!(b > a)) return 0.0;
        QuadratureOptions opts;
        opts.rel_tol = 1e-7;
        opts.abs_tol = 1e-12;
        return integrate([this](double y) { return fast_value(y); }, a, b, {}, opts);
    }

    double power_integral(int k, double x0) const override {
        ensure_table();
        QuadratureOptions opts;
        opts.rel_tol = 1e-7;
        opts.abs_tol = 1e-12;
        return integrate_from_zero(
            [this, k](double y) { return std::pow(y, k) * fast_value(y); }, x0, {}, opts);
    }

  private:
    double integrate_marks(double x) const {
        if (base_.is_zero()) return 0.0;
        const double end = support_end();
        if (std::isfinite(end) && x >= end) return 0.0;
        std::vector<double> bps;
        for (const auto& [loc, mass] : atoms_) {
            (void)mass;
            // The integrand steps where loc + u loc^2 crosses x.
            if (loc < x && x <= loc + loc * loc) bps.push_back((x - loc) / (loc * loc));
        }
        return integrate(
            [&](double u) { return base_.value(detail_smooth::mark_preimage(u, x)); }, 0.0, 1.0,
            std::move(bps));
    }

    double exact_inverse(double v) const {
        const double end = support_end();
        BisectOptions opts;
        if (std::isfinite(end) && end > 0.0) opts.seed = end;
        return decreasing_inverse([this](double y) { return value(y); }, v, opts);
    }

    void ensure_table() const {
        std::lock_guard<std::mutex> lock(table_mutex_);
        if (!table_x_.empty() || table_built_) return;
        table_built_ = true;
        if (base_.is_zero()) return;
        const double end = support_end();
        const double x_hi = std::isfinite(end) ? end * (1.0 - 1e-9) : 1e13;
        const double x_lo = 1e-12;
        const std::size_t n = 4096;
        const double step = (std::log(x_hi) - std::log(x_lo)) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::exp(std::log(x_lo) + step * static_cast<double>(i));
            const double t = integrate_marks(x);
            if (!(t > 0.0)) break;  // past the effective support
            table_x_.push_back(x);
            table_logx_.push_back(std::log(x));
            table_t_.push_back(t);
            table_logt_.push_back(std::log(t));
        }
    }

    static double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
        std::size_t lo = 0, hi = xs.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (xs[mid] < x) lo = mid; else hi = mid;
        }
        const double denom = xs[hi] - xs[lo];
        if (denom == 0.0) return ys[lo];
        const double w = (x - xs[lo]) / denom;
        return ys[lo] + w * (ys[hi] - ys[lo]);
    }

    TailFunction base_;
    double base_end_;
    AtomList atoms_;

    mutable std::mutex mutex_;
    mutable std::map<double, double> memo_;

    mutable std::mutex table_mutex_;
    mutable bool table_built_ = false;
    mutable std::vector<double> table_x_, table_logx_, table_t_, table_logt_;
};

// Smoothed tail value for a base measure, one-off convenience entry point.
inline double smooth_tail(const LevyMeasureSpec& base, Side side, double x) {
    require(side != Side::both, "smooth_tail is one-sided");
    const TailFunction& t = side == Side::plus ? base.plus_tail() : base.minus_tail();
    SmoothedSideKernel kernel(t, t.support_end());
    return kernel.value(x);
}

// Drift of the smoothed triplet: gamma plus the change in the compensator of
// jumps with |x| <= 1. Computed as a mark integral of truncated-moment
// differences, which stays finite even when the one-sided first moments
// diverge at 0.
inline double smoothed_drift(const LevyMeasureSpec& base) {
    auto side_delta = [&](const TailFunction& tail) {
        if (tail.is_zero()) return 0.0;
        AtomList atoms;
        tail.collect_atoms(0.0, 1.0, atoms);
        std::vector<double> bps;
        for (const auto& [loc, mass] : atoms) {
            (void)mass;
            if (loc < 1.0 && 1.0 <= loc + loc * loc) bps.push_back((1.0 - loc) / (loc * loc));
        }
        return integrate(
            [&](double u) {
                const double g = detail_smooth::mark_preimage(u, 1.0);
                return -tail.moment1(g, 1.0) + u * tail.moment2(g);
            },
            0.0, 1.0, std::move(bps));
    };
    return base.gamma() + side_delta(base.plus_tail()) - side_delta(base.minus_tail());
}

// The smoothed measure: kernel-backed continuous tails, drift adjusted for
// the mark contribution, Gaussian part unchanged.
inline LevyMeasureSpec make_smoothed(const LevyMeasureSpec& base) {
    auto plus = std::make_shared<const SmoothedSideKernel>(base.plus_tail(),
                                                           base.plus_tail().support_end());
    auto minus = std::make_shared<const SmoothedSideKernel>(base.minus_tail(),
                                                            base.minus_tail().support_end());
    return LevyMeasureSpec(smoothed_drift(base), base.sigma2(), TailFunction::kernel(plus),
                           TailFunction::kernel(minus));
}

// Apply the mark transform to a sampled path: every recorded jump inflates by
// sign(d) u d^2, the value moves by the same increments, the sub-cutoff
// component is untouched.
template <typename RNG>
PathSample smooth_path(const PathSample& path, RNG& rng) {
    PathSample out = path;
    double shift = 0.0;
    for (auto& j : out.jumps) {
        const double u = rng.uniform();
        const double inc = (j.size > 0.0 ? 1.0 : -1.0) * u * j.size * j.size;
        j.size += inc;
        shift += inc;
    }
    out.value += shift;
    return out;
}

struct DiffuseReport {
    bool diffuse = true;
    AtomList atoms;      // located point masses
    std::string note;
};

// A measure is diffuse when neither side carries atoms. Kernel-backed tails
// are additionally scanned on a log grid for unexpected steps.
inline DiffuseReport is_diffuse(const LevyMeasureSpec& m) {
    DiffuseReport report;
    report.atoms = m.atoms(Side::both);
    if (!report.atoms.empty()) {
        report.diffuse = false;
        report.note = "point masses present";
        return report;
    }
    auto scan = [&](const TailFunction& t) {
        if (!t.is_kernel()) return true;
        const auto* k = t.kernel_ptr();
        double prev_x = 1e-6;
        double prev_v = k->fast_value(prev_x);
        for (int i = 1; i <= 96; ++i) {
            const double x = 1e-6 * std::pow(10.0, static_cast<double>(i) / 8.0);
            const double v = k->fast_value(x);
            // A genuine step survives grid refinement; smooth decay does not.
            if (prev_v > 0.0 && v >= 0.0) {
                const double mid = k->fast_value(0.5 * (prev_x + x));
                const double drop = prev_v - v;
                if (drop > 0.2 * prev_v && (prev_v - mid) > 0.45 * drop && prev_v > 1e-12) {
                    const double jump_near = k->value(0.5 * (prev_x + x)) -
                                             k->value(0.5 * (prev_x + x) * (1.0 + 1e-6));
                    if (jump_near > 0.05 * prev_v) return false;
                }
            }
            prev_x = x;
            prev_v = v;
        }
        return true;
    };
    if (!scan(m.plus_tail()) || !scan(m.minus_tail())) {
        report.diffuse = false;
        report.note = "kernel tail shows a step on the scan grid";
        return report;
    }
    report.note = "no atoms detected";
    return report;
}

}  // namespace levytrim
