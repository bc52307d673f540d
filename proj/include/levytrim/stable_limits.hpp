#pragma once

// Limit-side objects: stable laws parameterized by their Levy tails
// c_plus x^-alpha / c_minus x^-alpha, trimmed-stable sampling, numeric
// characteristic exponents for infinitely divisible triplets, and the
// canonical norming/centering pair (a_t, b_t).

#include <cmath>
#include <complex>

#include "levytrim/common.hpp"
#include "levytrim/levy_measure.hpp"
#include "levytrim/quadrature.hpp"
#include "levytrim/representation.hpp"
#include "levytrim/trimmer.hpp"

namespace levytrim {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209;

struct StableParams {
    double alpha;    // in (0,2)
    double c_plus;   // nonnegative, not both zero
    double c_minus;

    void validate() const {
        require(alpha > 0.0 && alpha < 2.0, "stable index alpha must lie in (0,2)");
        require_nonnegative(c_plus, "c_plus");
        require_nonnegative(c_minus, "c_minus");
        require(c_plus + c_minus > 0.0, "stable tail scales must not both vanish");
    }

    double skew() const { return (c_plus - c_minus) / (c_plus + c_minus); }
};

struct IDTriplet {
    double beta = 0.0;
    double tau2 = 0.0;
    LevyMeasureSpec lambda;
};

// Levy measure of the stable law: pure power tails, zero drift and variance.
inline LevyMeasureSpec stable_measure(const StableParams& p) {
    p.validate();
    TailFunction plus = p.c_plus > 0.0 ? TailFunction::power_law(p.c_plus, p.alpha)
                                       : TailFunction::zero();
    TailFunction minus = p.c_minus > 0.0 ? TailFunction::power_law(p.c_minus, p.alpha)
                                         : TailFunction::zero();
    return LevyMeasureSpec(0.0, 0.0, std::move(plus), std::move(minus));
}

// Scale sigma of the classical parameterization matching the Levy tails:
// c_+ + c_- = C_alpha * sigma^alpha.
inline double stable_scale(const StableParams& p) {
    if (p.alpha == 1.0) return 0.5 * kPi * (p.c_plus + p.c_minus);
    const double c_alpha =
        (1.0 - p.alpha) / (std::tgamma(2.0 - p.alpha) * std::cos(0.5 * kPi * p.alpha));
    return std::pow((p.c_plus + p.c_minus) / c_alpha, 1.0 / p.alpha);
}

// Deterministic shift translating the polar-sampled law to the triplet
// convention (compensation of jumps with |x| <= 1, zero drift).
inline double stable_location_shift(const StableParams& p) {
    if (p.alpha == 1.0) return (p.c_plus - p.c_minus) * (1.0 - kEulerGamma);
    return (p.c_plus - p.c_minus) * p.alpha / (p.alpha - 1.0);
}

// One stable draw by the polar (uniform angle, exponential) transformation,
// parameterized so that the Levy tails are exactly c_+ x^-alpha, c_- x^-alpha
// and the law is that of the triplet (0, 0, Lambda) at time 1.
template <typename RNG>
double sample_stable(const StableParams& p, RNG& rng) {
    p.validate();
    const double alpha = p.alpha;
    const double beta = p.skew();
    const double sigma = stable_scale(p);
    const double phi = kPi * (rng.uniform() - 0.5);
    const double w = rng.exponential();
    double z;
    if (alpha == 1.0) {
        if (beta == 0.0) {
            z = std::tan(phi);
            return sigma * z;
        }
        const double h = 0.5 * kPi + beta * phi;
        z = (2.0 / kPi) * (h * std::tan(phi) -
                           beta * std::log((0.5 * kPi * w * std::cos(phi)) / h));
        return sigma * z + (2.0 / kPi) * beta * sigma * std::log(sigma) +
               stable_location_shift(p);
    }
    if (beta == 0.0) {
        z = std::sin(alpha * phi) / std::pow(std::cos(phi), 1.0 / alpha) *
            std::pow(std::cos((1.0 - alpha) * phi) / w, (1.0 - alpha) / alpha);
    } else {
        const double t0 = beta * std::tan(0.5 * kPi * alpha);
        const double b0 = std::atan(t0) / alpha;
        const double s0 = std::pow(1.0 + t0 * t0, 0.5 / alpha);
        z = s0 * std::sin(alpha * (phi + b0)) / std::pow(std::cos(phi), 1.0 / alpha) *
            std::pow(std::cos(phi - alpha * (phi + b0)) / w, (1.0 - alpha) / alpha);
    }
    return sigma * z + stable_location_shift(p);
}

// ---- trimmed stable sampling --------------------------------------------------

// Trimmed-stable draw: the representation sampler run on the stable measure
// at horizon 1 (power tails have closed-form inverses and no tie terms).
// r = s = 0 falls through to an untrimmed path draw.
template <typename RNG>
double sample_trimmed_stable_asym(const StableParams& p, int r, int s, RNG& rng,
                                  double target_jumps = 256.0) {
    const LevyMeasureSpec m = stable_measure(p);
    return sample_trimmed_asym_rep(m, 1.0, r, s, rng, target_jumps).trimmed_value;
}

template <typename RNG>
double sample_trimmed_stable_mod(const StableParams& p, int r, RNG& rng,
                                 double target_jumps = 256.0) {
    const LevyMeasureSpec m = stable_measure(p);
    return sample_trimmed_mod_rep(m, 1.0, r, rng, target_jumps).trimmed_value;
}

// A stable path at horizon 1 whose jump list supports coupled trimming: one
// path yields every light-trimmed variant of the same stable value.
template <typename RNG>
PathSample sample_stable_path(const StableParams& p, RNG& rng, double target_jumps = 256.0,
                              int trim_depth = 4) {
    const LevyMeasureSpec m = stable_measure(p);
    const double eps = harness_cutoff(m, 1.0, trim_depth, target_jumps);
    return sample_path(m, 1.0, eps, rng);
}

// ---- norming -------------------------------------------------------------------

struct Norming {
    double a_t;
    double b_t;
};

// Canonical norming: b_t solves t * tail(b_t) = 1 through the right-continuous
// inverse, a_t = t * nu(b_t).
inline Norming norming(const LevyMeasureSpec& m, double t) {
    require_positive(t, "horizon t");
    if (!m.infinite_activity(Side::both)) {
        throw std::domain_error("norming needs an infinite-activity measure "
                                "(two-sided tail must diverge at 0)");
    }
    const double b = m.inverse_tail(Side::both, 1.0 / t);
    if (!(b > 0.0)) {
        throw std::domain_error("norming failed: degenerate tail");
    }
    return {t * m.nu(b), b};
}

// ---- characteristic exponent ----------------------------------------------------

namespace detail_cf {

// One-sided contribution int (e^{i.theta.x} - 1 - i.theta.x 1_{x<=1}) dPi over
// (0, inf), computed against the tail function:
//   I = int_0^1 i.th (e^{i.th.x} - 1) T dx + int_1^M i.th e^{i.th.x} T dx
//       + i.th T(1) + oscillatory remainder beyond M.
inline std::complex<double> side_exponent(const TailFunction& tail, double theta) {
    using cplx = std::complex<double>;
    if (theta == 0.0 || tail.is_zero()) return {0.0, 0.0};
    const cplx i_theta(0.0, theta);
    const double at = std::fabs(theta);

    cplx total = i_theta * tail.value(1.0);

    // Small-x series: i.th (e^{i.th.x} - 1) = sum_k (i.th)^{k+1} x^k / k!.
    const double end = tail.support_end();
    double x0 = std::min(0.05 / at, 0.5);
    if (std::isfinite(end)) x0 = std::min(x0, end);
    if (x0 > 0.0) {
        cplx coeff = i_theta;
        double factorial = 1.0;
        for (int k = 1; k <= 10; ++k) {
            coeff *= i_theta;
            factorial *= static_cast<double>(k);
            total += coeff / factorial * tail.power_integral(k, x0);
        }
    }

    QuadratureOptions opts;
    opts.abs_tol = 1e-11;
    opts.rel_tol = 1e-9;

    AtomList atoms;
    tail.collect_atoms(0.0, kInf, atoms);

    // Middle range (x0, 1].
    if (x0 < 1.0) {
        std::vector<double> bps;
        for (const auto& a : atoms)
            if (a.first > x0 && a.first < 1.0) bps.push_back(a.first);
        total += integrate<cplx>(
            [&](double x) {
                return i_theta * (std::exp(cplx(0.0, theta * x)) - 1.0) * tail.value(x);
            },
            x0, 1.0, bps, opts);
    }

    // Oscillatory range (1, M], plus an integration-by-parts remainder when
    // the support is unbounded.
    double m_cut;
    bool bounded = std::isfinite(end);
    if (bounded) {
        m_cut = end;
        for (const auto& a : atoms) m_cut = std::max(m_cut, a.first);
    } else {
        m_cut = std::max(2.0, 64.0 / at);
        for (const auto& a : atoms) m_cut = std::max(m_cut, 2.0 * a.first);
    }
    if (m_cut > 1.0) {
        std::vector<double> bps;
        for (const auto& a : atoms)
            if (a.first > 1.0 && a.first < m_cut) bps.push_back(a.first);
        // Keep panels comparable to the oscillation period.
        const double period = 2.0 * kPi / at;
        for (double x = 1.0 + period; x < m_cut; x += period) bps.push_back(x);
        total += integrate<cplx>(
            [&](double x) {
                return i_theta * std::exp(cplx(0.0, theta * x)) * tail.value(x);
            },
            1.0, m_cut, bps, opts);
    }
    if (!bounded) {
        const cplx e_im = std::exp(cplx(0.0, theta * m_cut));
        total += e_im * (-tail.value(m_cut) + tail.derivative1(m_cut) / i_theta -
                         tail.derivative2(m_cut) / (i_theta * i_theta));
    }
    return total;
}

}  // namespace detail_cf

// Psi(theta) with E e^{i theta X_t} = e^{t Psi(theta)}.
inline std::complex<double> char_exponent(const IDTriplet& triplet, double theta) {
    std::complex<double> psi(-0.5 * triplet.tau2 * theta * theta, triplet.beta * theta);
    psi += detail_cf::side_exponent(triplet.lambda.plus_tail(), theta);
    psi += detail_cf::side_exponent(triplet.lambda.minus_tail(), -theta);
    return psi;
}

// Closed-form exponent of the stable law in the same triplet convention; used
// as an oracle for the quadrature route.
inline std::complex<double> stable_char_exponent(const StableParams& p, double theta) {
    p.validate();
    if (theta == 0.0) return {0.0, 0.0};
    const double at = std::fabs(theta);
    const double sgn = theta > 0.0 ? 1.0 : -1.0;
    const double sigma = stable_scale(p);
    const double beta = p.skew();
    const double shift = stable_location_shift(p);
    if (p.alpha == 1.0) {
        const double sa = sigma * at;
        const double re = -sa;
        const double im = -sa * beta * (2.0 / kPi) * sgn * std::log(at) + theta * shift +
                          theta * (2.0 / kPi) * beta * sigma * std::log(sigma);
        return {re, im};
    }
    const double mag = std::pow(sigma * at, p.alpha);
    const double re = -mag;
    const double im = mag * beta * sgn * std::tan(0.5 * kPi * p.alpha) + theta * shift;
    return {re, im};
}

}  // namespace levytrim
