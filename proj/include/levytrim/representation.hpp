#pragma once

// Exact distributional representations of trimmed values at a fixed horizon:
// a truncated infinitely divisible component plus Poisson tie corrections at
// the atoms of the measure, conditioned on Gamma-distributed tail levels.
// Closed-form order-statistic exceedance probabilities live here as well.

#include <cmath>
#include <limits>

#include "levytrim/common.hpp"
#include "levytrim/jump_sampler.hpp"
#include "levytrim/levy_measure.hpp"

namespace levytrim {

// P(Gamma(shape) <= m): regularized lower incomplete gamma at integer shape.
inline double gamma_lower_regularized_int(int shape, double m) {
    require(shape >= 1, "gamma shape must be a positive integer");
    if (m <= 0.0) return 0.0;
    if (m > 700.0) return 1.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < shape; ++k) {
        term *= m / static_cast<double>(k);
        sum += term;
    }
    return 1.0 - std::exp(-m) * sum;
}

// Overshoot of the selected tail past level w at its inverse point:
// rho(w) = tail(inverse(w)-) - w. Zero for diffuse tails.
inline double tie_rho(const LevyMeasureSpec& m, Side side, double w) {
    require_positive(w, "tie level w");
    const double loc = m.inverse_tail(side, w);
    if (loc <= 0.0) {
        const double total = m.tail(side, 0.0);
        return std::isfinite(total) ? std::max(0.0, total - w) : 0.0;
    }
    return std::max(0.0, m.left_limit_tail(side, loc) - w);
}

// Signed split of the two-sided overshoot at the modulus inverse point,
// proportional to the atom masses of the two sides there; zero when the
// modulus atom is empty.
inline double tie_kappa(const LevyMeasureSpec& m, Side sign, double v) {
    require_positive(v, "tie level v");
    require(sign != Side::both, "tie_kappa needs a one-sided selector");
    const double loc = m.inverse_tail(Side::both, v);
    if (loc <= 0.0) return 0.0;
    const double overshoot = std::max(0.0, m.left_limit_tail(Side::both, loc) - v);
    const double mass_plus = m.atom_mass(Side::plus, loc);
    const double mass_minus = m.atom_mass(Side::minus, loc);
    const double total = mass_plus + mass_minus;
    if (total <= 0.0) return 0.0;
    return overshoot * (sign == Side::plus ? mass_plus : mass_minus) / total;
}

// P(the (r+1)-st largest jump on `side` exceeds y) at horizon t: the
// regularized lower incomplete gamma of order r+1 at t * tail(y).
inline double order_statistic_exceedance(const LevyMeasureSpec& m, double t, int r, Side side,
                                         double y) {
    require_positive(t, "horizon t");
    require_positive(y, "level y");
    require(r >= 0, "order r must be nonnegative");
    const double mass = t * m.tail(side, y);
    if (mass <= 0.0) return 0.0;
    return gamma_lower_regularized_int(r + 1, mass);
}

// One tie draw G_t = inverse(w) * Poisson(t * rho(w)); identically zero for
// diffuse measures.
template <typename RNG>
double sample_tie_G(const LevyMeasureSpec& m, Side side, double t, double w, RNG& rng) {
    require_positive(t, "horizon t");
    const double loc = m.inverse_tail(side, w);
    if (loc <= 0.0) return 0.0;
    const double rho = tie_rho(m, side, w);
    if (rho <= 0.0) return 0.0;
    return loc * static_cast<double>(rng.poisson(t * rho));
}

// ---- truncated infinitely divisible component -------------------------------

// Triplet of the process with jumps confined to (-window_minus, window_plus),
// both endpoints excluded. Levels are the Gamma/t tail levels; an absent
// trimming side is encoded by level 0 / infinite window.
struct TruncatedTriplet {
    double beta = 0.0;   // drift after the compensator shift
    double tau2 = 0.0;   // Gaussian variance, unchanged by truncation
    LevyMeasureSpec lambda;  // restricted measure carrying beta as its drift
    double level_plus = 0.0;
    double level_minus = 0.0;
    double window_plus = kInf;
    double window_minus = kInf;
    double t = 0.0;
};

// Drift of the truncated triplet: gamma minus the positive-side compensator
// over [w+, 1] plus the negative-side compensator over [w-, 1], each active
// only when its window reaches below 1.
inline double truncated_drift(const LevyMeasureSpec& m, double w_plus, double w_minus) {
    double g = m.gamma();
    if (w_plus <= 1.0) g -= m.plus_tail().moment1_closed(w_plus, 1.0);
    if (w_minus <= 1.0) g += m.minus_tail().moment1_closed(w_minus, 1.0);
    return g;
}

inline TruncatedTriplet make_truncated_triplet(const LevyMeasureSpec& m, double t,
                                               double level_minus, double level_plus) {
    require_positive(t, "horizon t");
    TruncatedTriplet out;
    out.t = t;
    out.level_plus = level_plus;
    out.level_minus = level_minus;
    out.window_plus = level_plus > 0.0 ? m.sampling_inverse(Side::plus, level_plus) : kInf;
    out.window_minus = level_minus > 0.0 ? m.sampling_inverse(Side::minus, level_minus) : kInf;
    out.tau2 = m.sigma2();
    out.beta = truncated_drift(m, out.window_plus, out.window_minus);
    out.lambda = m.restricted(out.window_plus, out.window_minus, out.beta);
    return out;
}

// Modulus truncation: both sides cut at the same window.
inline TruncatedTriplet make_modulus_truncated_triplet(const LevyMeasureSpec& m, double t,
                                                       double level) {
    require_positive(t, "horizon t");
    require_positive(level, "truncation level");
    TruncatedTriplet out;
    out.t = t;
    out.level_plus = level;
    out.level_minus = level;
    const double w = m.inverse_tail(Side::both, level);
    out.window_plus = w;
    out.window_minus = w;
    out.tau2 = m.sigma2();
    out.beta = truncated_drift(m, w, w);
    out.lambda = m.restricted(w, w, out.beta);
    return out;
}

// One draw of the truncated component, by path simulation of the restricted
// measure. `target_jumps` steers the sampling cutoff.
template <typename RNG>
double sample_truncated_ID(const TruncatedTriplet& triplet, RNG& rng,
                           double target_jumps = 256.0) {
    const double eps = harness_cutoff(triplet.lambda, triplet.t, 0, target_jumps);
    return sample_path(triplet.lambda, triplet.t, eps, rng).value;
}

// ---- joint representations ---------------------------------------------------

struct AsymmetricRepDraw {
    double trimmed_value = 0.0;
    double rth_positive_jump = kNaN;   // r-th largest positive jump
    double sth_negative_jump = kNaN;   // magnitude of the s-th largest negative jump
    bool tie_nonzero = false;
};

struct ModulusRepDraw {
    double trimmed_value = 0.0;
    double rth_modulus_magnitude = kNaN;
    bool tie_nonzero = false;
};

// Joint draw of (trimmed value, boundary order statistics) for asymmetric
// trimming: independent Gamma levels fix the truncation windows, the trimmed
// value is the truncated component plus the signed tie corrections.
template <typename RNG>
AsymmetricRepDraw sample_trimmed_asym_rep(const LevyMeasureSpec& m, double t, int r, int s,
                                          RNG& rng, double target_jumps = 256.0) {
    require_positive(t, "horizon t");
    require(r >= 0 && s >= 0, "trim orders must be nonnegative");
    if (r > 0 && !m.infinite_activity(Side::plus)) {
        throw std::domain_error("asymmetric representation with r >= 1 needs an infinite "
                                "positive tail at 0");
    }
    if (s > 0 && !m.infinite_activity(Side::minus)) {
        throw std::domain_error("asymmetric representation with s >= 1 needs an infinite "
                                "negative tail at 0");
    }
    AsymmetricRepDraw out;
    if (r == 0 && s == 0) {
        // Documented passthrough: an untrimmed path draw.
        const double eps = harness_cutoff(m, t, 0, target_jumps);
        out.trimmed_value = sample_path(m, t, eps, rng).value;
        return out;
    }
    const double v = r > 0 ? rng.gamma_int(r) / t : 0.0;
    const double u = s > 0 ? rng.gamma_int(s) / t : 0.0;
    const TruncatedTriplet triplet = make_truncated_triplet(m, t, u, v);
    const double x = sample_truncated_ID(triplet, rng, target_jumps);
    double tie = 0.0;
    if (r > 0) tie += sample_tie_G(m, Side::plus, t, v, rng);
    if (s > 0) tie -= sample_tie_G(m, Side::minus, t, u, rng);
    out.trimmed_value = x + tie;
    out.tie_nonzero = tie != 0.0;
    if (r > 0) out.rth_positive_jump = triplet.window_plus;
    if (s > 0) out.sth_negative_jump = triplet.window_minus;
    return out;
}

// Modulus counterpart: one Gamma level fixes a two-sided window; the tie term
// splits the overshoot across signs by atom mass.
template <typename RNG>
ModulusRepDraw sample_trimmed_mod_rep(const LevyMeasureSpec& m, double t, int r, RNG& rng,
                                      double target_jumps = 256.0) {
    require_positive(t, "horizon t");
    require(r >= 0, "trim order must be nonnegative");
    ModulusRepDraw out;
    if (r == 0) {
        const double eps = harness_cutoff(m, t, 0, target_jumps);
        out.trimmed_value = sample_path(m, t, eps, rng).value;
        return out;
    }
    if (!m.infinite_activity(Side::both)) {
        throw std::domain_error("modulus representation needs an infinite two-sided tail at 0");
    }
    const double v = rng.gamma_int(r) / t;
    const TruncatedTriplet triplet = make_modulus_truncated_triplet(m, t, v);
    const double x = sample_truncated_ID(triplet, rng, target_jumps);
    const double w = triplet.window_plus;
    const double kap_plus = tie_kappa(m, Side::plus, v);
    const double kap_minus = tie_kappa(m, Side::minus, v);
    double tie = 0.0;
    if (kap_plus > 0.0) tie += w * static_cast<double>(rng.poisson(t * kap_plus));
    if (kap_minus > 0.0) tie -= w * static_cast<double>(rng.poisson(t * kap_minus));
    out.trimmed_value = x + tie;
    out.tie_nonzero = tie != 0.0;
    out.rth_modulus_magnitude = w;
    return out;
}

}  // namespace levytrim
