#pragma once

// Jump-structure simulation on (0, t]: ordered large jumps through the
// cumulative-exponential representation, and full path samples with the
// compensated sub-cutoff remainder replaced by a variance-matched Gaussian.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "levytrim/common.hpp"
#include "levytrim/levy_measure.hpp"

namespace levytrim {

struct JumpRecord {
    double time;  // in (0, t]
    double size;  // nonzero, |size| > cutoff
};

struct PathSample {
    double t = 0.0;
    double epsilon = 0.0;
    std::vector<JumpRecord> jumps;
    double small_component = 0.0;     // Gaussian stand-in for compensated sub-epsilon jumps
    double small_variance = 0.0;      // t * (V(epsilon) - sigma2)
    double drift_component = 0.0;     // t * nu(epsilon)
    double gaussian_component = 0.0;  // sigma * B_t
    double value = 0.0;

    double jump_sum() const {
        double s = 0.0;
        for (const auto& j : jumps) s += j.size;
        return s;
    }
};

// Largest expected number of recorded jumps per path unless callers override.
inline constexpr double kDefaultMaxExpectedJumps = 1e4;

// Smallest epsilon with t * tail(epsilon) <= max_expected, i.e. the level at
// which the mean recorded-jump count hits the budget.
inline double default_cutoff(const LevyMeasureSpec& m, double t,
                             double max_expected = kDefaultMaxExpectedJumps) {
    require_positive(t, "horizon t");
    require_positive(max_expected, "max expected jumps");
    if (!m.infinite_activity(Side::both)) {
        // Finite activity: any positive cutoff below the smallest support
        // point records everything.
        const double eps = m.inverse_tail(Side::both, max_expected / t);
        return std::min(std::max(eps, 1e-12), 1.0);
    }
    return std::min(m.inverse_tail(Side::both, max_expected / t), 1.0);
}

// Cutoff used by the experiment harness: targets ~`target_jumps` recorded
// jumps per path and guarantees the top trim_depth+1 jumps sit above the
// cutoff except with probability < 1e-6 (Poisson tail at the target mean).
inline double harness_cutoff(const LevyMeasureSpec& m, double t, int trim_depth,
                             double target_jumps = 256.0) {
    // P(fewer than k jumps above eps) = P(Poisson(m) < k); m >= 64 makes this
    // below 1e-6 for every k <= 16.
    const double floor_mean = 64.0 + 8.0 * static_cast<double>(std::max(0, trim_depth));
    return default_cutoff(m, t, std::max(target_jumps, floor_mean));
}

// k largest jump magnitudes on the requested side (both = modulus), drawn as
// inverse tails of cumulative unit exponentials. Output is nonincreasing.
template <typename RNG>
std::vector<double> sample_ordered_jumps(const LevyMeasureSpec& m, double t, int k, Side side,
                                         RNG& rng) {
    require_positive(t, "horizon t");
    require(k >= 1, "k must be at least 1");
    if (!m.infinite_activity(side)) {
        throw std::domain_error(std::string("tail on side '") + side_name(side) +
                                "' has finite activity, so the k-th largest jump may not exist; "
                                "sample full paths instead");
    }
    std::vector<double> out(static_cast<std::size_t>(k));
    double level = 0.0;
    for (int j = 0; j < k; ++j) {
        level += rng.exponential();
        out[static_cast<std::size_t>(j)] = m.sampling_inverse(side, level / t);
    }
    return out;
}

// One terminal-value path sample. Jumps above epsilon arrive as two
// independent marked Poisson processes (one per side); drift carries the
// truncated compensator and the sub-epsilon remainder is Gaussian with the
// matched variance t*(V(eps)-sigma2).
template <typename RNG>
PathSample sample_path(const LevyMeasureSpec& m, double t, double epsilon, RNG& rng) {
    require_positive(t, "horizon t");
    require_positive(epsilon, "cutoff epsilon");
    require(epsilon <= 1.0, "cutoff epsilon must not exceed 1");

    PathSample path;
    path.t = t;
    path.epsilon = epsilon;

    const double lam_plus = m.tail(Side::plus, epsilon);
    const double lam_minus = m.tail(Side::minus, epsilon);
    const auto n_plus = rng.poisson(t * lam_plus);
    const auto n_minus = rng.poisson(t * lam_minus);
    path.jumps.reserve(static_cast<std::size_t>(n_plus + n_minus));

    for (std::int64_t i = 0; i < n_plus; ++i) {
        const double level = rng.uniform() * lam_plus;
        const double mag = m.sampling_inverse(Side::plus, level);
        const double time = rng.uniform() * t;
        path.jumps.push_back({time, mag});
    }
    for (std::int64_t i = 0; i < n_minus; ++i) {
        const double level = rng.uniform() * lam_minus;
        const double mag = m.sampling_inverse(Side::minus, level);
        const double time = rng.uniform() * t;
        path.jumps.push_back({time, -mag});
    }

    path.small_variance = t * (m.V(epsilon) - m.sigma2());
    path.small_component = path.small_variance > 0.0
                               ? std::sqrt(path.small_variance) * rng.normal()
                               : 0.0;
    path.drift_component = t * m.nu(epsilon);
    path.gaussian_component = m.sigma2() > 0.0 ? std::sqrt(m.sigma2() * t) * rng.normal() : 0.0;
    path.value = path.drift_component + path.gaussian_component + path.small_component +
                 path.jump_sum();
    return path;
}

// Sum of squared recorded jumps plus the sub-cutoff expectation surrogate.
inline double quadratic_variation(const PathSample& path) {
    double s = 0.0;
    for (const auto& j : path.jumps) s += j.size * j.size;
    return s + path.small_variance;
}

}  // namespace levytrim
