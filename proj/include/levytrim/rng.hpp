#pragma once

// Reproducible random streams. Every Monte Carlo consumer owns one Stream per
// (seed, label, replication) triple, so results do not depend on thread count
// or scheduling order.

#include <cmath>
#include <cstdint>
#include <string>

#include "levytrim/common.hpp"

namespace levytrim {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256++ seeded through splitmix64. State is private to the stream;
// distinct key tuples give statistically independent streams.
class Stream {
  public:
    Stream() : Stream(0, 0) {}

    Stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ull + stream_id * 0x9e3779b97f4a7c15ull);
        for (auto& w : s_) w = splitmix64(sm);
        // Avoid the all-zero state, which xoshiro cannot leave.
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x1ull;
    }

    static Stream keyed(std::uint64_t seed, const std::string& label, std::uint64_t replication) {
        std::uint64_t id = fnv1a64(label) ^ (replication * 0xd6e8feb86659fd93ull + 0x2545f4914f6cdd1dull);
        return Stream(seed, id);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1); never returns an exact endpoint.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double exponential() { return -std::log(uniform()); }

    // Box-Muller, cosine branch only: fixed two-uniform consumption per draw.
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Gamma(shape, 1) for small integer shape, as a sum of unit exponentials.
    double gamma_int(int shape) {
        double g = 0.0;
        for (int i = 0; i < shape; ++i) g += exponential();
        return g;
    }

    // Poisson(mean): chop-down inversion for small means, Hormann's PTRS
    // transformed rejection otherwise.
    std::int64_t poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        if (mean < 12.0) return poisson_inversion(mean);
        return poisson_ptrs(mean);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::int64_t poisson_inversion(double mean) {
        const double p0 = std::exp(-mean);
        double p = p0, cdf = p0;
        const double u = uniform();
        std::int64_t k = 0;
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (k > 200) break;  // cdf numerically 1 long before this
        }
        return k;
    }

    std::int64_t poisson_ptrs(double mean) {
        const double slam = std::sqrt(mean);
        const double loglam = std::log(mean);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            const double u = uniform() - 0.5;
            const double v = uniform();
            const double us = 0.5 - std::fabs(u);
            const auto k = static_cast<std::int64_t>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
            if (us >= 0.07 && v <= v_r) return k;
            if (k < 0 || (us < 0.013 && v > us)) continue;
            if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
                -mean + static_cast<double>(k) * loglam - std::lgamma(static_cast<double>(k) + 1.0)) {
                return k;
            }
        }
    }

    std::uint64_t s_[4];
};

}  // namespace levytrim
