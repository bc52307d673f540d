#pragma once

// Light trimming of a sampled path: remove the r largest positive and s most
// negative jumps (asymmetric), or the r largest jumps in modulus (modulus).
// Ties are broken by (magnitude desc, positive sign first, earlier time); the
// choice is law-irrelevant for diffuse measures.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "levytrim/common.hpp"
#include "levytrim/jump_sampler.hpp"

namespace levytrim {

enum class TrimMode { asymmetric, modulus };

struct TrimResult {
    TrimMode mode = TrimMode::asymmetric;
    int r = 0;
    int s = 0;
    double trimmed_value = 0.0;
    std::vector<double> removed_positive;  // sizes, nonincreasing
    std::vector<double> removed_negative;  // magnitudes, nonincreasing
    std::vector<double> removed_modulus;   // signed sizes, nonincreasing modulus
};

namespace detail {

// Indices of the k best jumps under `better`, best first. Linear insertion;
// k stays tiny (light trimming).
template <typename Better>
std::vector<std::uint32_t> top_k(const std::vector<JumpRecord>& jumps, int k, Better better) {
    std::vector<std::uint32_t> best;
    best.reserve(static_cast<std::size_t>(k) + 1);
    for (std::uint32_t i = 0; i < jumps.size(); ++i) {
        std::size_t pos = best.size();
        while (pos > 0 && better(jumps[i], jumps[best[pos - 1]])) --pos;
        if (pos < static_cast<std::size_t>(k)) {
            best.insert(best.begin() + static_cast<std::ptrdiff_t>(pos), i);
            if (best.size() > static_cast<std::size_t>(k)) best.pop_back();
        }
    }
    return best;
}

inline bool better_positive(const JumpRecord& a, const JumpRecord& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.time < b.time;
}

inline bool better_negative(const JumpRecord& a, const JumpRecord& b) {
    if (a.size != b.size) return a.size < b.size;
    return a.time < b.time;
}

inline bool better_modulus(const JumpRecord& a, const JumpRecord& b) {
    const double ma = std::fabs(a.size);
    const double mb = std::fabs(b.size);
    if (ma != mb) return ma > mb;
    if ((a.size > 0.0) != (b.size > 0.0)) return a.size > 0.0;
    return a.time < b.time;
}

inline void throw_shortfall(const char* what, int need, std::size_t have, double epsilon) {
    throw std::domain_error(std::string("trim: need ") + std::to_string(need) + " " + what +
                            " jumps above the cutoff but the path records " +
                            std::to_string(have) + " (cutoff " + std::to_string(epsilon) +
                            " is too high)");
}

}  // namespace detail

inline TrimResult trim_asymmetric(const PathSample& path, int r, int s) {
    require(r >= 0 && s >= 0, "trim orders r, s must be nonnegative");
    TrimResult out;
    out.mode = TrimMode::asymmetric;
    out.r = r;
    out.s = s;
    out.trimmed_value = path.value;

    if (r > 0) {
        std::size_t n_pos = 0;
        for (const auto& j : path.jumps) n_pos += j.size > 0.0 ? 1 : 0;
        if (n_pos < static_cast<std::size_t>(r)) {
            detail::throw_shortfall("positive", r, n_pos, path.epsilon);
        }
        std::vector<JumpRecord> positives;
        positives.reserve(n_pos);
        for (const auto& j : path.jumps) {
            if (j.size > 0.0) positives.push_back(j);
        }
        for (auto idx : detail::top_k(positives, r, detail::better_positive)) {
            out.removed_positive.push_back(positives[idx].size);
            out.trimmed_value -= positives[idx].size;
        }
    }
    if (s > 0) {
        std::size_t n_neg = 0;
        for (const auto& j : path.jumps) n_neg += j.size < 0.0 ? 1 : 0;
        if (n_neg < static_cast<std::size_t>(s)) {
            detail::throw_shortfall("negative", s, n_neg, path.epsilon);
        }
        std::vector<JumpRecord> negatives;
        negatives.reserve(n_neg);
        for (const auto& j : path.jumps) {
            if (j.size < 0.0) negatives.push_back(j);
        }
        for (auto idx : detail::top_k(negatives, s, detail::better_negative)) {
            out.removed_negative.push_back(-negatives[idx].size);
            out.trimmed_value += -negatives[idx].size;
        }
    }
    return out;
}

inline TrimResult trim_modulus(const PathSample& path, int r) {
    require(r >= 0, "trim order r must be nonnegative");
    TrimResult out;
    out.mode = TrimMode::modulus;
    out.r = r;
    out.trimmed_value = path.value;
    if (r == 0) return out;
    if (path.jumps.size() < static_cast<std::size_t>(r)) {
        detail::throw_shortfall("modulus", r, path.jumps.size(), path.epsilon);
    }
    for (auto idx : detail::top_k(path.jumps, r, detail::better_modulus)) {
        out.removed_modulus.push_back(path.jumps[idx].size);
        out.trimmed_value -= path.jumps[idx].size;
    }
    return out;
}

inline double studentize(double value, double a_t, double b_t) {
    require_positive(b_t, "norming b_t");
    return (value - a_t) / b_t;
}

// Prefix sums of the top order statistics of one path, so a batch of trim
// orders can be evaluated from a single selection pass. Agrees with
// trim_asymmetric / trim_modulus by construction (same comparators).
class TrimTable {
  public:
    TrimTable(const PathSample& path, int r_max, int s_max, int mod_max)
        : value_(path.value), epsilon_(path.epsilon) {
        if (r_max > 0) {
            std::vector<JumpRecord> positives;
            for (const auto& j : path.jumps)
                if (j.size > 0.0) positives.push_back(j);
            build_prefix(positives, r_max, detail::better_positive, prefix_pos_,
                         [](const JumpRecord& j) { return j.size; });
        }
        if (s_max > 0) {
            std::vector<JumpRecord> negatives;
            for (const auto& j : path.jumps)
                if (j.size < 0.0) negatives.push_back(j);
            build_prefix(negatives, s_max, detail::better_negative, prefix_neg_,
                         [](const JumpRecord& j) { return -j.size; });
        }
        if (mod_max > 0) {
            build_prefix(path.jumps, mod_max, detail::better_modulus, prefix_mod_,
                         [](const JumpRecord& j) { return j.size; });
        }
    }

    double trimmed_asymmetric(int r, int s) const {
        if (static_cast<std::size_t>(r) >= prefix_pos_.size()) {
            detail::throw_shortfall("positive", r, prefix_pos_.size() - 1, epsilon_);
        }
        if (static_cast<std::size_t>(s) >= prefix_neg_.size()) {
            detail::throw_shortfall("negative", s, prefix_neg_.size() - 1, epsilon_);
        }
        return value_ - prefix_pos_[static_cast<std::size_t>(r)] +
               prefix_neg_[static_cast<std::size_t>(s)];
    }

    double trimmed_modulus(int r) const {
        if (static_cast<std::size_t>(r) >= prefix_mod_.size()) {
            detail::throw_shortfall("modulus", r, prefix_mod_.size() - 1, epsilon_);
        }
        return value_ - prefix_mod_[static_cast<std::size_t>(r)];
    }

  private:
    template <typename Better, typename Extract>
    static void build_prefix(const std::vector<JumpRecord>& jumps, int k, Better better,
                             std::vector<double>& prefix, Extract extract) {
        const auto winners = detail::top_k(jumps, k, better);
        prefix.resize(winners.size() + 1);
        prefix[0] = 0.0;
        for (std::size_t i = 0; i < winners.size(); ++i) {
            prefix[i + 1] = prefix[i] + extract(jumps[winners[i]]);
        }
    }

    double value_;
    double epsilon_;
    std::vector<double> prefix_pos_{0.0};
    std::vector<double> prefix_neg_{0.0};
    std::vector<double> prefix_mod_{0.0};
};

}  // namespace levytrim
