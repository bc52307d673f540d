#pragma once

// A Levy measure given through its one-sided tail functions, plus the drift
// gamma and Gaussian variance sigma2 of the enclosing triplet. Immutable
// after construction; all operations are pure.

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "levytrim/common.hpp"
#include "levytrim/tail_function.hpp"

namespace levytrim {

enum class Side { plus, minus, both };

inline const char* side_name(Side s) {
    switch (s) {
        case Side::plus: return "plus";
        case Side::minus: return "minus";
        default: return "both";
    }
}

class LevyMeasureSpec {
  public:
    LevyMeasureSpec() = default;

    LevyMeasureSpec(double gamma, double sigma2, TailFunction plus, TailFunction minus)
        : gamma_(gamma), sigma2_(sigma2), plus_(std::move(plus)), minus_(std::move(minus)) {
        require_nonnegative(sigma2, "sigma2");
        // Square-integrability near 0: U(1) must be finite. All families keep
        // it finite by construction, so this is a cheap sanity evaluation.
        const double u1 = U(1.0);
        if (!std::isfinite(u1)) {
            throw std::domain_error("measure fails integrability: U(1) is not finite");
        }
    }

    double gamma() const { return gamma_; }
    double sigma2() const { return sigma2_; }
    const TailFunction& plus_tail() const { return plus_; }
    const TailFunction& minus_tail() const { return minus_; }

    const TailFunction& side_tail(Side s) const {
        require(s != Side::both, "side_tail needs a one-sided selector");
        return s == Side::plus ? plus_ : minus_;
    }

    // ---- tails -----------------------------------------------------------

    // Tail value; x == 0 returns the limit at 0+ (+infinity under infinite
    // activity). Negative x is a domain error.
    double tail(Side s, double x) const {
        require(x >= 0.0, "tail argument x must be nonnegative");
        switch (s) {
            case Side::plus: return plus_.value(x);
            case Side::minus: return minus_.value(x);
            default: return plus_.value(x) + minus_.value(x);
        }
    }

    double left_limit_tail(Side s, double x) const {
        require_positive(x, "left limit argument x");
        switch (s) {
            case Side::plus: return plus_.left_limit(x);
            case Side::minus: return minus_.left_limit(x);
            default: return plus_.left_limit(x) + minus_.left_limit(x);
        }
    }

    double atom_mass(Side s, double x) const {
        return std::max(0.0, left_limit_tail(s, x) - tail(s, x));
    }

    // Right-continuous inverse of the selected tail.
    double inverse_tail(Side s, double v) const {
        require_positive(v, "inverse level v");
        switch (s) {
            case Side::plus: return plus_.inverse(v);
            case Side::minus: return minus_.inverse(v);
            default: break;
        }
        if (two_sided_power(plus_, minus_)) {
            // Both sides pure power laws with a common index.
            const double c = power_scale(plus_) + power_scale(minus_);
            return std::pow(c / v, 1.0 / power_index(plus_, minus_));
        }
        if (plus_.is_zero()) return minus_.inverse(v);
        if (minus_.is_zero()) return plus_.inverse(v);
        const double end = std::max(plus_.support_end(), minus_.support_end());
        BisectOptions opts;
        if (std::isfinite(end) && end > 0.0) opts.seed = end;
        return decreasing_inverse([this](double y) { return plus_.value(y) + minus_.value(y); },
                                  v, opts);
    }

    double sampling_inverse(Side s, double v) const {
        switch (s) {
            case Side::plus: return plus_.sampling_inverse(v);
            case Side::minus: return minus_.sampling_inverse(v);
            default: return inverse_tail(Side::both, v);
        }
    }

    // ---- truncated moment functions ---------------------------------------

    // nu(x) = gamma - int_{x<|y|<=1} y Pi(dy); equals gamma for x >= 1.
    double nu(double x) const {
        require_positive(x, "nu argument x");
        if (x >= 1.0) return gamma_;
        return gamma_ - (plus_.moment1(x, 1.0) - minus_.moment1(x, 1.0));
    }

    // V(x) = sigma2 + int_{|y|<=x} y^2 Pi(dy), nondecreasing.
    double V(double x) const {
        require_positive(x, "V argument x");
        return sigma2_ + plus_.moment2(x) + minus_.moment2(x);
    }

    // U(x) = V(x) + x^2 * two-sided tail(x), nondecreasing.
    double U(double x) const {
        require_positive(x, "U argument x");
        return V(x) + x * x * tail(Side::both, x);
    }

    // ---- structure ---------------------------------------------------------

    bool infinite_activity(Side s) const {
        switch (s) {
            case Side::plus: return plus_.infinite_at_zero();
            case Side::minus: return minus_.infinite_at_zero();
            default: return plus_.infinite_at_zero() || minus_.infinite_at_zero();
        }
    }

    bool two_sided_infinite_activity() const {
        return plus_.infinite_at_zero() && minus_.infinite_at_zero();
    }

    AtomList atoms(Side s) const {
        switch (s) {
            case Side::plus: return plus_.atoms();
            case Side::minus: return minus_.atoms();
            default: break;
        }
        AtomList out = plus_.atoms();
        for (const auto& a : minus_.atoms()) out.push_back(a);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<double> atom_locations() const {
        std::vector<double> out;
        for (const auto& a : atoms(Side::both)) out.push_back(a.first);
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // Measure restricted to jumps in (-w_minus, w_plus), endpoints excluded;
    // an infinite level keeps that side untouched. `new_gamma` is the drift
    // of the restricted triplet, supplied by the caller.
    LevyMeasureSpec restricted(double w_plus, double w_minus, double new_gamma) const {
        TailFunction p = std::isfinite(w_plus) ? TailFunction::restricted(plus_, w_plus) : plus_;
        TailFunction m = std::isfinite(w_minus) ? TailFunction::restricted(minus_, w_minus) : minus_;
        return LevyMeasureSpec(new_gamma, sigma2_, std::move(p), std::move(m));
    }

  private:
    static bool two_sided_power(const TailFunction& a, const TailFunction& b) {
        bool ok = true;
        double alpha_a = 0.0, alpha_b = 0.0;
        a.visit([&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, PowerLawTail>) alpha_a = n.alpha;
            else ok = false;
        });
        b.visit([&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, PowerLawTail>) alpha_b = n.alpha;
            else ok = false;
        });
        return ok && alpha_a == alpha_b;
    }

    static double power_scale(const TailFunction& t) {
        double c = 0.0;
        t.visit([&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, PowerLawTail>) c = n.c;
        });
        return c;
    }

    static double power_index(const TailFunction& a, const TailFunction& b) {
        double alpha = 0.0;
        a.visit([&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, PowerLawTail>) alpha = n.alpha;
        });
        (void)b;
        return alpha;
    }

    double gamma_ = 0.0;
    double sigma2_ = 0.0;
    TailFunction plus_;
    TailFunction minus_;
};

// ---- JSON schema -----------------------------------------------------------
//
//   {
//     "gamma": 0.0, "sigma2": 0.0,
//     "plus":  {"family": "power", "c": 1.0, "alpha": 1.2},
//     "minus": {"family": "power", "c": 1.0, "alpha": 1.2},
//     "atoms_plus":  [[1.0, 2.0]],          // optional extra point masses
//     "atoms_minus": [[0.5, 0.25]]
//   }
//
// Families: "power" (c, alpha, optional cap), "atoms" (atoms: [[loc,mass],..]),
// "zero", "composite" (parts: [family...]). Unknown keys are rejected.

namespace measure_json {

using nlohmann::json;

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::domain_error("unknown key \"" + it.key() + "\" in " + where);
        }
    }
}

inline TailFunction tail_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family")) {
        throw std::domain_error("tail spec must be an object with a \"family\" field");
    }
    const std::string family = j.at("family").get<std::string>();
    if (family == "power") {
        reject_unknown_keys(j, {"family", "c", "alpha", "cap"}, "power tail");
        const double c = j.at("c").get<double>();
        const double alpha = j.at("alpha").get<double>();
        if (j.contains("cap")) {
            return TailFunction::power_law_capped(c, alpha, j.at("cap").get<double>());
        }
        return TailFunction::power_law(c, alpha);
    }
    if (family == "atoms") {
        reject_unknown_keys(j, {"family", "atoms"}, "atoms tail");
        AtomList atoms;
        for (const auto& pair : j.at("atoms")) {
            atoms.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
        return TailFunction::step_atoms(std::move(atoms));
    }
    if (family == "zero") {
        reject_unknown_keys(j, {"family"}, "zero tail");
        return TailFunction::zero();
    }
    if (family == "composite") {
        reject_unknown_keys(j, {"family", "parts"}, "composite tail");
        std::vector<TailFunction> parts;
        for (const auto& p : j.at("parts")) parts.push_back(tail_from_json(p));
        return TailFunction::composite(std::move(parts));
    }
    throw std::domain_error("unknown tail family \"" + family + "\"");
}

inline AtomList atoms_from_json(const json& j) {
    AtomList atoms;
    for (const auto& pair : j) {
        atoms.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    return atoms;
}

inline LevyMeasureSpec measure_from_json(const json& j) {
    reject_unknown_keys(j, {"gamma", "sigma2", "plus", "minus", "atoms_plus", "atoms_minus"},
                        "measure spec");
    const double gamma = j.value("gamma", 0.0);
    const double sigma2 = j.value("sigma2", 0.0);
    TailFunction plus = j.contains("plus") ? tail_from_json(j.at("plus")) : TailFunction::zero();
    TailFunction minus = j.contains("minus") ? tail_from_json(j.at("minus")) : TailFunction::zero();
    if (j.contains("atoms_plus")) {
        plus = TailFunction::composite(
            {std::move(plus), TailFunction::step_atoms(atoms_from_json(j.at("atoms_plus")))});
    }
    if (j.contains("atoms_minus")) {
        minus = TailFunction::composite(
            {std::move(minus), TailFunction::step_atoms(atoms_from_json(j.at("atoms_minus")))});
    }
    return LevyMeasureSpec(gamma, sigma2, std::move(plus), std::move(minus));
}

inline json tail_to_json(const TailFunction& t) {
    json out;
    t.visit([&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ZeroTail>) {
            out = {{"family", "zero"}};
        } else if constexpr (std::is_same_v<N, PowerLawTail>) {
            out = {{"family", "power"}, {"c", n.c}, {"alpha", n.alpha}};
        } else if constexpr (std::is_same_v<N, PowerLawCappedTail>) {
            out = {{"family", "power"}, {"c", n.c}, {"alpha", n.alpha}, {"cap", n.cap}};
        } else if constexpr (std::is_same_v<N, StepAtomsTail>) {
            json atoms = json::array();
            for (const auto& a : n.atoms) atoms.push_back({a.first, a.second});
            out = {{"family", "atoms"}, {"atoms", atoms}};
        } else if constexpr (std::is_same_v<N, CompositeTail>) {
            json parts = json::array();
            for (const auto& p : n.parts) parts.push_back(tail_to_json(p));
            out = {{"family", "composite"}, {"parts", parts}};
        } else if constexpr (std::is_same_v<N, RestrictedTail>) {
            out = {{"family", "restricted"}, {"cut", n.cut}, {"base", tail_to_json(*n.base)}};
        } else {
            out = {{"family", "smoothed"}};
        }
    });
    return out;
}

inline json measure_to_json(const LevyMeasureSpec& m) {
    return {{"gamma", m.gamma()},
            {"sigma2", m.sigma2()},
            {"plus", tail_to_json(m.plus_tail())},
            {"minus", tail_to_json(m.minus_tail())}};
}

}  // namespace measure_json

}  // namespace levytrim
