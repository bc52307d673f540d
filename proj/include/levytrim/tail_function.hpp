#pragma once

// One-sided Levy tail functions: x -> mass of (x, infinity) under the side
// measure. All families are nonincreasing, right-continuous and nonnegative.
// Families: zero, power law (optionally capped), point atoms, restriction to
// (0, cut), a continuous kernel (for tails defined through quadrature), and
// finite sums of the above.

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "levytrim/common.hpp"
#include "levytrim/quadrature.hpp"
#include "levytrim/roots.hpp"

namespace levytrim {

using AtomList = std::vector<std::pair<double, double>>;  // (location, mass)

// Interface for tails that are only available through numerics (e.g. the
// smoothing transform). Implementations must be continuous on (0, inf).
class ContinuousTailKernel {
  public:
    virtual ~ContinuousTailKernel() = default;
    virtual double value(double x) const = 0;       // full-accuracy evaluation
    virtual double fast_value(double x) const { return value(x); }
    // Approximate inverse used on sampling hot paths; callers needing the
    // contractual 1e-12 inverse go through bisection on value().
    virtual double fast_inverse(double v) const = 0;
    virtual double value_at_zero() const = 0;
    virtual double support_end() const = 0;
    virtual double integral_tail(double a, double b) const = 0;      // int_a^b T
    virtual double power_integral(int k, double x0) const = 0;       // int_0^x0 y^k T
};

class TailFunction;

struct ZeroTail {};

struct PowerLawTail {
    double c;      // scale, > 0
    double alpha;  // index in (0,2)
};

struct PowerLawCappedTail {
    double c;
    double alpha;
    double cap;  // tail is c x^-alpha below cap, 0 at and beyond; atom at cap
};

struct StepAtomsTail {
    AtomList atoms;  // ascending locations, positive masses
};

struct RestrictedTail {
    std::shared_ptr<const TailFunction> base;
    double cut;     // keep jumps strictly below cut
    double offset;  // base left limit at cut
};

struct KernelTail {
    std::shared_ptr<const ContinuousTailKernel> kernel;
};

struct CompositeTail {
    std::vector<TailFunction> parts;
};

class TailFunction {
  public:
    TailFunction() : node_(ZeroTail{}) {}

    static TailFunction zero() { return TailFunction(ZeroTail{}); }

    static TailFunction power_law(double c, double alpha) {
        require_positive(c, "power law scale c");
        require(alpha > 0.0 && alpha < 2.0, "power law index alpha must lie in (0,2)");
        return TailFunction(PowerLawTail{c, alpha});
    }

    static TailFunction power_law_capped(double c, double alpha, double cap) {
        require_positive(c, "power law scale c");
        require(alpha > 0.0 && alpha < 2.0, "power law index alpha must lie in (0,2)");
        require_positive(cap, "support cap");
        return TailFunction(PowerLawCappedTail{c, alpha, cap});
    }

    static TailFunction step_atoms(AtomList atoms) {
        for (const auto& [loc, mass] : atoms) {
            require_positive(loc, "atom location");
            require_positive(mass, "atom mass");
        }
        std::sort(atoms.begin(), atoms.end());
        // Merge duplicate locations.
        AtomList merged;
        for (const auto& a : atoms) {
            if (!merged.empty() && merged.back().first == a.first) {
                merged.back().second += a.second;
            } else {
                merged.push_back(a);
            }
        }
        return TailFunction(StepAtomsTail{std::move(merged)});
    }

    static TailFunction restricted(TailFunction base, double cut) {
        require_positive(cut, "restriction cut");
        const double offset = base.left_limit(cut);
        auto shared = std::make_shared<const TailFunction>(std::move(base));
        return TailFunction(RestrictedTail{std::move(shared), cut, offset});
    }

    static TailFunction kernel(std::shared_ptr<const ContinuousTailKernel> k) {
        return TailFunction(KernelTail{std::move(k)});
    }

    static TailFunction composite(std::vector<TailFunction> parts) {
        std::vector<TailFunction> flat;
        for (auto& p : parts) {
            if (std::holds_alternative<ZeroTail>(p.node_)) continue;
            if (auto* sub = std::get_if<CompositeTail>(&p.node_)) {
                for (auto& q : sub->parts) flat.push_back(std::move(q));
            } else {
                flat.push_back(std::move(p));
            }
        }
        if (flat.empty()) return zero();
        if (flat.size() == 1) return std::move(flat.front());
        return TailFunction(CompositeTail{std::move(flat)});
    }

    // ---- evaluation ----------------------------------------------------

    // Tail value at x > 0; x == 0 queries the limit at 0+, which may be
    // +infinity for infinite-activity families.
    double value(double x) const {
        require(x >= 0.0, "tail argument x must be nonnegative");
        if (x == 0.0) return value_at_zero();
        return std::visit(
            [&](const auto& n) -> double {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ZeroTail>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<N, PowerLawTail>) {
                    return n.c * std::pow(x, -n.alpha);
                } else if constexpr (std::is_same_v<N, PowerLawCappedTail>) {
                    return x < n.cap ? n.c * std::pow(x, -n.alpha) : 0.0;
                } else if constexpr (std::is_same_v<N, StepAtomsTail>) {
                    double s = 0.0;
                    for (auto it = n.atoms.rbegin(); it != n.atoms.rend() && it->first > x; ++it)
                        s += it->second;
                    return s;
                } else if constexpr (std::is_same_v<N, RestrictedTail>) {
                    if (x >= n.cut) return 0.0;
                    return std::max(0.0, n.base->value(x) - n.offset);
                } else if constexpr (std::is_same_v<N, KernelTail>) {
                    return n.kernel->value(x);
                } else {
                    double s = 0.0;
                    for (const auto& p : n.parts) s += p.value(x);
                    return s;
                }
            },
            node_);
    }

    // lim_{y up x} value(y) = value(x) + atom mass at x.
    double left_limit(double x) const {
        require_positive(x, "left limit argument x");
        return std::visit(
            [&](const auto& n) -> double {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ZeroTail>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<N, PowerLawTail>) {
                    return n.c * std::pow(x, -n.alpha);
                } else if constexpr (std::is_same_v<N, PowerLawCappedTail>) {
                    return x <= n.cap ? n.c * std::pow(x, -n.alpha) : 0.0;
                } else if constexpr (std::is_same_v<N, StepAtomsTail>) {
                    double s = 0.0;
                    for (auto it = n.atoms.rbegin(); it != n.atoms.rend() && it->first >= x; ++it)
                        s += it->second;
                    return s;
                } else if constexpr (std::is_same_v<N, RestrictedTail>) {
                    if (x > n.cut) return 0.0;
                    return std::max(0.0, n.base->left_limit(x) - n.offset);
                } else if constexpr (std::is_same_v<N, KernelTail>) {
                    return n.kernel->value(x);
                } else {
                    double s = 0.0;
                    for (const auto& p : n.parts) s += p.left_limit(x);
                    return s;
                }
            },
            node_);
    }

    double atom_mass(double x) const { return std::max(0.0, left_limit(x) - value(x)); }

    double value_at_zero() const {
        return std::visit(
            [&](const auto& n) -> double {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ZeroTail>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<N, PowerLawTail> ||
                                     std::is_same_v<N, PowerLawCappedTail>) {
                    return kInf;
                } else if constexpr (std::is_same_v<N, StepAtomsTail>) {
                    double s = 0.0;
                    for (const auto& a : n.atoms) s += a.second;
                    return s;
                } else if constexpr (std::is_same_v<N, RestrictedTail>) {
                    const double b = n.base->value_at_zero();
                    return std::isinf(b) ? kInf : std::max(0.0, b - n.offset);
                } else if constexpr (std::is_same_v<N, KernelTail>) {
                    return n.kernel->value_at_zero();
                } else {
                    double s = 0.0;
                    for (const auto& p : n.parts) s += p.value_at_zero();
                    return s;
                }
            },
            node_);
    }

    bool infinite_at_zero() const { return std::isinf(value_at_zero()); }

    double support_end() const {
        return std::visit(
            [&](const auto& n) -> double {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ZeroTail>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<N, PowerLawTail>) {
                    return kInf;
                } else if constexpr (std::is_same_v<N, PowerLawCappedTail>) {
                    return n.cap;
                } else if constexpr (std::is_same_v<N, StepAtomsTail>) {
                    return n.atoms.empty() ? 0.0 : n.atoms.back().first;
                } else if constexpr (std::is_same_v<N, RestrictedTail>) {
                    return std::min(n.cut, n.base->support_end());
                } else if constexpr (std::is_same_v<N, KernelTail>) {
                    return n.kernel->support_end();
                } else {
                    double s = 0.0;
                    for (const auto& p : n.parts) s = std::max(s, p.support_end());
                    return s;
                }
            },
            node_);
    }

    // ---- inverse ---------------------------------------------------------

    // Right-continuous inverse inf{ y > 0 : value(y) <= v }. Closed form where
    // available, bracketing bisection to 1e-12 relative otherwise; 0 when the
    // tail is below v everywhere.
    double inverse(double v) const {
        require_positive(v, "inverse level v");
        return std::visit(
            [&](const auto& n) -> double {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ZeroTail>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<N, PowerLawTail>) {
                    return std::pow(n.c / v, 1.0 / n.alpha);
                } else if constexpr (std::is_same_v<N, PowerLawCappedTail>) {
                    return std::min(std::pow(n.c / v, 1.0 / n.alpha), n.cap);
                } else if constexpr (std::is_same_v<N, StepAtomsTail>) {
                    // Walk levels from the largest location downward.
                    double suffix = 0.0;
                    double result = 0.0;
                    for (auto it = n.atoms.rbegin(); it != n.atoms.rend(); ++it) {
                        if (suffix + it->second > v) {
                            result = it->first;
                            break;
                        }
                        suffix += it->second;
                    }
                    return result;
                } else if constexpr (std::is_same_v<N, RestrictedTail>) {
                    return std::min(n.base->inverse(v + n.offset), n.cut);
                } else {
                    return bisect_inverse(v);
                }
            },
            node_);
    }

    // Inverse used by samplers: identical to inverse() except that kernel
    // tails may answer from their interpolation tables.
    double sampling_inverse(double v) const {
        if (const auto* k = std::get_if<KernelTail>(&node_)) {
            return k->kernel->fast_inverse(v);
        }
        if (const auto* r = std::get_if<RestrictedTail>(&node_)) {
            return std::min(r->base->sampling_inverse(v + r->offset), r->cut);
        }
        return inverse(v);
    }

    // ---- integrals ---------------------------------------------------------

    // int_a^b value(y) dy, 0 <= a <= b, b finite.
    double integral_tail(double a, double b) const {
        if (!(b > a)) return 0.0;
        return std::visit(
            [&](const auto& n) -> double {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ZeroTail>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<N, PowerLawTail>) {
                    return power_primitive(n.c, n.alpha, a, b);
                } else if constexpr (std::is_same_v<N, PowerLawCappedTail>) {
                    const double hi = std::min(b, n.cap);
                    return hi > a ? power_primitive(n.c, n.alpha, a, hi) : 0.0;
                } else if constexpr (std::is_same_v<N, StepAtomsTail>) {
                    return step_integral(n.atoms, a, b, 0);
                } else if constexpr (std::is_same_v<N, RestrictedTail>) {
                    const double hi = std::min(b, n.cut);
                    if (hi <= a) return 0.0;
                    return n.base->integral_tail(a, hi) - n.offset * (hi - a);
                } else if constexpr (std::is_same_v<N, KernelTail>) {
                    return n.kernel->integral_tail(a, b);
                } else {
                    double s = 0.0;
                    for (const auto& p : n.parts) s += p.integral_tail(a, b);
                    return s;
                }
            },
            node_);
    }

    // int_0^x0 y^k value(y) dy for k >= 1. Finite for every valid family.
    double power_integral(int k, double x0) const {
        if (!(x0 > 0.0)) return 0.0;
        return std::visit(
            [&](const auto& n) -> double {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ZeroTail>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<N, PowerLawTail>) {
                    const double p = static_cast<double>(k) + 1.0 - n.alpha;
                    return n.c * std::pow(x0, p) / p;
                } else if constexpr (std::is_same_v<N, PowerLawCappedTail>) {
                    const double hi = std::min(x0, n.cap);
                    const double p = static_cast<double>(k) + 1.0 - n.alpha;
                    return n.c * std::pow(hi, p) / p;
                } else if constexpr (std::is_same_v<N, StepAtomsTail>) {
                    return step_integral(n.atoms, 0.0, x0, k);
                } else if constexpr (std::is_same_v<N, RestrictedTail>) {
                    const double hi = std::min(x0, n.cut);
                    if (hi <= 0.0) return 0.0;
                    return n.base->power_integral(k, hi) -
                           n.offset * std::pow(hi, k + 1) / (k + 1.0);
                } else if constexpr (std::is_same_v<N, KernelTail>) {
                    return n.kernel->power_integral(k, x0);
                } else {
                    double s = 0.0;
                    for (const auto& p : n.parts) s += p.power_integral(k, x0);
                    return s;
                }
            },
            node_);
    }

    // int_(a,b] y dPi(dy): first moment of the side measure over a half-open
    // interval, through the tail identity
    //   int_(a,b] y dPi = a T(a) - b T(b) + int_a^b T(y) dy.
    double moment1(double a, double b) const {
        if (!(b > a)) return 0.0;
        return a * value(a) - b * value(b) + integral_tail(a, b);
    }

    // int_[a,b] y dPi(dy): closed interval, includes an atom at a.
    double moment1_closed(double a, double b) const {
        return a * atom_mass(a) + moment1(a, b);
    }

    // int_(0,x] y^2 dPi(dy) via 2 int_0^x y T(y) dy - x^2 T(x).
    double moment2(double x) const {
        if (!(x > 0.0)) return 0.0;
        return 2.0 * power_integral(1, x) - x * x * value(x);
    }

    // ---- structure ---------------------------------------------------------

    void collect_atoms(double lo, double hi, AtomList& out) const {
        std::visit(
            [&](const auto& n) {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, PowerLawCappedTail>) {
                    if (n.cap > lo && n.cap <= hi) out.emplace_back(n.cap, n.c * std::pow(n.cap, -n.alpha));
                } else if constexpr (std::is_same_v<N, StepAtomsTail>) {
                    for (const auto& a : n.atoms)
                        if (a.first > lo && a.first <= hi) out.push_back(a);
                } else if constexpr (std::is_same_v<N, RestrictedTail>) {
                    n.base->collect_atoms(lo, std::min(hi, std::nextafter(n.cut, 0.0)), out);
                } else if constexpr (std::is_same_v<N, CompositeTail>) {
                    for (const auto& p : n.parts) p.collect_atoms(lo, hi, out);
                }
                // zero, power law, kernel: no atoms
            },
            node_);
    }

    AtomList atoms() const {
        AtomList out;
        collect_atoms(0.0, kInf, out);
        std::sort(out.begin(), out.end());
        AtomList merged;
        for (const auto& a : out) {
            if (!merged.empty() && merged.back().first == a.first) {
                merged.back().second += a.second;
            } else {
                merged.push_back(a);
            }
        }
        return merged;
    }

    bool has_atoms() const { return !atoms().empty(); }

    bool is_kernel() const { return std::holds_alternative<KernelTail>(node_); }
    bool is_zero() const { return std::holds_alternative<ZeroTail>(node_); }

    const ContinuousTailKernel* kernel_ptr() const {
        const auto* k = std::get_if<KernelTail>(&node_);
        return k ? k->kernel.get() : nullptr;
    }

    // First/second derivative of the tail where it is smooth; used by the
    // oscillatory tail expansion of the characteristic exponent. Families
    // with bounded support report 0 beyond their support.
    double derivative1(double x) const {
        return std::visit(
            [&](const auto& n) -> double {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, PowerLawTail>) {
                    return -n.alpha * n.c * std::pow(x, -n.alpha - 1.0);
                } else if constexpr (std::is_same_v<N, PowerLawCappedTail>) {
                    return x < n.cap ? -n.alpha * n.c * std::pow(x, -n.alpha - 1.0) : 0.0;
                } else if constexpr (std::is_same_v<N, RestrictedTail>) {
                    return x < n.cut ? n.base->derivative1(x) : 0.0;
                } else if constexpr (std::is_same_v<N, CompositeTail>) {
                    double s = 0.0;
                    for (const auto& p : n.parts) s += p.derivative1(x);
                    return s;
                } else if constexpr (std::is_same_v<N, KernelTail>) {
                    const double h = 1e-5 * std::max(1.0, x);
                    return (n.kernel->value(x + h) - n.kernel->value(x - h)) / (2.0 * h);
                } else {
                    return 0.0;
                }
            },
            node_);
    }

    double derivative2(double x) const {
        return std::visit(
            [&](const auto& n) -> double {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, PowerLawTail>) {
                    return n.alpha * (n.alpha + 1.0) * n.c * std::pow(x, -n.alpha - 2.0);
                } else if constexpr (std::is_same_v<N, PowerLawCappedTail>) {
                    return x < n.cap ? n.alpha * (n.alpha + 1.0) * n.c * std::pow(x, -n.alpha - 2.0) : 0.0;
                } else if constexpr (std::is_same_v<N, RestrictedTail>) {
                    return x < n.cut ? n.base->derivative2(x) : 0.0;
                } else if constexpr (std::is_same_v<N, CompositeTail>) {
                    double s = 0.0;
                    for (const auto& p : n.parts) s += p.derivative2(x);
                    return s;
                } else if constexpr (std::is_same_v<N, KernelTail>) {
                    const double h = 1e-4 * std::max(1.0, x);
                    return (n.kernel->value(x + h) - 2.0 * n.kernel->value(x) +
                            n.kernel->value(x - h)) / (h * h);
                } else {
                    return 0.0;
                }
            },
            node_);
    }

    template <typename Visitor>
    decltype(auto) visit(Visitor&& v) const {
        return std::visit(std::forward<Visitor>(v), node_);
    }

  private:
    using Node = std::variant<ZeroTail, PowerLawTail, PowerLawCappedTail, StepAtomsTail,
                              RestrictedTail, KernelTail, CompositeTail>;

    explicit TailFunction(Node n) : node_(std::move(n)) {}

    static double power_primitive(double c, double alpha, double a, double b) {
        if (alpha == 1.0) return c * std::log(b / a);
        const double p = 1.0 - alpha;
        return c * (std::pow(b, p) - std::pow(a, p)) / p;
    }

    // int_a^b y^k T(y) dy for a piecewise-constant atom tail.
    static double step_integral(const AtomList& atoms, double a, double b, int k) {
        double total = 0.0;
        double level = 0.0;
        for (const auto& at : atoms) level += at.second;
        double lo = 0.0;
        const double kp = static_cast<double>(k) + 1.0;
        for (const auto& at : atoms) {
            const double hi = at.first;
            const double sa = std::max(a, lo);
            const double sb = std::min(b, hi);
            if (sb > sa && level > 0.0) {
                total += level * (std::pow(sb, kp) - std::pow(sa, kp)) / kp;
            }
            level -= at.second;
            lo = hi;
            if (lo >= b) break;
        }
        return total;
    }

    double bisect_inverse(double v) const {
        const double end = support_end();
        BisectOptions opts;
        if (std::isfinite(end) && end > 0.0) opts.seed = end;
        return decreasing_inverse([this](double y) { return value(y); }, v, opts);
    }

    Node node_;
};

}  // namespace levytrim
