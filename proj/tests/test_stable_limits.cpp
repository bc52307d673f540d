#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "levytrim/levytrim.hpp"
#include "oracles.hpp"

using namespace levytrim;

namespace {

LevyMeasureSpec zero_measure() {
    return LevyMeasureSpec(0.0, 0.0, TailFunction::zero(), TailFunction::zero());
}

}  // namespace

TEST_CASE("characteristic exponent closed cases") {
    SECTION("pure Gaussian") {
        const IDTriplet triplet{0.0, 1.0, zero_measure()};
        const auto psi = char_exponent(triplet, 2.0);
        CHECK(psi.real() == Catch::Approx(-2.0));
        CHECK(psi.imag() == Catch::Approx(0.0).margin(1e-14));
    }
    SECTION("pure drift") {
        const IDTriplet triplet{0.7, 0.0, zero_measure()};
        const auto psi = char_exponent(triplet, 3.0);
        CHECK(psi.real() == Catch::Approx(0.0).margin(1e-14));
        CHECK(psi.imag() == Catch::Approx(2.1));
    }
}

TEST_CASE("characteristic exponent against a direct atom sum") {
    const AtomList plus{{0.5, 0.3}, {1.0, 0.4}, {2.0, 0.2}};
    const AtomList minus{{0.7, 0.5}};
    const IDTriplet triplet{0.0, 0.0,
                            LevyMeasureSpec(0.0, 0.0, TailFunction::step_atoms(plus),
                                            TailFunction::step_atoms(minus))};
    for (double theta : {0.3, 1.0, 2.5, -1.7}) {
        std::complex<double> direct{0.0, 0.0};
        for (const auto& [loc, mass] : plus) {
            const std::complex<double> e = std::exp(std::complex<double>(0.0, theta * loc));
            direct += mass * (e - 1.0 - std::complex<double>(0.0, loc <= 1.0 ? theta * loc : 0.0));
        }
        for (const auto& [loc, mass] : minus) {
            const std::complex<double> e = std::exp(std::complex<double>(0.0, -theta * loc));
            direct += mass * (e - 1.0 + std::complex<double>(0.0, loc <= 1.0 ? theta * loc : 0.0));
        }
        const auto psi = char_exponent(triplet, theta);
        CHECK(psi.real() == Catch::Approx(direct.real()).margin(1e-8));
        CHECK(psi.imag() == Catch::Approx(direct.imag()).margin(1e-8));
    }
}

TEST_CASE("characteristic exponent of stable measures matches the closed form") {
    SECTION("symmetric alpha = 1 is real and negative") {
        const StableParams p{1.0, 0.5, 0.5};
        const IDTriplet triplet{0.0, 0.0, stable_measure(p)};
        for (double theta : {0.5, 1.0, 2.0}) {
            const auto psi = char_exponent(triplet, theta);
            const auto closed = stable_char_exponent(p, theta);
            CHECK(psi.real() < 0.0);
            CHECK(psi.real() == Catch::Approx(closed.real()).margin(2e-6));
            CHECK(psi.imag() == Catch::Approx(0.0).margin(2e-6));
        }
    }
    SECTION("asymmetric alpha = 1.2 and 0.8") {
        for (const StableParams p : {StableParams{1.2, 2.0, 1.0}, StableParams{0.8, 1.0, 0.3}}) {
            const IDTriplet triplet{0.0, 0.0, stable_measure(p)};
            for (double theta : {0.5, 1.5}) {
                const auto psi = char_exponent(triplet, theta);
                const auto closed = stable_char_exponent(p, theta);
                CHECK(psi.real() == Catch::Approx(closed.real()).margin(5e-5));
                CHECK(psi.imag() == Catch::Approx(closed.imag()).margin(5e-5));
            }
        }
    }
}

TEST_CASE("stable sampler") {
    SECTION("symmetric law is centered at 0") {
        const StableParams p{1.2, 0.5, 0.5};
        const std::size_t n = 100000;
        std::vector<double> sample(n);
        Stream rng(67, 0);
        for (auto& x : sample) x = sample_stable(p, rng);
        std::sort(sample.begin(), sample.end());
        const double median = 0.5 * (sample[n / 2 - 1] + sample[n / 2]);
        CHECK(std::fabs(median) < 0.02);
    }
    SECTION("one-sided alpha < 1 is supported on a half line") {
        const StableParams p{0.5, 1.0, 0.0};
        const double shift = stable_location_shift(p);
        Stream rng(71, 0);
        for (int i = 0; i < 20000; ++i) {
            CHECK(sample_stable(p, rng) - shift >= 0.0);
        }
    }
    SECTION("tail equivalence: P(|Z|>x) x^alpha approaches c_+ + c_-") {
        const StableParams p{1.2, 0.5, 0.5};
        const std::size_t n = 1000000;
        std::vector<double> abs_z(n);
        Stream rng(73, 0);
        for (auto& x : abs_z) x = std::fabs(sample_stable(p, rng));
        std::sort(abs_z.begin(), abs_z.end());
        for (double x : {10.0, 20.0, 50.0}) {
            const auto it = std::upper_bound(abs_z.begin(), abs_z.end(), x);
            const double frac =
                static_cast<double>(abs_z.end() - it) / static_cast<double>(n);
            CHECK(frac * std::pow(x, p.alpha) == Catch::Approx(1.0).epsilon(0.10));
        }
    }
    SECTION("empirical characteristic function matches exp(psi)") {
        const StableParams p{1.0, 0.5, 0.5};
        const std::size_t n = 100000;
        std::vector<double> z(n);
        Stream rng(79, 0);
        for (auto& x : z) x = sample_stable(p, rng);
        for (double theta : {0.5, 1.0, 2.0}) {
            std::complex<double> ecf{0.0, 0.0};
            for (double x : z) ecf += std::exp(std::complex<double>(0.0, theta * x));
            ecf /= static_cast<double>(n);
            const auto target = std::exp(stable_char_exponent(p, theta));
            CHECK(std::abs(ecf - target) < 3.0 / std::sqrt(static_cast<double>(n)));
        }
    }
}

TEST_CASE("characteristic function consistency for sampled triplets") {
    // |empirical CF - exp(psi)| <= 3/sqrt(N) pointwise on a theta grid.
    const std::vector<double> thetas{0.5, 1.0, 2.0};
    const std::size_t n = 100000;
    SECTION("compound Poisson triplet via the path sampler") {
        const LevyMeasureSpec lam(0.0, 0.0, TailFunction::step_atoms({{0.6, 0.8}, {1.4, 0.3}}),
                                  TailFunction::step_atoms({{0.9, 0.5}}));
        const IDTriplet triplet{0.2, 0.0,
                                LevyMeasureSpec(0.2, 0.0, lam.plus_tail(), lam.minus_tail())};
        std::vector<double> draws(n);
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(501, "cf_atoms", i);
            draws[i] = sample_path(triplet.lambda, 1.0, 0.5, rng).value;
        }
        for (double theta : thetas) {
            std::complex<double> ecf{0.0, 0.0};
            for (double x : draws) ecf += std::exp(std::complex<double>(0.0, theta * x));
            ecf /= static_cast<double>(n);
            const auto target = std::exp(char_exponent(triplet, theta));
            CHECK(std::abs(ecf - target) < 3.0 / std::sqrt(static_cast<double>(n)));
        }
    }
    SECTION("capped power triplet") {
        const IDTriplet triplet{0.0, 0.0,
                                LevyMeasureSpec(0.0, 0.0,
                                                TailFunction::power_law_capped(0.5, 0.6, 2.0),
                                                TailFunction::power_law_capped(0.5, 0.6, 2.0))};
        std::vector<double> draws(n);
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(503, "cf_capped", i);
            draws[i] = sample_path(triplet.lambda, 1.0, 1e-4, rng).value;
        }
        for (double theta : thetas) {
            std::complex<double> ecf{0.0, 0.0};
            for (double x : draws) ecf += std::exp(std::complex<double>(0.0, theta * x));
            ecf /= static_cast<double>(n);
            const auto target = std::exp(char_exponent(triplet, theta));
            CHECK(std::abs(ecf - target) < 3.0 / std::sqrt(static_cast<double>(n)));
        }
    }
}

TEST_CASE("studentized path values match the polar stable sampler") {
    // Pure power-law measure at small t: value / t^{1/alpha} against direct
    // stable draws; the two routes share no sampling machinery.
    const StableParams p{1.2, 0.5, 0.5};
    const auto m = stable_measure(p);
    const double t = 0.001;
    const std::size_t n = 40000;
    std::vector<double> path_vals(n), polar(n);
    const double eps = harness_cutoff(m, t, 0, 512.0);
    const double scale = std::pow(t, 1.0 / p.alpha);
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng = Stream::keyed(509, "selfsim_path", i);
        path_vals[i] = sample_path(m, t, eps, rng).value / scale;
        Stream rng2 = Stream::keyed(521, "selfsim_cms", i);
        polar[i] = sample_stable(p, rng2);
    }
    const auto ks = ks_two_sample(EmpiricalDistribution(std::move(path_vals)),
                                  EmpiricalDistribution(std::move(polar)));
    CHECK(ks.distance < 0.02);
}

TEST_CASE("norming pair") {
    SECTION("power law closed form") {
        const LevyMeasureSpec m(0.0, 0.0, TailFunction::power_law(0.5, 0.5),
                                TailFunction::power_law(0.5, 0.5));
        const auto nrm = norming(m, 0.01);
        CHECK(nrm.b_t == Catch::Approx(1e-4).epsilon(1e-10));
    }
    SECTION("symmetric measures center at t gamma") {
        const LevyMeasureSpec m(0.4, 0.0, TailFunction::power_law(1.0, 1.2),
                                TailFunction::power_law(1.0, 1.2));
        const auto nrm = norming(m, 0.001);
        CHECK(nrm.a_t == Catch::Approx(0.001 * 0.4));
    }
    SECTION("norming ratio drifts to 1 along 1/n") {
        const LevyMeasureSpec m(0.0, 0.0, TailFunction::power_law(0.5, 1.2),
                                TailFunction::power_law(0.5, 1.2));
        for (double n : {100.0, 1000.0, 10000.0}) {
            const double ratio = norming(m, 1.0 / n).b_t / norming(m, 1.0 / (n + 1.0)).b_t;
            CHECK(ratio >= 0.99);
            CHECK(ratio <= 1.01);
        }
    }
    SECTION("regular variation of the norming is exact for power laws") {
        const LevyMeasureSpec m(0.0, 0.0, TailFunction::power_law(2.0, 0.8),
                                TailFunction::power_law(1.0, 0.8));
        for (double lam : {2.0, 10.0}) {
            const double t = 1e-3;
            CHECK(norming(m, lam * t).b_t / norming(m, t).b_t ==
                  Catch::Approx(std::pow(lam, 1.0 / 0.8)).epsilon(1e-9));
        }
    }
    SECTION("degenerate and finite-activity measures are refused") {
        const LevyMeasureSpec atoms(0.0, 0.0, TailFunction::step_atoms({{1.0, 1.0}}),
                                    TailFunction::zero());
        CHECK_THROWS_AS(norming(atoms, 0.1), std::domain_error);
    }
}

TEST_CASE("trimmed stable sampling") {
    SECTION("no trimming reproduces the polar sampler") {
        const StableParams p{1.2, 0.5, 0.5};
        const std::size_t n = 20000;
        std::vector<double> rep(n), cms(n);
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(83, "ts_rep", i);
            rep[i] = sample_trimmed_stable_asym(p, 0, 0, rng);
            Stream rng2 = Stream::keyed(89, "ts_cms", i);
            cms[i] = sample_stable(p, rng2);
        }
        const auto ks = ks_two_sample(EmpiricalDistribution(std::move(rep)),
                                      EmpiricalDistribution(std::move(cms)));
        CHECK(ks.distance < 0.02);
    }
    SECTION("largest-jump coordinate at r=1 is Frechet") {
        const StableParams p{0.5, 1.0, 0.0};
        const auto m = stable_measure(p);
        const std::size_t n = 20000;
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(97, "frechet", i);
            w[i] = sample_trimmed_asym_rep(m, 1.0, 1, 0, rng).rth_positive_jump;
        }
        std::sort(w.begin(), w.end());
        const double d = ks_one_sample(
            w, [&](double y) { return std::exp(-p.c_plus * std::pow(y, -p.alpha)); });
        CHECK(d < 0.015);
    }
    SECTION("coupled path trimming is dominated and recursive") {
        const StableParams p{1.2, 0.5, 0.5};
        for (std::size_t i = 0; i < 300; ++i) {
            Stream rng = Stream::keyed(101, "couple", i);
            const auto path = sample_stable_path(p, rng, 128.0, 4);
            const TrimTable table(path, 3, 3, 3);
            // Removing positive jumps only can merely lower the value.
            CHECK(table.trimmed_asymmetric(1, 0) <= path.value);
            CHECK(table.trimmed_asymmetric(2, 0) <= table.trimmed_asymmetric(1, 0));
            // Coupled recursion across r at fixed s.
            const auto r2 = trim_asymmetric(path, 2, 1);
            const auto r1 = trim_asymmetric(path, 1, 1);
            CHECK(r1.trimmed_value == Catch::Approx(r2.trimmed_value +
                                                    r2.removed_positive.back())
                                          .margin(1e-12));
        }
    }
}
