#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "levytrim/levytrim.hpp"
#include "oracles.hpp"

using namespace levytrim;

namespace {

LevyMeasureSpec symmetric_power(double c_side, double alpha) {
    return LevyMeasureSpec(0.0, 0.0, TailFunction::power_law(c_side, alpha),
                           TailFunction::power_law(c_side, alpha));
}

struct ScriptedExponentials {
    std::vector<double> values;
    std::size_t next = 0;
    double exponential() { return values.at(next++); }
};

}  // namespace

TEST_CASE("ordered jumps follow the inverse-tail representation") {
    const LevyMeasureSpec m(0.0, 0.0, TailFunction::power_law(1.0, 1.0), TailFunction::zero());
    SECTION("scripted level reproduces the inverse") {
        ScriptedExponentials rng{{0.1}, 0};
        const auto mags = sample_ordered_jumps(m, 1.0, 1, Side::plus, rng);
        CHECK(mags[0] == Catch::Approx(10.0));
    }
    SECTION("output is nonincreasing") {
        Stream rng(41, 0);
        for (int rep = 0; rep < 200; ++rep) {
            const auto mags = sample_ordered_jumps(m, 0.05, 6, Side::plus, rng);
            for (std::size_t i = 1; i < mags.size(); ++i) CHECK(mags[i] <= mags[i - 1]);
        }
    }
    SECTION("finite-activity side is refused") {
        const LevyMeasureSpec atoms(0.0, 0.0, TailFunction::step_atoms({{1.0, 1.0}}),
                                    TailFunction::zero());
        Stream rng(1, 0);
        CHECK_THROWS_AS(sample_ordered_jumps(atoms, 1.0, 1, Side::plus, rng), std::domain_error);
    }
}

TEST_CASE("largest jump matches its closed-form law") {
    const auto m = symmetric_power(0.5, 1.2);
    const double t = 0.01;
    const std::size_t n = 20000;
    std::vector<double> sample(n);
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng = Stream::keyed(5, "osjump", i);
        sample[i] = sample_ordered_jumps(m, t, 1, Side::plus, rng)[0];
    }
    std::sort(sample.begin(), sample.end());
    const double d = ks_one_sample(sample, [&](double y) {
        return 1.0 - oracles::gamma_cdf_int(1, t * m.tail(Side::plus, y));
    });
    CHECK(d < 0.015);
}

TEST_CASE("path sampling: counts, decomposition, determinism") {
    SECTION("jump count is Poisson with mean t * tail(eps)") {
        const LevyMeasureSpec m(0.0, 0.0, TailFunction::step_atoms({{1.0, 3.0}}),
                                TailFunction::zero());
        const double t = 2.0;
        const double eps = 0.5;  // tail(0.5) = 3
        const std::size_t n = 100000;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(7, "count", i);
            sum += static_cast<double>(sample_path(m, t, eps, rng).jumps.size());
        }
        const double mean = sum / static_cast<double>(n);
        const double se = std::sqrt(6.0 / static_cast<double>(n));
        CHECK(std::fabs(mean - 6.0) < 3.0 * se);
    }
    SECTION("same seed and stream id give identical paths") {
        const auto m = symmetric_power(0.5, 1.2);
        Stream a = Stream::keyed(9, "det", 42);
        Stream b = Stream::keyed(9, "det", 42);
        const auto pa = sample_path(m, 0.01, 1e-3, a);
        const auto pb = sample_path(m, 0.01, 1e-3, b);
        REQUIRE(pa.jumps.size() == pb.jumps.size());
        CHECK(pa.value == pb.value);
        for (std::size_t i = 0; i < pa.jumps.size(); ++i) {
            CHECK(pa.jumps[i].size == pb.jumps[i].size);
            CHECK(pa.jumps[i].time == pb.jumps[i].time);
        }
    }
    SECTION("value decomposes into its components") {
        const auto m = symmetric_power(0.5, 1.2);
        for (std::size_t i = 0; i < 50; ++i) {
            Stream rng = Stream::keyed(13, "decomp", i);
            const auto p = sample_path(m, 0.02, 1e-3, rng);
            CHECK(p.value == Catch::Approx(p.drift_component + p.gaussian_component +
                                           p.small_component + p.jump_sum())
                                 .margin(1e-12));
            for (const auto& j : p.jumps) {
                CHECK(std::fabs(j.size) > p.epsilon);
                CHECK(j.time > 0.0);
                CHECK(j.time <= p.t);
            }
        }
    }
    SECTION("domain errors") {
        const auto m = symmetric_power(0.5, 1.2);
        Stream rng(1, 0);
        CHECK_THROWS_AS(sample_path(m, -1.0, 0.1, rng), std::domain_error);
        CHECK_THROWS_AS(sample_path(m, 1.0, 0.0, rng), std::domain_error);
    }
}

TEST_CASE("quadratic variation") {
    SECTION("sums squared jumps") {
        PathSample p;
        p.jumps = {{0.1, 2.0}, {0.2, -3.0}};
        CHECK(quadratic_variation(p) == Catch::Approx(13.0));
        p.jumps.clear();
        CHECK(quadratic_variation(p) == 0.0);
    }
    SECTION("mean matches the truncated second moment") {
        // Capped tails keep E[QV] finite: E = t * V(cap).
        const LevyMeasureSpec m(0.0, 0.0, TailFunction::power_law_capped(0.5, 1.2, 0.1),
                                TailFunction::power_law_capped(0.5, 1.2, 0.1));
        const double t = 0.01;
        const double eps = harness_cutoff(m, t, 0);
        const std::size_t n = 10000;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(17, "qv", i);
            sum += quadratic_variation(sample_path(m, t, eps, rng));
        }
        const double expected = t * m.V(0.2);
        CHECK(sum / static_cast<double>(n) == Catch::Approx(expected).epsilon(0.05));
    }
}

TEST_CASE("path top jumps agree in law with the ordered-jump sampler") {
    const auto m = symmetric_power(0.5, 1.2);
    const double t = 0.01;
    const int k = 2;
    const std::size_t n = 20000;
    std::vector<double> from_path(n), from_ordered(n);
    const double eps = harness_cutoff(m, t, k);
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng = Stream::keyed(19, "exch_path", i);
        const auto path = sample_path(m, t, eps, rng);
        double best = 0.0, second = 0.0;
        for (const auto& j : path.jumps) {
            if (j.size > best) {
                second = best;
                best = j.size;
            } else if (j.size > second) {
                second = j.size;
            }
        }
        from_path[i] = second;
        Stream rng2 = Stream::keyed(23, "exch_ord", i);
        from_ordered[i] = sample_ordered_jumps(m, t, k, Side::plus, rng2).back();
    }
    const auto ks = ks_two_sample(EmpiricalDistribution(std::move(from_path)),
                                  EmpiricalDistribution(std::move(from_ordered)));
    CHECK(ks.distance < 0.02);
}

TEST_CASE("diffuse magnitudes are distinct") {
    const auto m = symmetric_power(0.5, 1.2);
    const std::size_t n = 1000000;
    std::vector<double> mags(n);
    Stream rng(31, 0);
    for (std::size_t i = 0; i < n; ++i) {
        mags[i] = m.sampling_inverse(Side::plus, rng.exponential() / 0.01);
    }
    std::sort(mags.begin(), mags.end());
    std::size_t collisions = 0;
    for (std::size_t i = 1; i < n; ++i) collisions += mags[i] == mags[i - 1] ? 1 : 0;
    CHECK(collisions == 0);
}

TEST_CASE("cutoff policies") {
    const auto m = symmetric_power(0.5, 1.2);
    const double t = 0.001;
    const double eps = default_cutoff(m, t);
    CHECK(t * m.tail(Side::both, eps) <= kDefaultMaxExpectedJumps * (1.0 + 1e-9));
    const double eps_h = harness_cutoff(m, t, 3, 256.0);
    const double mean = t * m.tail(Side::both, eps_h);
    CHECK(mean >= 250.0);
    CHECK(mean <= 300.0);
    // Finite activity: cutoff still positive and below every support point.
    const LevyMeasureSpec atoms(0.0, 0.0, TailFunction::step_atoms({{1.0, 1.0}}),
                                TailFunction::step_atoms({{1.0, 1.0}}));
    CHECK(default_cutoff(atoms, 1.0) > 0.0);
}
