#include <catch2/catch_amalgamated.hpp>

#include "levytrim/levytrim.hpp"
#include "oracles.hpp"

using namespace levytrim;

namespace {

LevyMeasureSpec symmetric_power(double c_side, double alpha) {
    return LevyMeasureSpec(0.0, 0.0, TailFunction::power_law(c_side, alpha),
                           TailFunction::power_law(c_side, alpha));
}

const LevyMeasureSpec kStaircase(0.0, 0.0, TailFunction::step_atoms({{1.0, 2.0}, {2.0, 1.0}}),
                                 TailFunction::zero());

}  // namespace

TEST_CASE("tie overshoot rho") {
    SECTION("diffuse tails have no overshoot") {
        const auto m = symmetric_power(1.0, 1.2);
        for (double w : {0.1, 1.0, 17.0}) CHECK(tie_rho(m, Side::plus, w) == 0.0);
    }
    SECTION("staircase overshoots land on the atoms") {
        CHECK(tie_rho(kStaircase, Side::plus, 1.5) == Catch::Approx(1.5));
        CHECK(tie_rho(kStaircase, Side::plus, 0.5) == Catch::Approx(0.5));
    }
}

TEST_CASE("tie split kappa") {
    SECTION("diffuse measure splits nothing") {
        const auto m = symmetric_power(1.0, 1.2);
        CHECK(tie_kappa(m, Side::plus, 0.7) == 0.0);
        CHECK(tie_kappa(m, Side::minus, 0.7) == 0.0);
    }
    SECTION("equal atom masses split the overshoot in half") {
        const LevyMeasureSpec m(0.0, 0.0, TailFunction::step_atoms({{1.0, 1.0}}),
                                TailFunction::step_atoms({{1.0, 1.0}}));
        // two-sided tail: 2 below 1, 0 at 1; v=0.5 -> inverse 1, overshoot 1.5
        CHECK(tie_kappa(m, Side::plus, 0.5) == Catch::Approx(0.75));
        CHECK(tie_kappa(m, Side::minus, 0.5) == Catch::Approx(0.75));
    }
    SECTION("one-sided atom takes the whole overshoot") {
        const LevyMeasureSpec m(0.0, 0.0, TailFunction::step_atoms({{1.0, 1.0}}),
                                TailFunction::zero());
        CHECK(tie_kappa(m, Side::plus, 0.4) == Catch::Approx(0.6));
        CHECK(tie_kappa(m, Side::minus, 0.4) == 0.0);
    }
}

TEST_CASE("order statistic exceedance probabilities") {
    const LevyMeasureSpec unit_tail(0.0, 0.0, TailFunction::step_atoms({{2.0, 1.0}}),
                                    TailFunction::zero());
    // tail_plus(1) = 1
    CHECK(order_statistic_exceedance(unit_tail, 0.1, 0, Side::plus, 1.0) ==
          Catch::Approx(0.0951626).epsilon(1e-5));
    CHECK(order_statistic_exceedance(unit_tail, 0.1, 2, Side::plus, 3.0) == 0.0);
    const LevyMeasureSpec two_tail(0.0, 0.0, TailFunction::step_atoms({{2.0, 2.0}}),
                                   TailFunction::zero());
    CHECK(order_statistic_exceedance(two_tail, 1.0, 1, Side::plus, 1.0) ==
          Catch::Approx(0.593994).epsilon(1e-5));
}

TEST_CASE("tie draws") {
    SECTION("diffuse measures never produce ties") {
        const auto m = symmetric_power(1.0, 1.2);
        Stream rng(3, 0);
        for (int i = 0; i < 1000; ++i) {
            CHECK(sample_tie_G(m, Side::plus, 1.0, 0.9, rng) == 0.0);
        }
    }
    SECTION("atomic tie mean matches loc * t * rho") {
        // inverse(1.5) = 1, rho = 1.5
        const std::size_t n = 100000;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(5, "tie", i);
            sum += sample_tie_G(kStaircase, Side::plus, 1.0, 1.5, rng);
        }
        const double se = std::sqrt(1.5 / static_cast<double>(n));
        CHECK(std::fabs(sum / static_cast<double>(n) - 1.5) < 3.0 * se);
    }
    SECTION("tie probability vanishes as t drops") {
        double prev = 1.0;
        for (double t : {1.0, 0.1, 0.01}) {
            const std::size_t n = 20000;
            std::size_t nonzero = 0;
            for (std::size_t i = 0; i < n; ++i) {
                Stream rng = Stream::keyed(7, "tie_t" + std::to_string(t), i);
                nonzero += sample_tie_G(kStaircase, Side::plus, t, 1.5, rng) != 0.0;
            }
            const double p_hat = static_cast<double>(nonzero) / static_cast<double>(n);
            const double p_exact = 1.0 - std::exp(-t * 1.5);
            CHECK(std::fabs(p_hat - p_exact) <
                  3.0 * std::sqrt(p_exact * (1.0 - p_exact) / static_cast<double>(n)) + 1e-12);
            CHECK(p_hat < prev);
            prev = p_hat;
        }
    }
}

TEST_CASE("truncated drift indicator regimes") {
    // gamma 0.5; one-sided compensators have closed forms for alpha=1/2:
    // int_[w,1] x dPi = c (1 - sqrt(w)).
    const LevyMeasureSpec m(0.5, 0.0, TailFunction::power_law(1.0, 0.5),
                            TailFunction::power_law(2.0, 0.5));
    SECTION("both windows above 1: drift untouched") {
        CHECK(truncated_drift(m, 1.5, 2.5) == Catch::Approx(0.5));
    }
    SECTION("positive window active") {
        CHECK(truncated_drift(m, 0.25, 1.5) == Catch::Approx(0.5 - (1.0 - 0.5)));
    }
    SECTION("negative window active") {
        CHECK(truncated_drift(m, 1.5, 0.25) == Catch::Approx(0.5 + 2.0 * (1.0 - 0.5)));
    }
    SECTION("both active") {
        CHECK(truncated_drift(m, 0.25, 0.04) ==
              Catch::Approx(0.5 - (1.0 - 0.5) + 2.0 * (1.0 - 0.2)));
    }
    SECTION("atom exactly at the window is compensated") {
        const LevyMeasureSpec ma(0.0, 0.0,
                                 TailFunction::composite({TailFunction::power_law(1.0, 0.5),
                                                          TailFunction::step_atoms({{0.5, 2.0}})}),
                                 TailFunction::zero());
        // closed interval [0.5, 1]: power part (1-sqrt(0.5)) plus atom 0.5*2
        CHECK(truncated_drift(ma, 0.5, 9.0) ==
              Catch::Approx(0.0 - ((1.0 - std::sqrt(0.5)) + 1.0)));
    }
}

TEST_CASE("truncated component: windows and moments") {
    const LevyMeasureSpec m(0.0, 0.0, TailFunction::power_law(1.0, 0.5), TailFunction::zero());
    SECTION("tiny window concentrates near beta t with matched variance") {
        const double level = 1e5;
        const auto triplet = make_truncated_triplet(m, 1.0, 0.0, level);
        CHECK(triplet.window_plus == Catch::Approx(1e-10).epsilon(1e-9));
        const std::size_t n = 4000;
        // Center by the known drift before accumulating, otherwise the
        // variance of the tiny fluctuations drowns in cancellation.
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(11, "trunc", i);
            const double d = sample_truncated_ID(triplet, rng) - triplet.beta * 1.0;
            sum += d;
            sum2 += d * d;
        }
        const double mean = sum / static_cast<double>(n);
        const double var = sum2 / static_cast<double>(n) - mean * mean;
        CHECK(mean == Catch::Approx(0.0).margin(4e-9));
        const double var_expect = triplet.lambda.V(triplet.window_plus);
        CHECK(var == Catch::Approx(var_expect).epsilon(0.15));
    }
    SECTION("windows above 1 reduce the drift to gamma") {
        const auto triplet = make_truncated_triplet(m, 1.0, 0.0, m.tail(Side::plus, 2.0));
        CHECK(triplet.window_plus == Catch::Approx(2.0));
        CHECK(triplet.beta == Catch::Approx(m.gamma()));
    }
}

TEST_CASE("vanishing truncation levels recover the untrimmed law") {
    const auto m = symmetric_power(0.5, 1.2);
    const double t = 0.01;
    const std::size_t n = 20000;
    std::vector<double> truncated(n), plain(n);
    // Levels so small that the windows sit far beyond every sampled jump.
    const auto triplet = make_truncated_triplet(m, t, 1e-9, 1e-9);
    const double eps = harness_cutoff(m, t, 0);
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng = Stream::keyed(43, "cover_trunc", i);
        truncated[i] = sample_truncated_ID(triplet, rng);
        Stream rng2 = Stream::keyed(47, "cover_plain", i);
        plain[i] = sample_path(m, t, eps, rng2).value;
    }
    const auto ks = ks_two_sample(EmpiricalDistribution(std::move(truncated)),
                                  EmpiricalDistribution(std::move(plain)));
    CHECK(ks.distance < 0.025);
}

TEST_CASE("asymmetric representation marginals and cross-validation") {
    const auto m = symmetric_power(0.5, 1.2);
    const double t = 0.01;
    const std::size_t n = 20000;

    SECTION("boundary coordinate follows the order-statistic law") {
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(13, "rep_marg", i);
            w[i] = sample_trimmed_asym_rep(m, t, 1, 0, rng).rth_positive_jump;
        }
        std::sort(w.begin(), w.end());
        const double d = ks_one_sample(w, [&](double y) {
            return 1.0 - order_statistic_exceedance(m, t, 0, Side::plus, y);
        });
        CHECK(d < 0.015);
    }

    SECTION("representation equals path trimming in law, (r,s)=(2,1)") {
        std::vector<double> rep(n), direct(n);
        const double eps = harness_cutoff(m, t, 3);
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(17, "rep_x", i);
            rep[i] = sample_trimmed_asym_rep(m, t, 2, 1, rng).trimmed_value;
            Stream rng2 = Stream::keyed(19, "path_x", i);
            direct[i] = trim_asymmetric(sample_path(m, t, eps, rng2), 2, 1).trimmed_value;
        }
        const auto ks = ks_two_sample(EmpiricalDistribution(std::move(rep)),
                                      EmpiricalDistribution(std::move(direct)));
        CHECK(ks.distance < 0.025);
    }

    SECTION("diffuse measures have identically zero tie terms") {
        for (std::size_t i = 0; i < 500; ++i) {
            Stream rng = Stream::keyed(23, "rep_tie", i);
            CHECK_FALSE(sample_trimmed_asym_rep(m, t, 2, 1, rng).tie_nonzero);
        }
    }

    SECTION("trimming a finite-activity side is refused") {
        const LevyMeasureSpec one_sided(0.0, 0.0, TailFunction::power_law(1.0, 1.2),
                                        TailFunction::zero());
        Stream rng(1, 0);
        CHECK_THROWS_AS(sample_trimmed_asym_rep(one_sided, t, 0, 1, rng), std::domain_error);
        CHECK_NOTHROW(sample_trimmed_asym_rep(one_sided, t, 1, 0, rng));
    }
}

TEST_CASE("modulus representation marginals and cross-validation") {
    const auto m = symmetric_power(0.5, 1.2);
    const double t = 0.01;
    const std::size_t n = 20000;

    SECTION("magnitude coordinate follows the two-sided order-statistic law") {
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(29, "mod_marg", i);
            w[i] = sample_trimmed_mod_rep(m, t, 1, rng).rth_modulus_magnitude;
        }
        std::sort(w.begin(), w.end());
        const double d = ks_one_sample(w, [&](double y) {
            return std::exp(-t * m.tail(Side::both, y));  // 1 - (1 - e^{-t tail})
        });
        CHECK(d < 0.015);
    }

    SECTION("representation equals path trimming in law, r=2") {
        std::vector<double> rep(n), direct(n);
        const double eps = harness_cutoff(m, t, 3);
        for (std::size_t i = 0; i < n; ++i) {
            Stream rng = Stream::keyed(31, "mod_x", i);
            rep[i] = sample_trimmed_mod_rep(m, t, 2, rng).trimmed_value;
            Stream rng2 = Stream::keyed(37, "mod_path", i);
            direct[i] = trim_modulus(sample_path(m, t, eps, rng2), 2).trimmed_value;
        }
        const auto ks = ks_two_sample(EmpiricalDistribution(std::move(rep)),
                                      EmpiricalDistribution(std::move(direct)));
        CHECK(ks.distance < 0.025);
    }
}

TEST_CASE("four-way sampler agreement on a spectrally positive measure") {
    // With no negative jumps, removing the largest jump and removing the
    // largest modulus jump coincide, so all four samplers target one law.
    const LevyMeasureSpec m(0.0, 0.0, TailFunction::power_law(1.0, 0.8), TailFunction::zero());
    const double t = 0.01;
    const std::size_t n = 100000;
    std::vector<std::vector<double>> laws(4, std::vector<double>(n));
    const double eps = harness_cutoff(m, t, 2);
    for (std::size_t i = 0; i < n; ++i) {
        Stream r0 = Stream::keyed(401, "fw/asym_path", i);
        laws[0][i] = trim_asymmetric(sample_path(m, t, eps, r0), 1, 0).trimmed_value;
        Stream r1 = Stream::keyed(402, "fw/mod_path", i);
        laws[1][i] = trim_modulus(sample_path(m, t, eps, r1), 1).trimmed_value;
        Stream r2 = Stream::keyed(403, "fw/asym_rep", i);
        laws[2][i] = sample_trimmed_asym_rep(m, t, 1, 0, r2).trimmed_value;
        Stream r3 = Stream::keyed(404, "fw/mod_rep", i);
        laws[3][i] = sample_trimmed_mod_rep(m, t, 1, r3).trimmed_value;
    }
    std::vector<EmpiricalDistribution> dists;
    for (auto& v : laws) dists.emplace_back(std::move(v));
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = a + 1; b < 4; ++b) {
            CHECK(ks_two_sample(dists[a], dists[b]).distance < 0.02);
        }
    }
}

TEST_CASE("truncated innovations are independent of the conditioning level") {
    // Conditional on the level, the truncated component is a fresh draw: its
    // standardized innovation must be uncorrelated with the level.
    const auto m = symmetric_power(0.5, 1.2);
    const double t = 0.01;
    const std::vector<double> levels{30.0, 100.0, 300.0, 1000.0};
    std::vector<double> lv, residual;
    for (std::size_t li = 0; li < levels.size(); ++li) {
        std::vector<double> draws(2000);
        const auto triplet = make_truncated_triplet(m, t, levels[li] / t, levels[li] / t);
        for (std::size_t i = 0; i < draws.size(); ++i) {
            Stream rng = Stream::keyed(41, "indep" + std::to_string(li), i);
            draws[i] = sample_truncated_ID(triplet, rng);
        }
        double mean = 0.0, var = 0.0;
        for (double d : draws) mean += d;
        mean /= static_cast<double>(draws.size());
        for (double d : draws) var += (d - mean) * (d - mean);
        var /= static_cast<double>(draws.size() - 1);
        for (double d : draws) {
            lv.push_back(static_cast<double>(li));
            residual.push_back((d - mean) / std::sqrt(var));
        }
    }
    double mean_l = 0.0;
    for (double v : lv) mean_l += v;
    mean_l /= static_cast<double>(lv.size());
    double cov = 0.0, var_l = 0.0;
    for (std::size_t i = 0; i < lv.size(); ++i) {
        cov += (lv[i] - mean_l) * residual[i];
        var_l += (lv[i] - mean_l) * (lv[i] - mean_l);
    }
    const double corr = cov / std::sqrt(var_l * static_cast<double>(lv.size()));
    CHECK(std::fabs(corr) < 3.0 / std::sqrt(static_cast<double>(lv.size())));
}
