#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qspi/decision.hpp"

using namespace qspi;

namespace {

// W(x) by bisection on w e^w = x, independent of the Halley production path.
double lambert_w_bisect(double x) {
    double lo = 0.0, hi = std::max(1.0, std::log(x + 1.0) + 1.0);
    while (hi * std::exp(hi) < x) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::exp(mid) < x) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ResponseSpectrum degree1_spectrum(double theta0, double kappa) {
    const PhaseSequence phases({theta0, 0.0}, kappa, M_PI / (4.0 * kappa));
    return response_coefficients(build_laurent_direct(phases), kappa);
}

}  // namespace

TEST_CASE("ideal response") {
    const DecisionProblem dp(1.0, M_PI / 4.0, 1);
    CHECK(ideal_response(0.0, dp) == 1);
    CHECK(ideal_response(dp.beta_th / 2.0, dp) == 1);
    CHECK(ideal_response(M_PI / 2.0 - 1e-9, dp) == 0);
    CHECK(ideal_response(dp.beta_th, dp) == 0);  // boundary maps to 0
    // Period reduction brings far arguments back into the cell.
    CHECK(ideal_response(0.1 + 3.0 * M_PI, dp) == 1);
    CHECK(ideal_response(-0.1, dp) == 1);
}

TEST_CASE("h_s closed form") {
    const DecisionProblem quarter(1.0, M_PI / 4.0, 1);
    CHECK(h_s(0, quarter) ==
          doctest::Approx(1.0 - 2.0 * quarter.kappa * quarter.beta_th / M_PI)
              .epsilon(1e-14));
    CHECK(h_s(1, quarter) == doctest::Approx(0.5 - 2.0 / M_PI).epsilon(1e-14));
    for (int s : {1, 2, 5}) {
        CHECK(h_s(s, quarter) == h_s(-s, quarter));
    }
}

TEST_CASE("degree-1 decision errors") {
    const double kappa = 1.0;
    const DecisionProblem dp(kappa, M_PI / (4.0 * kappa), 1);

    const double best = perr_analytic(degree1_spectrum(M_PI / 4.0, kappa), dp);
    CHECK(best == doctest::Approx(0.5 - 1.0 / M_PI).epsilon(1e-12));

    const double naive = perr_analytic(degree1_spectrum(0.0, kappa), dp);
    CHECK(naive == doctest::Approx(1.0 - 2.0 * kappa * dp.beta_th / M_PI).epsilon(1e-12));
}

TEST_CASE("perr_analytic validates inputs") {
    const DecisionProblem dp(1.0, M_PI / 4.0, 2);
    CHECK_THROWS_AS(perr_analytic(degree1_spectrum(0.3, 1.0), dp),
                    std::invalid_argument);
    const DecisionProblem mismatched(0.5, M_PI / 4.0, 1);
    CHECK_THROWS_AS(perr_analytic(degree1_spectrum(0.3, 1.0), mismatched),
                    std::invalid_argument);
}

TEST_CASE("perr_quadrature on constant responses") {
    const DecisionProblem dp(0.7, 0.9, 1);
    const double fraction = 2.0 * dp.kappa * dp.beta_th / M_PI;

    const ErrorBreakdown always = perr_quadrature([](double) { return 1.0; }, dp);
    CHECK(always.p_fn == doctest::Approx(0.0));
    CHECK(always.p_fp == doctest::Approx(1.0 - fraction).epsilon(1e-9));

    const ErrorBreakdown never = perr_quadrature([](double) { return 0.0; }, dp);
    CHECK(never.p_fn == doctest::Approx(fraction).epsilon(1e-9));
    CHECK(never.p_fp == doctest::Approx(0.0));

    const DecisionProblem quarter(1.0, M_PI / 4.0, 1);
    const ErrorBreakdown cat = perr_quadrature(
        [](double beta) { return std::pow(std::cos(beta), 2); }, quarter);
    CHECK(cat.p_err == doctest::Approx(0.5 - 1.0 / M_PI).epsilon(1e-9));
    CHECK(std::abs(cat.p_err - (cat.p_fn + cat.p_fp)) <= 1e-10);
}

TEST_CASE("analytic and quadrature errors agree") {
    CounterRng rng(47u);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + trial % 9;
        const double kappa = 0.05 + 1.2 * rng.next_double();
        const double beta_th = (0.2 + 0.6 * rng.next_double()) * M_PI / (2.0 * kappa);
        const DecisionProblem dp(kappa, beta_th, d);
        const PhaseSequence phases = testing::random_phases(d, kappa, beta_th, rng);
        const ResponseSpectrum rs =
            response_coefficients(build_laurent_direct(phases), kappa);
        const double analytic = perr_analytic(rs, dp);
        const ErrorBreakdown quad = perr_quadrature(
            [&](double beta) { return response_probability(rs, beta); }, dp);
        CHECK(std::abs(analytic - quad.p_err) <= 1e-8);
        CHECK(analytic >= 0.0);
        CHECK(analytic <= 1.0);
    }
}

TEST_CASE("cat closed form") {
    const double kappa = 1.3;
    const DecisionProblem dp(kappa, 0.8, 1);
    CHECK(cat_perr(M_PI / 4.0, dp) ==
          doctest::Approx(0.5 - std::sin(2.0 * kappa * dp.beta_th) / M_PI)
              .epsilon(1e-14));
    CHECK(cat_perr(0.0, dp) ==
          doctest::Approx(1.0 - 2.0 * kappa * dp.beta_th / M_PI).epsilon(1e-14));
}

TEST_CASE("degree-1 identity pins the sinc convention") {
    const double kappa = 0.9;
    const DecisionProblem dp(kappa, 1.1, 1);
    for (int i = 0; i <= 40; ++i) {
        const double theta0 = -M_PI / 2.0 + i * M_PI / 40.0;
        const double analytic = perr_analytic(degree1_spectrum(theta0, kappa), dp);
        CHECK(std::abs(analytic - cat_perr(theta0, dp)) <= 1e-10);
    }
}

TEST_CASE("cat optimum sits at pi/4 across the parameter grid") {
    // Below the crossover threshold, where the interferometric protocol is
    // the relevant design; beyond it the trivial theta_0 = 0 guess wins by
    // construction (that boundary is pinned by the crossover test).
    for (int i = 1; i <= 10; ++i) {
        for (int j = 1; j <= 10; ++j) {
            const double kappa = 0.1 + 0.25 * i;
            const double beta_th = (j / 11.0) * crossover_threshold(kappa);
            const DecisionProblem dp(kappa, beta_th, 1);
            double best_theta = 0.0;
            double best = cat_perr(0.0, dp);
            for (int k = 0; k <= 200; ++k) {
                const double theta = k * (M_PI / 2.0) / 200.0;
                const double value = cat_perr(theta, dp);
                if (value < best) {
                    best = value;
                    best_theta = theta;
                }
            }
            CHECK(std::abs(best_theta - M_PI / 4.0) <= M_PI / 2.0 / 200.0 + 1e-12);
        }
    }
}

TEST_CASE("crossover threshold") {
    const double chi = 2.0 * crossover_threshold(1.0);
    CHECK(std::abs(M_PI / 2.0 - chi + std::sin(chi)) <= 1e-11);
    CHECK(chi == doctest::Approx(2.3098814600100575).epsilon(1e-10));
    CHECK(crossover_threshold(2.0) ==
          doctest::Approx(0.5 * crossover_threshold(1.0)).epsilon(1e-12));

    const double kappa = 1.0;
    const DecisionProblem at_crossing(kappa, crossover_threshold(kappa), 1);
    CHECK(std::abs(cat_perr(M_PI / 4.0, at_crossing) - cat_perr(0.0, at_crossing)) <=
          1e-10);
}

TEST_CASE("sign-sin construction of the ideal response") {
    const DecisionProblem dp(1.0, M_PI / 4.0, 1);
    CHECK(ideal_sign_sin_response(0.0, dp) == doctest::Approx(1.0));
    CHECK(ideal_sign_sin_response(dp.beta_th + 0.1, dp) == doctest::Approx(0.0));
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const double beta = -M_PI / 2.0 + i * M_PI / 1000.0;
        const double to_edge =
            std::min(std::abs(std::abs(beta) - dp.beta_th),
                     std::abs(std::abs(beta) - M_PI / 2.0));
        if (to_edge < 1e-9) continue;
        CHECK(ideal_sign_sin_response(beta, dp) ==
              doctest::Approx(static_cast<double>(ideal_response(beta, dp))));
        ++checked;
    }
    CHECK(checked >= 990);
}

TEST_CASE("lambert w") {
    CHECK(lambert_w(0.0) == 0.0);
    CHECK(lambert_w(M_E) == doctest::Approx(1.0).epsilon(1e-13));
    const double w10 = lambert_w(10.0);
    CHECK(std::abs(w10 * std::exp(w10) - 10.0) <= 1e-11);
    for (double x : {1e-6, 0.1, 3.0, 1e3, 1e6}) {
        CHECK(lambert_w(x) == doctest::Approx(lambert_w_bisect(x)).epsilon(1e-11));
    }
}

TEST_CASE("degree bound") {
    // Frozen from an independent long-double evaluation with bisected W.
    auto reference = [](double eps, double sigma) {
        const double w1 = lambert_w_bisect(8.0 / (M_PI * eps * eps));
        const double w2 = lambert_w_bisect(512.0 / (M_E * M_E * M_PI * eps * eps));
        const double first = (M_E / sigma) * std::sqrt(w1 * w2);
        const double second = std::sqrt(2.0) *
                              lambert_w_bisect(8.0 * std::sqrt(2.0) /
                                               (std::sqrt(M_PI) * sigma * eps) *
                                               std::sqrt(w1));
        return 2 * static_cast<int>(std::ceil(std::max(first, second))) + 1;
    };
    CHECK(degree_bound(0.1, 0.1) == reference(0.1, 0.1));
    CHECK(degree_bound(0.01, 0.05) == reference(0.01, 0.05));

    for (double eps : {0.02, 0.1, 0.3}) {
        for (double sigma : {0.02, 0.1, 0.3}) {
            const int gamma = degree_bound(eps, sigma);
            CHECK(gamma % 2 == 1);
            CHECK(gamma >= degree_bound(eps, 2.0 * sigma));
            CHECK(gamma >= degree_bound(2.0 * eps, sigma));
        }
    }
}

TEST_CASE("predicted perr model") {
    CHECK(predicted_perr(4, 1.0, 0.0) == 0.0);
    CHECK(predicted_perr(6, 0.5, 1.0) < predicted_perr(3, 0.5, 1.0));
    CHECK_THROWS_AS(predicted_perr(1, 1.0, 1.0), std::invalid_argument);
}
