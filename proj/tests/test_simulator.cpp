#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "qspi/errors.hpp"
#include "qspi/response.hpp"
#include "qspi/simulator.hpp"

using namespace qspi;

namespace {

Eigen::VectorXcd coherent_vector(std::complex<double> alpha, int truncation) {
    Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(truncation);
    std::complex<double> amp = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < truncation; ++n) {
        vec(n) = amp;
        amp *= alpha / std::sqrt(n + 1.0);
    }
    return vec;
}

Eigen::VectorXcd random_osc(int truncation, CounterRng& rng) {
    Eigen::VectorXcd vec(truncation);
    for (int n = 0; n < truncation; ++n) {
        // Energy-bounded profile so truncation effects stay negligible.
        const double scale = std::exp(-0.25 * n);
        vec(n) = scale * std::complex<double>(rng.next_double() - 0.5,
                                              rng.next_double() - 0.5);
    }
    vec /= vec.norm();
    return vec;
}

}  // namespace

TEST_CASE("qubit rotation gate") {
    HybridFockState state = HybridFockState::vacuum(16);
    gate_qubit_rotation(state, 0.0);
    CHECK(state.down(0) == std::complex<double>(1.0, 0.0));
    CHECK(state.up.norm() == 0.0);

    gate_qubit_rotation(state, M_PI / 2.0);
    CHECK(std::abs(state.up(0) - std::complex<double>(0.0, 1.0)) <= 1e-12);
    CHECK(std::abs(state.down(0)) <= 1e-12);

    HybridFockState back = HybridFockState::vacuum(16);
    gate_qubit_rotation(back, 0.77);
    gate_qubit_rotation(back, -0.77);
    CHECK(std::abs(back.down(0) - std::complex<double>(1.0, 0.0)) <= 1e-12);
    CHECK(back.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conditional displacement gate") {
    HybridFockState state = HybridFockState::vacuum(64);
    gate_conditional_displacement(state, 0.0);
    CHECK(std::abs(state.down(0) - std::complex<double>(1.0, 0.0)) <= 1e-12);

    const double kappa = 0.8;
    gate_conditional_displacement(state, kappa);
    // Down carries sigma_z = +1, so its branch becomes the coherent state of
    // amplitude +i kappa / sqrt(2); probabilities are even in kappa, so the
    // opposite basis map would only flip this sign.
    const Eigen::VectorXcd expected =
        coherent_vector(std::complex<double>(0.0, kappa / std::sqrt(2.0)), 64);
    CHECK((state.down - expected).norm() <= 1e-10);
    CHECK(state.up.norm() == 0.0);

    gate_conditional_displacement(state, kappa, -1);
    CHECK(std::abs(state.down(0) - std::complex<double>(1.0, 0.0)) <= 1e-10);
    CHECK(state.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("signal displacement gate") {
    HybridFockState state = HybridFockState::vacuum(96);
    gate_signal_displacement(state, 0.0);
    CHECK(std::abs(state.down(0) - std::complex<double>(1.0, 0.0)) <= 1e-12);

    const double beta = 1.3;
    gate_signal_displacement(state, beta);
    CHECK(mean_position(state.down) == doctest::Approx(-beta).epsilon(1e-8));
    CHECK(state.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("x and p kicks obey the Weyl commutation phase") {
    CounterRng rng(61u);
    const int truncation = 96;
    for (int trial = 0; trial < 5; ++trial) {
        const double kappa = 0.3 + 0.5 * rng.next_double();
        const double beta = 0.8 * (rng.next_double() - 0.5);
        const Eigen::VectorXcd vec = random_osc(truncation, rng);
        const Eigen::VectorXcd lhs = apply_exp_ix(apply_exp_ip(vec, beta), kappa);
        Eigen::VectorXcd rhs = apply_exp_ip(apply_exp_ix(vec, kappa), beta);
        rhs *= std::polar(1.0, -kappa * beta);
        CHECK((lhs - rhs).norm() <= 1e-9);
    }
}

TEST_CASE("protocol reproduces the cat response") {
    const PhaseSequence cat({M_PI / 4.0, 0.0}, 1.0, M_PI / 4.0);
    const double p = run_protocol(cat, 0.6, 128);
    CHECK(p == doctest::Approx(std::pow(std::cos(0.6), 2)).epsilon(1e-6));
    // theta_d never affects the measurement distribution.
    const PhaseSequence cat2({M_PI / 4.0, 1.234}, 1.0, M_PI / 4.0);
    CHECK(run_protocol(cat2, 0.6, 128) == doctest::Approx(p).epsilon(1e-9));
}

TEST_CASE("protocol is the identity at zero signal") {
    CounterRng rng(67u);
    const PhaseSequence phases = testing::random_phases(4, 0.4, 1.0, rng);
    CHECK(run_protocol(phases, 0.0, 128) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("protocol matches the analytic response series") {
    CounterRng rng(71u);
    const double kappa = 0.2;
    const PhaseSequence phases =
        testing::random_phases(5, kappa, M_PI / (4.0 * kappa), rng);
    const ResponseSpectrum rs =
        response_coefficients(build_laurent_direct(phases), kappa);
    for (double beta : {0.4, 1.9, 4.4, 7.0}) {
        CHECK(std::abs(run_protocol(phases, beta, 192) -
                       response_probability(rs, beta)) <= 1e-6);
    }
}

TEST_CASE("truncation guard rails") {
    const PhaseSequence wild({M_PI / 4.0, 0.2, -0.3, 0.5}, 3.0, 0.4);
    CHECK_THROWS_AS(run_protocol(wild, 0.3, 8), Error);
    // Adequate truncation passes the doubling check.
    CHECK_NOTHROW(run_protocol(wild, 0.3, 160, true));
}

TEST_CASE("sensing state branches") {
    const PhaseSequence trivial({0.0}, 1.0, 0.5);
    auto [down0, up0] = sensing_state_branches(trivial, 32);
    CHECK(std::abs(down0(0) - std::complex<double>(1.0, 0.0)) <= 1e-14);
    CHECK(up0.norm() == 0.0);

    CounterRng rng(73u);
    const PhaseSequence phases = testing::random_phases(5, 0.5, 1.0, rng);
    auto [down, up] = sensing_state_branches(phases, 96);
    CHECK(down.squaredNorm() + up.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));

    const double kappa = 0.9;
    const PhaseSequence cat({M_PI / 4.0, 0.0}, kappa, M_PI / (4.0 * kappa));
    auto [cd, cu] = sensing_state_branches(cat, 96);
    const Eigen::VectorXcd plus =
        coherent_vector(std::complex<double>(0.0, kappa / std::sqrt(2.0)), 96) /
        std::sqrt(2.0);
    Eigen::VectorXcd minus =
        coherent_vector(std::complex<double>(0.0, -kappa / std::sqrt(2.0)), 96);
    minus *= std::complex<double>(0.0, 1.0 / std::sqrt(2.0));
    CHECK((cd - plus).norm() <= 1e-10);
    CHECK((cu - minus).norm() <= 1e-10);
}

TEST_CASE("table probes run on closed-form states") {
    const double kappa = 0.5;
    const double beta_th = M_PI / (4.0 * kappa);
    const auto rows = table1_probabilities({}, kappa, beta_th, 160);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].label == "cat");
    CHECK(rows[0].p_below ==
          doctest::Approx(std::pow(std::cos(M_PI / 8.0), 2)).epsilon(1e-6));
    CHECK(rows[0].p_above ==
          doctest::Approx(std::pow(std::cos(3.0 * M_PI / 8.0), 2)).epsilon(1e-6));
}
