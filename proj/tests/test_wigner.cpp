#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "qspi/simulator.hpp"
#include "qspi/wigner.hpp"

using namespace qspi;

namespace {

Eigen::VectorXcd fock_vector(int level, int truncation) {
    Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(truncation);
    vec(level) = std::complex<double>(1.0, 0.0);
    return vec;
}

}  // namespace

TEST_CASE("vacuum wigner function") {
    WignerGridSpec spec;
    spec.x_min = -4.0;
    spec.x_max = 4.0;
    spec.p_min = -4.0;
    spec.p_max = 4.0;
    spec.step = 0.2;
    const WignerGrid grid = wigner(fock_vector(0, 32), spec);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        for (std::size_t ip = 0; ip < grid.np; ++ip) {
            const double x = grid.x(ix);
            const double p = grid.p(ip);
            const double expected = std::exp(-x * x - p * p) / M_PI;
            CHECK(std::abs(grid.at(ix, ip) - expected) <= 1e-9);
        }
    }
    CHECK(grid.integral() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("fock-1 wigner function") {
    WignerGridSpec spec;
    spec.x_min = spec.p_min = 0.0;
    spec.x_max = spec.p_max = 0.0;
    spec.step = 0.2;
    const WignerGrid origin = wigner(fock_vector(1, 32), spec);
    REQUIRE(origin.values.size() == 1);
    CHECK(origin.values[0] == doctest::Approx(-1.0 / M_PI).epsilon(1e-12));

    spec.x_min = spec.p_min = -5.0;
    spec.x_max = spec.p_max = 5.0;
    const WignerGrid grid = wigner(fock_vector(1, 32), spec);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        for (std::size_t ip = 0; ip < grid.np; ++ip) {
            const double r2 = grid.x(ix) * grid.x(ix) + grid.p(ip) * grid.p(ip);
            const double expected = (2.0 * r2 - 1.0) * std::exp(-r2) / M_PI;
            CHECK(std::abs(grid.at(ix, ip) - expected) <= 1e-9);
        }
    }
}

TEST_CASE("coherent state wigner is a displaced gaussian") {
    const double alpha = 1.1;  // real: displaced along x by sqrt(2) alpha
    const Eigen::VectorXcd state = apply_exp_ip(fock_vector(0, 64), -std::sqrt(2.0) * alpha);
    WignerGridSpec spec;
    spec.x_min = -1.0;
    spec.x_max = 4.0;
    spec.p_min = -2.0;
    spec.p_max = 2.0;
    spec.step = 0.25;
    const WignerGrid grid = wigner(state, spec);
    const double x0 = std::sqrt(2.0) * alpha;
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        for (std::size_t ip = 0; ip < grid.np; ++ip) {
            const double dx = grid.x(ix) - x0;
            const double p = grid.p(ip);
            const double expected = std::exp(-dx * dx - p * p) / M_PI;
            CHECK(std::abs(grid.at(ix, ip) - expected) <= 1e-8);
        }
    }
}

TEST_CASE("superposition cross term") {
    Eigen::VectorXcd state = Eigen::VectorXcd::Zero(16);
    state(0) = state(1) = std::complex<double>(1.0 / std::sqrt(2.0), 0.0);
    WignerGridSpec spec;
    spec.x_min = spec.x_max = 1.0;
    spec.p_min = spec.p_max = 0.0;
    spec.step = 0.1;
    const WignerGrid grid = wigner(state, spec);
    // (1/pi) e^{-r^2} (r^2 + sqrt(2) x) at (1, 0)
    CHECK(grid.values[0] ==
          doctest::Approx(std::exp(-1.0) * (1.0 + std::sqrt(2.0)) / M_PI)
              .epsilon(1e-12));
}

TEST_CASE("unnormalized branches integrate to their weight") {
    CounterRng rng(83u);
    const PhaseSequence phases = testing::random_phases(3, 0.4, 1.2, rng);
    auto [down, up] = sensing_state_branches(phases, 64);
    WignerGridSpec spec;  // default +-8 window, 0.2 step
    const WignerGrid grid = wigner(down, spec);
    CHECK(grid.integral() == doctest::Approx(down.squaredNorm()).epsilon(0.01));
}
