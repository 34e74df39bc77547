#include <doctest.h>

#include <cmath>

#include "qspi/errors.hpp"
#include "qspi/quadrature.hpp"

using namespace qspi;

TEST_CASE("gauss-hermite low orders match known rules") {
    const GaussHermiteRule& one = gauss_hermite(1);
    CHECK(one.nodes[0] == doctest::Approx(0.0));
    CHECK(one.weights[0] == doctest::Approx(std::sqrt(M_PI)));

    const GaussHermiteRule& two = gauss_hermite(2);
    CHECK(two.nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(two.nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(two.weights[0] == doctest::Approx(std::sqrt(M_PI) / 2.0));
}

TEST_CASE("gauss-hermite integrates gaussian moments") {
    // int e^{-x^2} x^{2k} dx = sqrt(pi) (2k-1)!! / 2^k
    const GaussHermiteRule& rule = gauss_hermite(16);
    double m0 = 0.0, m2 = 0.0, m8 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        m0 += rule.weights[i];
        m2 += rule.weights[i] * x * x;
        m8 += rule.weights[i] * std::pow(x, 8);
    }
    CHECK(m0 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-13));
    CHECK(m8 == doctest::Approx(std::sqrt(M_PI) * 105.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("adaptive gauss-hermite handles oscillatory integrands") {
    // int e^{-x^2} cos(a x) dx = sqrt(pi) e^{-a^2/4}
    for (double a : {1.0, 10.0, 40.0}) {
        const double value =
            integrate_gauss_hermite([&](double x) { return std::cos(a * x); });
        CHECK(value == doctest::Approx(std::sqrt(M_PI) * std::exp(-a * a / 4.0))
                           .epsilon(1e-9));
    }
}

TEST_CASE("adaptive simpson") {
    const double value =
        integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(value == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}
