#include <doctest.h>

#include <cmath>

#include "qspi/phase_file.hpp"

using namespace qspi;

TEST_CASE("phase sequence invariants") {
    CHECK_THROWS_AS(PhaseSequence({}, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(PhaseSequence({0.1}, -1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(PhaseSequence({0.1}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PhaseSequence({0.1}, 1.0, M_PI), std::invalid_argument);
    CHECK_THROWS_AS(PhaseSequence({std::nan("")}, 1.0, 0.5), std::invalid_argument);
    const PhaseSequence ok({0.1, -0.2, 0.3}, 0.5, 2.0);
    CHECK(ok.degree() == 2);
}

TEST_CASE("phase file round trip is exact") {
    const PhaseSequence phases({0.1234567890123456789, -1.0 / 3.0, M_PI / 7.0},
                               1.0 / 2048.0, 512.0 * M_PI);
    const PhaseSequence back = parse_phase_file(to_phase_file(phases));
    CHECK(back.degree() == phases.degree());
    CHECK(back.kappa == phases.kappa);
    CHECK(back.beta_th == phases.beta_th);
    for (std::size_t i = 0; i < phases.angles.size(); ++i) {
        CHECK(back.angles[i] == phases.angles[i]);
    }
}

TEST_CASE("phase file rejects malformed input") {
    const std::string good = to_phase_file(PhaseSequence({0.25, 0.5}, 1.0, 0.7));

    CHECK_THROWS_AS(parse_phase_file("qspi-phases v2\nd=0 kappa=1 beta_th=0.5\n0\n"),
                    std::invalid_argument);
    // Wrong angle count (too few and too many lines).
    CHECK_THROWS_AS(parse_phase_file("qspi-phases v1\nd=1 kappa=1 beta_th=0.7\n0.25\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_phase_file(good + "0.125\n"), std::invalid_argument);
    // Non-finite and malformed numbers.
    CHECK_THROWS_AS(
        parse_phase_file("qspi-phases v1\nd=0 kappa=1 beta_th=0.5\nnan\n"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        parse_phase_file("qspi-phases v1\nd=0 kappa=1 beta_th=0.5\ninf\n"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        parse_phase_file("qspi-phases v1\nd=0 kappa=1 beta_th=0.5\n0.1x\n"),
        std::invalid_argument);
    // Missing metadata fields.
    CHECK_THROWS_AS(parse_phase_file("qspi-phases v1\nd=0 kappa=1\n0.1\n"),
                    std::invalid_argument);
    // Out-of-range parameters still fail validation after parsing.
    CHECK_THROWS_AS(
        parse_phase_file("qspi-phases v1\nd=0 kappa=1 beta_th=9\n0.1\n"),
        std::invalid_argument);
}

TEST_CASE("phase file io") {
    const std::filesystem::path path = "phase_io_test.txt";
    const PhaseSequence phases({0.25, -0.5, 0.75}, 0.25, 3.0);
    write_phase_file(path, phases);
    const PhaseSequence back = read_phase_file(path);
    CHECK(back.angles == phases.angles);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_phase_file(path), std::invalid_argument);
}
