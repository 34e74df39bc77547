#pragma once

#include <stdexcept>
#include <string>

namespace qspi {

// Base for all numerical failures the library can raise. The CLI maps these
// to exit code 2, usage problems to exit code 1.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computed quantity violated one of its contract invariants (realness,
// symmetry, normalization, probability range). Carries the residual.
struct InvariantViolation : Error {
    InvariantViolation(const std::string& what_failed, double residual)
        : Error(what_failed + " (residual " + std::to_string(residual) + ")"),
          residual(residual) {}
    double residual;
};

struct QuadratureNotConverged : Error {
    QuadratureNotConverged(const std::string& where, double achieved)
        : Error("quadrature did not reach target accuracy in " + where +
                " (best " + std::to_string(achieved) + ")"),
          achieved(achieved) {}
    double achieved;
};

struct LeakageExceeded : Error {
    LeakageExceeded(double population, double threshold)
        : Error("Fock truncation leakage " + std::to_string(population) +
                " above threshold " + std::to_string(threshold)),
          population(population) {}
    double population;
};

struct TruncationWarning : Error {
    TruncationWarning(double shift)
        : Error("doubling the Fock truncation shifts the probability by " +
                std::to_string(shift)),
          shift(shift) {}
    double shift;
};

struct NonFiniteObjective : Error {
    explicit NonFiniteObjective(const std::string& where)
        : Error("objective evaluated to a non-finite value in " + where) {}
};

struct DegenerateFit : Error {
    explicit DegenerateFit(const std::string& why) : Error("degenerate fit: " + why) {}
};

}  // namespace qspi
