#pragma once

#include <complex>
#include <vector>

#include "qspi/phase_file.hpp"

namespace qspi {

// Real coefficient arrays of the block-encoded Laurent pair (F, G),
//   F(w) = sum_n f_n w^n,  G(w) = sum_n g_n w^n,  n = -d..d,
// stored densely with array slot 0 holding n = -d. Entries whose index
// parity differs from d are structural zeros. The indexing convention is the
// block structure of the QSP unitary
//   Q = [[F(w), i G(w)], [i G(1/w), F(1/w)]]
// with Q = R(theta_d) W R(theta_{d-1}) ... W R(theta_0), i.e. theta_0 is the
// innermost (first applied) rotation, W = diag(w, 1/w).
struct LaurentPair {
    int degree = 0;
    std::vector<double> f;  // size 2*degree + 1
    std::vector<double> g;  // size 2*degree + 1

    double f_at(int n) const { return in_range(n) ? f[n + degree] : 0.0; }
    double g_at(int n) const { return in_range(n) ? g[n + degree] : 0.0; }
    bool in_range(int n) const { return n >= -degree && n <= degree; }
};

// Expands Q by literal multiplication of 2x2 matrices of complex Laurent
// polynomials. Coefficients are exact up to floating-point rounding.
LaurentPair build_laurent_direct(const PhaseSequence& phases);

// Same pair via the degree-raising coefficient recursion
//   f'_r = cos(t) f_{r-1} - sin(t) g~_{r+1}
//   g~'_r = sin(t) f_{r-1} + cos(t) g~_{r+1}
// seeded at degree 0 with (cos theta_0, sin theta_0). The recursion
// propagates the reflected coefficients g~_n = g_{-n}; the output is
// reflected once at the end so both builders agree per coefficient.
LaurentPair build_laurent_recursive(const PhaseSequence& phases);

// Max |coefficient| of F(w)F(1/w) + G(w)G(1/w) - 1.
double unitarity_residual(const LaurentPair& lp);

// (f(x), g(x)) with f(x) = sum_n f_n e^{i kappa x n}; both are periodic in x
// with period 2 pi / kappa.
std::pair<std::complex<double>, std::complex<double>>
evaluate_fg(const LaurentPair& lp, double kappa, double x);

}  // namespace qspi
