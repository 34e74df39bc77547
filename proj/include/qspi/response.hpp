#pragma once

#include <array>
#include <complex>
#include <filesystem>
#include <vector>

#include "qspi/laurent.hpp"

namespace qspi {

// Real coefficients c_s of the qubit response P(M = down | beta) as a
// Laurent polynomial in nu = e^{i 2 kappa beta}, s = -d..d. Always real,
// symmetric (c_s = c_{-s}) and normalized (sum c_s = 1).
struct ResponseSpectrum {
    int degree = 0;
    double kappa = 0.0;
    std::vector<double> c;  // size 2*degree + 1, slot 0 <-> s = -degree

    double c_at(int s) const {
        return (s >= -degree && s <= degree) ? c[s + degree] : 0.0;
    }
};

// c_s = sum_{n,n',r} (f_n f_n' + g~_n g~_n')
//                    (f_{n+2s} f_{n'+2r} + g~_{n+2s} g~_{n'+2r}) e^{-k^2 (r-s)^2}
// with out-of-range coefficients treated as zero. The sum runs over the
// reflected coefficients g~_n = g_{-n}; with the block-structure g stored in
// LaurentPair this is what reproduces the degree-1 closed forms
// c_0 = cos^4 t0 + sin^4 t0, c_±1 = cos^2 t0 sin^2 t0 (pinned by regression).
// Throws InvariantViolation if symmetry or normalization residual > 1e-8.
ResponseSpectrum response_coefficients(const LaurentPair& lp, double kappa);

// Re sum_s c_s e^{i 2 kappa beta s}, evaluated in the paired cosine form so
// that evenness in beta is exact. Verifies the imaginary residual is <= 1e-9
// and that the value lies in [-1e-9, 1 + 1e-9]; clamps to [0, 1].
double response_probability(const ResponseSpectrum& rs, double beta);

// Independent route through the defining integral
//   int |[f(-x+beta) f(x) + g(x-beta) g(-x)] psi_0(x)|^2 dx
// via adaptive-order Gauss-Hermite quadrature.
double response_by_quadrature(const LaurentPair& lp, double kappa, double beta);

// 2x2 interference weight attached to the elementary transformation
// S_{beta,nm} = w^{-n} S_beta w^m.
using WeightBlock = std::array<std::complex<double>, 4>;  // row-major 2x2

// The published lower-right entry of C_nm reads "g_n g_m f_{-n} f_{-m}" with
// no operator between the two pairs; both readings are provided and
// check_lower_right_unitarity reports which one reconstructs a unitary.
enum class LowerRightRule { Sum, Product };

struct ElementaryWeights {
    int degree = 0;
    LowerRightRule rule = LowerRightRule::Sum;
    std::vector<WeightBlock> blocks;  // (2d+1)^2, row-major over (n, m)

    const WeightBlock& block(int n, int m) const {
        const int side = 2 * degree + 1;
        return blocks[(n + degree) * side + (m + degree)];
    }
};

ElementaryWeights elementary_weights(const LaurentPair& lp, LowerRightRule rule);

// Reconstructs the protocol unitary's first column from the weight blocks at
// one (kappa, beta) and returns |P_down + P_up - 1| for each candidate rule.
struct LowerRightReport {
    double sum_rule_residual = 0.0;
    double product_rule_residual = 0.0;
};
LowerRightReport check_lower_right_unitarity(const LaurentPair& lp, double kappa,
                                             double beta);

// CSV with header "beta,probability", one row per grid point.
void write_response_csv(const std::filesystem::path& path, const ResponseSpectrum& rs,
                        const std::vector<double>& betas);

}  // namespace qspi
