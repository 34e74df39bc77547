#pragma once

#include <functional>

#include "qspi/response.hpp"

namespace qspi {

// Binary decision task: decide |beta| < beta_th vs |beta| > beta_th inside
// the fundamental sensing cell [-pi/(2 kappa), pi/(2 kappa)).
struct DecisionProblem {
    double kappa = 0.0;
    double beta_th = 0.0;
    int degree = 1;

    DecisionProblem() = default;
    DecisionProblem(double kappa, double beta_th, int degree);
    void validate() const;
};

struct ErrorBreakdown {
    double p_err = 0.0;
    double p_fn = 0.0;  // false negative (missed event)
    double p_fp = 0.0;  // false positive (false alarm)
};

// Target step response: 1 for |beta| < beta_th, 0 otherwise. beta is first
// reduced into the fundamental cell with round-half-to-even on the period
// index; the measure-zero boundary |beta| = beta_th returns 0.
int ideal_response(double beta, const DecisionProblem& dp);

// H_s(beta_th, kappa) = 2 k b/pi + sinc(pi s) - (4 k b/pi) sinc(2 k s b),
// unnormalized sinc with sinc(0) = 1.
double h_s(int s, const DecisionProblem& dp);

// Decision error density sum_s c_s H_s. Requires rs to match dp in degree
// and kappa.
double perr_analytic(const ResponseSpectrum& rs, const DecisionProblem& dp);

// Same quantity through the defining integrals,
//   p_fn = (2k/pi) int_0^{b_th} (1 - P),  p_fp = (2k/pi) int_{b_th}^{pi/2k} P,
// for an arbitrary response callable on [0, pi/(2 kappa)].
ErrorBreakdown perr_quadrature(const std::function<double(double)>& response,
                               const DecisionProblem& dp);

// Degree-1 closed form of the decision error as a function of theta_0.
double cat_perr(double theta0, const DecisionProblem& dp);

// beta_th* = chi / (2 kappa) where chi solves pi/2 - x + sin(x) = 0 on
// (0, pi); at this threshold the optimal and the trivial degree-1 protocols
// break even.
double crossover_threshold(double kappa);

// (sign[sin(k(b_th - b))] + sign[sin(k(b_th + b))]) / 2; equals
// ideal_response on the fundamental cell away from the discontinuities.
double ideal_sign_sin_response(double beta, const DecisionProblem& dp);

// Principal-branch Lambert W on x >= 0 via Halley iteration, relative
// accuracy 1e-12.
double lambert_w(double x);

// Degree gamma(epsilon, sigma) sufficient for an epsilon-accurate
// approximation to the sign function outside a width-sigma window:
//   2 * ceil(max((e/sigma) sqrt(W(8/(pi e^2)... )), sqrt(2) W(...))) + 1.
// Always odd, non-increasing in both arguments.
int degree_bound(double epsilon, double sigma);

// Fit model prefactor * log(d) / (kappa d) for the error-vs-degree scaling.
double predicted_perr(int d, double kappa, double prefactor);

}  // namespace qspi
