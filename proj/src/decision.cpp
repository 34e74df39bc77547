#include "qspi/decision.hpp"

#include <cmath>
#include <stdexcept>

#include "qspi/errors.hpp"
#include "qspi/quadrature.hpp"

namespace qspi {

namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(x) / x;
}

double sign(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
}

}  // namespace

DecisionProblem::DecisionProblem(double kappa, double beta_th, int degree)
    : kappa(kappa), beta_th(beta_th), degree(degree) {
    validate();
}

void DecisionProblem::validate() const {
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("DecisionProblem: kappa must be > 0");
    }
    if (!(beta_th > 0.0) || !(beta_th < M_PI / (2.0 * kappa))) {
        throw std::invalid_argument("DecisionProblem: beta_th outside (0, pi/(2 kappa))");
    }
    if (degree < 1) {
        throw std::invalid_argument("DecisionProblem: degree must be >= 1");
    }
}

int ideal_response(double beta, const DecisionProblem& dp) {
    // std::remainder rounds the period index half-to-even, which makes the
    // reduction deterministic at exact half-period inputs.
    const double reduced = std::remainder(beta, M_PI / dp.kappa);
    return std::abs(reduced) < dp.beta_th ? 1 : 0;
}

double h_s(int s, const DecisionProblem& dp) {
    const double kb = dp.kappa * dp.beta_th;
    return 2.0 * kb / M_PI + sinc(M_PI * s) - (4.0 * kb / M_PI) * sinc(2.0 * kb * s);
}

double perr_analytic(const ResponseSpectrum& rs, const DecisionProblem& dp) {
    if (rs.degree != dp.degree) {
        throw std::invalid_argument("perr_analytic: spectrum/problem degree mismatch");
    }
    if (std::abs(rs.kappa - dp.kappa) > 1e-12 * std::max(1.0, std::abs(dp.kappa))) {
        throw std::invalid_argument("perr_analytic: spectrum/problem kappa mismatch");
    }
    double p = 0.0;
    for (int s = -rs.degree; s <= rs.degree; ++s) {
        p += rs.c_at(s) * h_s(s, dp);
    }
    return p;
}

ErrorBreakdown perr_quadrature(const std::function<double(double)>& response,
                               const DecisionProblem& dp) {
    const double cell_edge = M_PI / (2.0 * dp.kappa);
    const double norm = 2.0 * dp.kappa / M_PI;
    ErrorBreakdown out;
    out.p_fn = norm * integrate_adaptive(
                          [&](double beta) { return 1.0 - response(beta); }, 0.0,
                          dp.beta_th, 1e-10);
    out.p_fp = norm * integrate_adaptive(response, dp.beta_th, cell_edge, 1e-10);
    out.p_err = out.p_fn + out.p_fp;
    return out;
}

double cat_perr(double theta0, const DecisionProblem& dp) {
    const double u = 2.0 * dp.beta_th * dp.kappa;
    return (std::sin(u - 4.0 * theta0) + std::sin(u + 4.0 * theta0) +
            (M_PI - 2.0 * u) * std::cos(4.0 * theta0) - 2.0 * u -
            2.0 * std::sin(u) + 3.0 * M_PI) /
           (4.0 * M_PI);
}

double crossover_threshold(double kappa) {
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("crossover_threshold: kappa must be > 0");
    }
    // pi/2 - x + sin(x) is strictly decreasing on (0, pi) with a sign change.
    double lo = 0.0, hi = M_PI;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double value = M_PI / 2.0 - mid + std::sin(mid);
        if (value > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi) / (2.0 * kappa);
}

double ideal_sign_sin_response(double beta, const DecisionProblem& dp) {
    return 0.5 * (sign(std::sin(dp.kappa * (dp.beta_th - beta))) +
                  sign(std::sin(dp.kappa * (dp.beta_th + beta))));
}

double lambert_w(double x) {
    if (x < 0.0) {
        throw std::invalid_argument("lambert_w: negative argument");
    }
    if (x == 0.0) return 0.0;
    double w = x < M_E ? x / (1.0 + x) : std::log(x) - std::log(std::log(x));
    for (int iter = 0; iter < 64; ++iter) {
        const double ew = std::exp(w);
        const double res = w * ew - x;
        const double denom = ew * (w + 1.0) - (w + 2.0) * res / (2.0 * w + 2.0);
        const double step = res / denom;
        w -= step;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

int degree_bound(double epsilon, double sigma) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0) || !(sigma > 0.0)) {
        throw std::invalid_argument("degree_bound: needs epsilon in (0,1), sigma > 0");
    }
    const double w1 = lambert_w(8.0 / (M_PI * epsilon * epsilon));
    const double w2 = lambert_w(512.0 / (M_E * M_E * M_PI * epsilon * epsilon));
    const double first = (M_E / sigma) * std::sqrt(w1 * w2);
    const double second =
        std::sqrt(2.0) *
        lambert_w(8.0 * std::sqrt(2.0) / (std::sqrt(M_PI) * sigma * epsilon) *
                  std::sqrt(w1));
    return 2 * static_cast<int>(std::ceil(std::max(first, second))) + 1;
}

double predicted_perr(int d, double kappa, double prefactor) {
    if (d < 2) {
        throw std::invalid_argument("predicted_perr: needs d >= 2");
    }
    return prefactor * std::log(static_cast<double>(d)) / (kappa * d);
}

}  // namespace qspi
