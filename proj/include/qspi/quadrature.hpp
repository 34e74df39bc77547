#pragma once

#include <functional>
#include <vector>

namespace qspi {

// Nodes and weights for int_-inf^inf e^{-x^2} h(x) dx ~= sum w_i h(x_i).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Golub-Welsch on the Hermite Jacobi matrix; rules are cached per order.
const GaussHermiteRule& gauss_hermite(int order);

// Integrates h against the e^{-x^2} weight, doubling the order from
// `initial_order` until two successive rules agree to `tol`, starting the
// comparison once both evaluations exist. Throws QuadratureNotConverged if
// `max_order` is reached without agreement.
double integrate_gauss_hermite(const std::function<double(double)>& h,
                               double tol = 1e-10,
                               int initial_order = 32,
                               int max_order = 4096);

// Adaptive Simpson on [a, b] to absolute tolerance `tol`. Throws
// QuadratureNotConverged when the recursion depth limit is hit.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double tol = 1e-10);

}  // namespace qspi
