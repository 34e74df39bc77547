#include "qspi/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "qspi/errors.hpp"

namespace qspi {

namespace {

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix,
// updating the first-row eigenvector components in z. Classic Golub-Welsch
// building block (the IMTQLX routine of Burkardt's quadrature rules).
void imtqlx(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    const double prec = 2.220446049250313e-16;
    const int max_iter = 30;
    e[n - 1] = 0.0;

    for (int l = 1; l <= n; ++l) {
        int iter = 0;
        for (;;) {
            int m;
            for (m = l; m <= n; ++m) {
                if (m == n) break;
                if (std::abs(e[m - 1]) <=
                    prec * (std::abs(d[m - 1]) + std::abs(d[m]))) {
                    break;
                }
            }
            if (m == l) break;
            if (++iter > max_iter) {
                throw std::runtime_error("imtqlx: eigenvalue iteration stalled");
            }
            double p = d[l - 1];
            double g = (d[l] - p) / (2.0 * e[l - 1]);
            double r = std::sqrt(g * g + 1.0);
            g = d[m - 1] - p + e[l - 1] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            p = 0.0;
            for (int ii = 1; ii <= m - l; ++ii) {
                const int i = m - ii;
                double f = s * e[i - 1];
                double b = c * e[i - 1];
                if (std::abs(g) <= std::abs(f)) {
                    c = g / f;
                    r = std::sqrt(c * c + 1.0);
                    e[i] = f * r;
                    s = 1.0 / r;
                    c *= s;
                } else {
                    s = f / g;
                    r = std::sqrt(s * s + 1.0);
                    e[i] = g * r;
                    c = 1.0 / r;
                    s *= c;
                }
                g = d[i] - p;
                r = (d[i - 1] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i] = g + p;
                g = c * r - b;
                f = z[i];
                z[i] = s * z[i - 1] + c * f;
                z[i - 1] = c * z[i - 1] - s * f;
            }
            d[l - 1] -= p;
            e[l - 1] = g;
            e[m - 1] = 0.0;
        }
    }

    // Sort ascending, carrying z along.
    for (int ii = 2; ii <= n; ++ii) {
        int i = ii - 1;
        int k = i;
        double p = d[i - 1];
        for (int j = ii; j <= n; ++j) {
            if (d[j - 1] < p) {
                k = j;
                p = d[j - 1];
            }
        }
        if (k != i) {
            d[k - 1] = d[i - 1];
            d[i - 1] = p;
            std::swap(z[i - 1], z[k - 1]);
        }
    }
}

GaussHermiteRule compute_gauss_hermite(int order) {
    std::vector<double> diag(order, 0.0);
    std::vector<double> offdiag(order, 0.0);
    for (int k = 1; k < order; ++k) {
        offdiag[k - 1] = std::sqrt(k / 2.0);
    }
    std::vector<double> z(order, 0.0);
    z[0] = 1.0;
    imtqlx(diag, offdiag, z);

    GaussHermiteRule rule;
    rule.nodes = std::move(diag);
    rule.weights.resize(order);
    const double mu0 = std::sqrt(M_PI);
    for (int i = 0; i < order; ++i) {
        rule.weights[i] = mu0 * z[i] * z[i];
    }
    return rule;
}

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm, double whole,
                     double tol, int depth) {
    if (depth > 48) {
        throw QuadratureNotConverged("adaptive Simpson", tol);
    }
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
    if (order < 1) {
        throw std::invalid_argument("gauss_hermite: order must be >= 1");
    }
    static std::map<int, GaussHermiteRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, compute_gauss_hermite(order)).first;
    }
    return it->second;
}

double integrate_gauss_hermite(const std::function<double(double)>& h, double tol,
                               int initial_order, int max_order) {
    double previous = 0.0;
    bool have_previous = false;
    for (int order = initial_order; order <= max_order; order *= 2) {
        const GaussHermiteRule& rule = gauss_hermite(order);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            sum += rule.weights[i] * h(rule.nodes[i]);
        }
        if (have_previous && std::abs(sum - previous) <= tol) {
            return sum;
        }
        previous = sum;
        have_previous = true;
    }
    throw QuadratureNotConverged("Gauss-Hermite order doubling", tol);
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = simpson(f, a, fa, b, fb, m, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 0);
}

}  // namespace qspi
