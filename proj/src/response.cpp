#include "qspi/response.hpp"

#include <cmath>
#include <sstream>

#include "qspi/errors.hpp"
#include "qspi/io.hpp"
#include "qspi/quadrature.hpp"

namespace qspi {

namespace {

using Complex = std::complex<double>;

constexpr double kSpectrumResidualLimit = 1e-8;
constexpr double kProbabilityImagLimit = 1e-9;
constexpr double kProbabilityClampLimit = 1e-9;

}  // namespace

ResponseSpectrum response_coefficients(const LaurentPair& lp, double kappa) {
    const int d = lp.degree;
    const int side = 2 * d + 1;

    // Reflected g: the series-sum formula is written in the recursion
    // convention, one index reflection away from the stored block pair.
    std::vector<double> gr(side);
    for (int n = -d; n <= d; ++n) {
        gr[n + d] = lp.g_at(-n);
    }
    auto fv = [&](int n) { return lp.f_at(n); };
    auto gv = [&](int n) { return (n >= -d && n <= d) ? gr[n + d] : 0.0; };

    // q(a, b) = f_a f_b + g~_a g~_b
    std::vector<double> q(side * side);
    for (int a = -d; a <= d; ++a) {
        for (int b = -d; b <= d; ++b) {
            q[(a + d) * side + (b + d)] = fv(a) * fv(b) + gv(a) * gv(b);
        }
    }
    auto qv = [&](int a, int b) {
        if (a < -d || a > d || b < -d || b > d) return 0.0;
        return q[(a + d) * side + (b + d)];
    };

    // accum(a, b) = sum_t q(a, b + 2t) e^{-k^2 t^2}; collapsing the r sum
    // this way makes the full spectrum O(d^3) instead of O(d^4). The lookup
    // uses b = n' + 2s in [-3d, 3d], and the shift t = r - s runs through
    // [-2d, 2d] even though |r| <= d itself.
    const int wide = 6 * d + 1;
    std::vector<double> decay(4 * d + 1);
    for (int t = -2 * d; t <= 2 * d; ++t) {
        decay[t + 2 * d] = std::exp(-kappa * kappa * static_cast<double>(t) * t);
    }
    std::vector<double> accum(side * wide, 0.0);
    for (int a = -d; a <= d; ++a) {
        for (int b = -3 * d; b <= 3 * d; ++b) {
            double sum = 0.0;
            for (int t = -2 * d; t <= 2 * d; ++t) {
                sum += qv(a, b + 2 * t) * decay[t + 2 * d];
            }
            accum[(a + d) * wide + (b + 3 * d)] = sum;
        }
    }
    auto av = [&](int a, int b) {
        if (a < -d || a > d || b < -3 * d || b > 3 * d) return 0.0;
        return accum[(a + d) * wide + (b + 3 * d)];
    };

    ResponseSpectrum rs;
    rs.degree = d;
    rs.kappa = kappa;
    rs.c.assign(side, 0.0);
    for (int s = -d; s <= d; ++s) {
        double cs = 0.0;
        for (int n = -d; n <= d; ++n) {
            for (int np = -d; np <= d; ++np) {
                const double w = qv(n, np);
                if (w == 0.0) continue;
                cs += w * av(n + 2 * s, np + 2 * s);
            }
        }
        rs.c[s + d] = cs;
    }

    double symmetry = 0.0;
    double total = 0.0;
    for (int s = -d; s <= d; ++s) {
        symmetry = std::max(symmetry, std::abs(rs.c_at(s) - rs.c_at(-s)));
        total += rs.c_at(s);
    }
    if (symmetry > kSpectrumResidualLimit) {
        throw InvariantViolation("response spectrum symmetry c_s = c_{-s}", symmetry);
    }
    if (std::abs(total - 1.0) > kSpectrumResidualLimit) {
        throw InvariantViolation("response spectrum normalization sum c_s = 1",
                                 std::abs(total - 1.0));
    }
    return rs;
}

double response_probability(const ResponseSpectrum& rs, double beta) {
    const double arg = 2.0 * rs.kappa * beta;
    double real = rs.c_at(0);
    double imag = 0.0;
    for (int s = 1; s <= rs.degree; ++s) {
        real += (rs.c_at(s) + rs.c_at(-s)) * std::cos(arg * s);
        imag += (rs.c_at(s) - rs.c_at(-s)) * std::sin(arg * s);
    }
    if (std::abs(imag) > kProbabilityImagLimit) {
        throw InvariantViolation("response probability imaginary part", std::abs(imag));
    }
    if (real < -kProbabilityClampLimit || real > 1.0 + kProbabilityClampLimit) {
        throw InvariantViolation("response probability outside [0, 1]",
                                 std::max(-real, real - 1.0));
    }
    return std::min(1.0, std::max(0.0, real));
}

double response_by_quadrature(const LaurentPair& lp, double kappa, double beta) {
    const int d = lp.degree;
    auto integrand = [&](double x) {
        // T(x) = f(-x+beta) f(x) + g(x-beta) g(-x)
        Complex f_shifted(0.0, 0.0), f_plain(0.0, 0.0);
        Complex g_shifted(0.0, 0.0), g_reflected(0.0, 0.0);
        for (int n = -d; n <= d; ++n) {
            const Complex w = std::polar(1.0, kappa * x * n);
            const Complex v = std::polar(1.0, kappa * (beta - x) * n);
            f_plain += lp.f_at(n) * w;
            f_shifted += lp.f_at(n) * v;
            g_reflected += lp.g_at(n) * std::conj(w);
            g_shifted += lp.g_at(n) * std::conj(v);
        }
        const Complex t = f_shifted * f_plain + g_shifted * g_reflected;
        return std::norm(t) / std::sqrt(M_PI);
    };
    const double value = integrate_gauss_hermite(integrand, 1e-10, 32, 4096);
    // |T psi_0|^2 is nonnegative; only quadrature rounding can poke outside.
    if (value < -1e-9 || value > 1.0 + 1e-9) {
        throw InvariantViolation("quadrature response outside [0, 1]",
                                 std::max(-value, value - 1.0));
    }
    return std::min(1.0, std::max(0.0, value));
}

ElementaryWeights elementary_weights(const LaurentPair& lp, LowerRightRule rule) {
    const int d = lp.degree;
    const int side = 2 * d + 1;
    ElementaryWeights ew;
    ew.degree = d;
    ew.rule = rule;
    ew.blocks.assign(side * side, WeightBlock{});
    const Complex i_unit(0.0, 1.0);
    for (int n = -d; n <= d; ++n) {
        for (int m = -d; m <= d; ++m) {
            WeightBlock b{};
            b[0] = lp.f_at(n) * lp.f_at(m) + lp.g_at(-n) * lp.g_at(-m);
            b[1] = i_unit * (lp.f_at(n) * lp.g_at(m) - lp.g_at(-n) * lp.f_at(-m));
            b[2] = i_unit * (lp.f_at(-n) * lp.g_at(-m) - lp.g_at(n) * lp.f_at(m));
            if (rule == LowerRightRule::Sum) {
                b[3] = lp.g_at(n) * lp.g_at(m) + lp.f_at(-n) * lp.f_at(-m);
            } else {
                b[3] = lp.g_at(n) * lp.g_at(m) * lp.f_at(-n) * lp.f_at(-m);
            }
            ew.blocks[(n + d) * side + (m + d)] = b;
        }
    }
    return ew;
}

namespace {

// Column norms of the reconstructed protocol unitary acting on vacuum:
// phi_a(u) = sum_{n,m} (C_nm)_{a0} e^{-i k (u+beta) n} e^{i k u m} psi_0(u)
// after shifting the integration variable by beta.
double reconstructed_column_residual(const ElementaryWeights& ew, double kappa,
                                     double beta) {
    const int d = ew.degree;
    auto level = [&](int entry) {
        auto integrand = [&](double u) {
            Complex amp(0.0, 0.0);
            for (int n = -d; n <= d; ++n) {
                for (int m = -d; m <= d; ++m) {
                    const Complex w = ew.block(n, m)[entry];
                    if (w == Complex(0.0, 0.0)) continue;
                    amp += w * std::polar(1.0, kappa * (u * (m - n) - beta * n));
                }
            }
            return std::norm(amp) / std::sqrt(M_PI);
        };
        return integrate_gauss_hermite(integrand, 1e-10, 32, 4096);
    };
    // The ambiguous lower-right block only feeds the second column (input
    // state up), so that is the column whose norm discriminates the rules.
    const double p_down = level(1);  // (0,1) entry weights
    const double p_up = level(3);    // (1,1) entry weights
    return std::abs(p_down + p_up - 1.0);
}

}  // namespace

LowerRightReport check_lower_right_unitarity(const LaurentPair& lp, double kappa,
                                             double beta) {
    LowerRightReport report;
    report.sum_rule_residual = reconstructed_column_residual(
        elementary_weights(lp, LowerRightRule::Sum), kappa, beta);
    report.product_rule_residual = reconstructed_column_residual(
        elementary_weights(lp, LowerRightRule::Product), kappa, beta);
    return report;
}

void write_response_csv(const std::filesystem::path& path, const ResponseSpectrum& rs,
                        const std::vector<double>& betas) {
    std::ostringstream out;
    out << "beta,probability\n";
    for (double beta : betas) {
        out << format_g17(beta) << "," << format_g17(response_probability(rs, beta))
            << "\n";
    }
    atomic_write(path, out.str());
}

}  // namespace qspi
