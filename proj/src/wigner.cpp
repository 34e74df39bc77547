#include "qspi/wigner.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "qspi/io.hpp"

namespace qspi {

namespace {

using Complex = std::complex<double>;

// Amplitudes below this fraction of the largest one contribute nothing at
// grid resolution; skipping them keeps the pair sum near the occupied block.
constexpr double kAmplitudeCutoff = 1e-14;

double wigner_point(const Eigen::VectorXcd& c, int n_top, double x, double p) {
    const double r2 = x * x + p * p;
    const double envelope = std::exp(-r2) / M_PI;
    if (envelope == 0.0) return 0.0;
    const double u = 2.0 * r2;
    const Complex z = std::sqrt(2.0) * Complex(x, -p);

    double total = 0.0;
    // Diagonal m = n: (-1)^n |c_n|^2 L_n(u).
    {
        double lnm1 = 0.0, ln = 1.0;  // L_{-1}, L_0
        double parity = 1.0;
        for (int n = 0; n <= n_top; ++n) {
            total += parity * std::norm(c(n)) * ln;
            const double lnp1 = ((2 * n + 1 - u) * ln - n * lnm1) / (n + 1);
            lnm1 = ln;
            ln = lnp1;
            parity = -parity;
        }
    }
    // Off-diagonals m = n + k: 2 Re[c_m conj(c_n)] (-1)^n sqrt(n!/m!) z^k L_n^k(u).
    Complex zk(1.0, 0.0);
    for (int k = 1; k <= n_top; ++k) {
        zk *= z;
        double lnm1 = 0.0, ln = 1.0;  // L_{-1}^k, L_0^k
        double parity = 1.0;
        double ratio = 1.0;  // sqrt(n! / (n+k)!)
        for (int j = 1; j <= k; ++j) ratio /= std::sqrt(static_cast<double>(j));
        for (int n = 0; n + k <= n_top; ++n) {
            const Complex cross = c(n + k) * std::conj(c(n));
            total += 2.0 * parity * ratio * (cross * zk).real() * ln;
            const double lnp1 = ((2 * n + k + 1 - u) * ln - (n + k) * lnm1) / (n + 1);
            lnm1 = ln;
            ln = lnp1;
            parity = -parity;
            ratio *= std::sqrt((n + 1.0) / (n + 1.0 + k));
        }
    }
    return envelope * total;
}

}  // namespace

double WignerGrid::integral() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * spec.step * spec.step;
}

WignerGrid wigner(const Eigen::VectorXcd& osc_amplitudes, const WignerGridSpec& spec) {
    if (!(spec.step > 0.0) || spec.x_max < spec.x_min || spec.p_max < spec.p_min) {
        throw std::invalid_argument("wigner: bad grid spec");
    }
    WignerGrid grid;
    grid.spec = spec;
    grid.nx = static_cast<std::size_t>(std::floor((spec.x_max - spec.x_min) / spec.step + 1e-9)) + 1;
    grid.np = static_cast<std::size_t>(std::floor((spec.p_max - spec.p_min) / spec.step + 1e-9)) + 1;
    grid.values.assign(grid.nx * grid.np, 0.0);

    double peak = 0.0;
    for (int n = 0; n < osc_amplitudes.size(); ++n) {
        peak = std::max(peak, std::abs(osc_amplitudes(n)));
    }
    int n_top = 0;
    for (int n = 0; n < osc_amplitudes.size(); ++n) {
        if (std::abs(osc_amplitudes(n)) > kAmplitudeCutoff * peak) n_top = n;
    }

    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        const double x = grid.x(ix);
        for (std::size_t ip = 0; ip < grid.np; ++ip) {
            grid.values[ix * grid.np + ip] = wigner_point(osc_amplitudes, n_top, x, grid.p(ip));
        }
    }
    return grid;
}

void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& grid) {
    std::ostringstream out;
    out << "x,p,w\n";
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        for (std::size_t ip = 0; ip < grid.np; ++ip) {
            out << format_g17(grid.x(ix)) << "," << format_g17(grid.p(ip)) << ","
                << format_g17(grid.at(ix, ip)) << "\n";
        }
    }
    atomic_write(path, out.str());
}

void write_branch_csv(const std::filesystem::path& path, const Eigen::VectorXcd& vec) {
    std::ostringstream out;
    out << "n,re,im\n";
    for (int n = 0; n < vec.size(); ++n) {
        out << n << "," << format_g17(vec(n).real()) << "," << format_g17(vec(n).imag())
            << "\n";
    }
    atomic_write(path, out.str());
}

}  // namespace qspi
