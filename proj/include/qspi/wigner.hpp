#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

namespace qspi {

struct WignerGridSpec {
    double x_min = -8.0;
    double x_max = 8.0;
    double p_min = -8.0;
    double p_max = 8.0;
    double step = 0.2;
};

struct WignerGrid {
    WignerGridSpec spec;
    std::size_t nx = 0;
    std::size_t np = 0;
    std::vector<double> values;  // row-major over (ix, ip)

    double at(std::size_t ix, std::size_t ip) const { return values[ix * np + ip]; }
    double x(std::size_t ix) const { return spec.x_min + spec.step * ix; }
    double p(std::size_t ip) const { return spec.p_min + spec.step * ip; }
    // Grid-sum approximation of int W dx dp (the squared norm of the state).
    double integral() const;
};

// W(x, p) from Fock amplitudes through the Laguerre-kernel closed form,
// normalized so the vacuum gives (1/pi) e^{-x^2 - p^2}. Linear in |c><c|:
// an unnormalized vector yields its squared norm as total integral.
WignerGrid wigner(const Eigen::VectorXcd& osc_amplitudes, const WignerGridSpec& spec);

// CSV with header "x,p,w".
void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& grid);

// CSV with header "n,re,im".
void write_branch_csv(const std::filesystem::path& path, const Eigen::VectorXcd& vec);

}  // namespace qspi
