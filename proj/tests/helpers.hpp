#pragma once

#include <cmath>
#include <vector>

#include "qspi/phase_file.hpp"
#include "qspi/rng.hpp"
#include "qspi/wigner.hpp"

namespace qspi::testing {

inline PhaseSequence random_phases(int degree, double kappa, double beta_th,
                                   CounterRng& rng) {
    std::vector<double> angles(degree + 1);
    for (double& a : angles) a = rng.next_angle();
    return PhaseSequence(std::move(angles), kappa, beta_th);
}

// Mean spacing between adjacent interior maxima of W(x, p = 0), with
// three-point parabolic refinement of each peak position.
inline double fringe_spacing(const WignerGrid& grid) {
    std::vector<double> peaks;
    for (std::size_t ix = 1; ix + 1 < grid.nx; ++ix) {
        const double left = grid.at(ix - 1, 0);
        const double mid = grid.at(ix, 0);
        const double right = grid.at(ix + 1, 0);
        if (mid > left && mid > right) {
            const double denom = left - 2.0 * mid + right;
            const double offset = denom != 0.0 ? 0.5 * (left - right) / denom : 0.0;
            peaks.push_back(grid.x(ix) + offset * grid.spec.step);
        }
    }
    if (peaks.size() < 2) return 0.0;
    return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

}  // namespace qspi::testing
