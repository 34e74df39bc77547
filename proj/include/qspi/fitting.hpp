#pragma once

#include <utility>
#include <vector>

namespace qspi {

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;  // of log p against log d
    double slope_stderr = 0.0;
};

// Ordinary least squares of log(p) on log(d). Throws DegenerateFit for
// fewer than three points, non-positive values, or a collapsed abscissa.
PowerLawFit fit_power_law(const std::vector<std::pair<int, double>>& points);

// Least-squares prefactor C for the model p ~= C log(d) / (kappa d).
// Throws DegenerateFit when no usable points remain.
double fit_log_model_prefactor(const std::vector<std::pair<int, double>>& points,
                               double kappa);

}  // namespace qspi
