#include "qspi/fitting.hpp"

#include <cmath>

#include "qspi/errors.hpp"

namespace qspi {

PowerLawFit fit_power_law(const std::vector<std::pair<int, double>>& points) {
    const std::size_t n = points.size();
    if (n < 3) {
        throw DegenerateFit("power-law fit needs at least 3 points");
    }
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (points[i].first <= 0 || points[i].second <= 0.0) {
            throw DegenerateFit("power-law fit needs positive (d, p) values");
        }
        xs[i] = std::log(static_cast<double>(points[i].first));
        ys[i] = std::log(points[i].second);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw DegenerateFit("power-law fit abscissa is constant");
    }
    PowerLawFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
    return fit;
}

double fit_log_model_prefactor(const std::vector<std::pair<int, double>>& points,
                               double kappa) {
    double num = 0.0, den = 0.0;
    for (const auto& [d, p] : points) {
        if (d < 2) continue;
        const double m = std::log(static_cast<double>(d)) / (kappa * d);
        num += p * m;
        den += m * m;
    }
    if (den == 0.0) {
        throw DegenerateFit("log-model fit has no points with d >= 2");
    }
    return num / den;
}

}  // namespace qspi
