#include "qspi/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qspi/errors.hpp"
#include "qspi/laurent.hpp"
#include "qspi/rng.hpp"

namespace qspi {

namespace {

constexpr double kReflection = 1.0;
constexpr double kExpansion = 2.0;
constexpr double kContraction = 0.5;
constexpr double kShrink = 0.5;
constexpr double kInitialStep = 0.1;  // radians

int coarse_budget(const OptimizerConfig& cfg, int dim) {
    return cfg.max_iterations > 0 ? std::max(1, cfg.max_iterations / 10)
                                  : 200 * dim;
}

int refine_budget(const OptimizerConfig& cfg, int dim) {
    return cfg.max_iterations > 0 ? cfg.max_iterations : 2000 * dim;
}

void run_indexed(int count, int threads, const std::function<void(int)>& work) {
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                work(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

void OptimizerConfig::validate() const {
    if (restarts < 1 || keep_top < 1) {
        throw std::invalid_argument("OptimizerConfig: restarts and keep_top must be >= 1");
    }
    if (keep_top > restarts) {
        throw std::invalid_argument("OptimizerConfig: keep_top must be <= restarts");
    }
    if (!(angle_tolerance > 0.0) || !(objective_tolerance > 0.0)) {
        throw std::invalid_argument("OptimizerConfig: tolerances must be > 0");
    }
}

NelderMeadResult nelder_mead(const Objective& objective,
                             const std::vector<double>& start,
                             const OptimizerConfig& cfg, int max_iterations,
                             const TraceSink& trace) {
    const std::size_t dim = start.size();
    if (dim == 0) {
        throw std::invalid_argument("nelder_mead: empty start point");
    }

    auto eval = [&](const std::vector<double>& x) {
        const double v = objective(x);
        if (!std::isfinite(v)) {
            throw NonFiniteObjective("nelder_mead");
        }
        return v;
    };

    std::vector<std::vector<double>> simplex(dim + 1, start);
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) {
        simplex[i + 1][i] += kInitialStep;
    }
    for (std::size_t i = 0; i <= dim; ++i) {
        values[i] = eval(simplex[i]);
    }

    std::vector<std::size_t> order(dim + 1);
    auto sort_order = [&]() {
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    };

    // Converged when either the objective stops moving across the simplex
    // (spread small relative to the value scale, so plateaus end instantly
    // but shrinking toward a minimum at 0 keeps going) or every coordinate
    // of the simplex has collapsed to within the angle tolerance.
    auto spread_converged = [&]() {
        const std::size_t best = order[0];
        const std::size_t worst = order[dim];
        const double fspread = values[worst] - values[best];
        const double fscale = std::abs(values[worst]) + std::abs(values[best]);
        if (fspread <= cfg.objective_tolerance * std::max(fscale, 1e-12)) return true;
        double xspread = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) {
                xspread = std::max(xspread, std::abs(simplex[i][k] - simplex[best][k]));
            }
        }
        return xspread <= cfg.angle_tolerance;
    };

    NelderMeadResult result;
    int iter = 0;
    sort_order();
    bool converged = spread_converged();
    while (!converged && iter < max_iterations) {
        ++iter;
        const std::size_t worst = order[dim];
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k];
        }
        for (std::size_t k = 0; k < dim; ++k) centroid[k] /= dim;

        auto along = [&](double t) {
            std::vector<double> x(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                x[k] = centroid[k] + t * (centroid[k] - simplex[worst][k]);
            }
            return x;
        };

        std::vector<double> reflected = along(kReflection);
        const double f_reflected = eval(reflected);
        const double f_best = values[order[0]];
        const double f_second_worst = values[order[dim - 1]];

        if (f_reflected < f_best) {
            std::vector<double> expanded = along(kExpansion);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = std::move(expanded);
                values[worst] = f_expanded;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = f_reflected;
            }
        } else if (f_reflected < f_second_worst) {
            simplex[worst] = std::move(reflected);
            values[worst] = f_reflected;
        } else {
            const bool outside = f_reflected < values[worst];
            std::vector<double> contracted = along(outside ? kContraction : -kContraction);
            const double f_contracted = eval(contracted);
            if (f_contracted < std::min(f_reflected, values[worst])) {
                simplex[worst] = std::move(contracted);
                values[worst] = f_contracted;
            } else {
                const std::size_t best = order[0];
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < dim; ++k) {
                        simplex[i][k] =
                            simplex[best][k] + kShrink * (simplex[i][k] - simplex[best][k]);
                    }
                    values[i] = eval(simplex[i]);
                }
            }
        }

        sort_order();
        if (trace) trace(iter, values[order[0]]);
        converged = spread_converged();
    }

    result.point = simplex[order[0]];
    result.value = values[order[0]];
    result.iterations = iter;
    result.converged = converged;
    return result;
}

double decision_error_for_angles(const std::vector<double>& angles,
                                 const DecisionProblem& dp) {
    PhaseSequence phases;
    phases.angles = angles;
    phases.kappa = dp.kappa;
    phases.beta_th = dp.beta_th;
    const LaurentPair lp = build_laurent_recursive(phases);
    const ResponseSpectrum rs = response_coefficients(lp, dp.kappa);
    return perr_analytic(rs, dp);
}

OptimizationResult optimize_phases(const DecisionProblem& dp, const OptimizerConfig& cfg,
                                   int threads) {
    dp.validate();
    cfg.validate();
    const int dim = dp.degree + 1;
    const Objective objective = [&dp](const std::vector<double>& angles) {
        return decision_error_for_angles(angles, dp);
    };

    struct Candidate {
        int restart = 0;
        NelderMeadResult coarse;
    };
    std::vector<Candidate> candidates(cfg.restarts);
    run_indexed(cfg.restarts, threads, [&](int r) {
        CounterRng rng(CounterRng::derive_key(cfg.rng_seed, static_cast<std::uint64_t>(r)));
        std::vector<double> start(dim);
        for (double& a : start) a = rng.next_angle();
        candidates[r].restart = r;
        candidates[r].coarse = nelder_mead(objective, start, cfg, coarse_budget(cfg, dim));
    });

    std::vector<int> ranking(cfg.restarts);
    for (int r = 0; r < cfg.restarts; ++r) ranking[r] = r;
    std::stable_sort(ranking.begin(), ranking.end(), [&](int a, int b) {
        if (candidates[a].coarse.value != candidates[b].coarse.value) {
            return candidates[a].coarse.value < candidates[b].coarse.value;
        }
        return a < b;
    });
    const int refine_count = std::min(cfg.keep_top, cfg.restarts);

    std::vector<NelderMeadResult> refined(refine_count);
    run_indexed(refine_count, threads, [&](int i) {
        const Candidate& c = candidates[ranking[i]];
        refined[i] = nelder_mead(objective, c.coarse.point, cfg, refine_budget(cfg, dim));
    });

    int best = 0;
    for (int i = 1; i < refine_count; ++i) {
        if (refined[i].value < refined[best].value) best = i;
    }

    const Candidate& winner = candidates[ranking[best]];
    OptimizationResult result;
    result.phases = PhaseSequence(refined[best].point, dp.kappa, dp.beta_th);
    result.p_err = refined[best].value;
    result.iterations = winner.coarse.iterations + refined[best].iterations;
    result.converged = refined[best].converged;
    result.restart_index = winner.restart;
    return result;
}

OptimizationResult warm_start(const OptimizationResult& prev, double new_kappa,
                              double new_beta_th, const OptimizerConfig& cfg) {
    cfg.validate();
    const DecisionProblem dp(new_kappa, new_beta_th, prev.phases.degree());
    const Objective objective = [&dp](const std::vector<double>& angles) {
        return decision_error_for_angles(angles, dp);
    };
    const NelderMeadResult run =
        nelder_mead(objective, prev.phases.angles, cfg, refine_budget(cfg, dp.degree + 1));
    OptimizationResult result;
    result.phases = PhaseSequence(run.point, new_kappa, new_beta_th);
    result.p_err = run.value;
    result.iterations = run.iterations;
    result.converged = run.converged;
    result.restart_index = prev.restart_index;
    return result;
}

SweepResult scaling_sweep(const std::vector<int>& degrees, double kappa,
                          double beta_th, const OptimizerConfig& cfg, int threads) {
    if (degrees.empty()) {
        throw std::invalid_argument("scaling_sweep: degrees list is empty");
    }
    if (!std::is_sorted(degrees.begin(), degrees.end())) {
        throw std::invalid_argument("scaling_sweep: degrees must be ascending");
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    SweepResult sweep;
    sweep.slope = sweep.slope_stderr = sweep.intercept = sweep.log_model_prefactor = nan;

    std::vector<std::pair<int, double>> points;
    for (int d : degrees) {
        const DecisionProblem dp(kappa, beta_th, d);
        OptimizationResult design = optimize_phases(dp, cfg, threads);
        points.emplace_back(d, design.p_err);

        SweepRow row;
        row.degree = d;
        row.p_err = design.p_err;
        row.slope_running = nan;
        if (points.size() >= 3) {
            row.slope_running = fit_power_law(points).slope;
        }
        sweep.rows.push_back(row);
        sweep.designs.push_back(std::move(design));
    }

    if (points.size() >= 3) {
        const PowerLawFit fit = fit_power_law(points);
        sweep.slope = fit.slope;
        sweep.slope_stderr = fit.slope_stderr;
        sweep.intercept = fit.intercept;
    }
    std::vector<std::pair<int, double>> tail;
    for (const auto& p : points) {
        if (p.first >= 5) tail.push_back(p);
    }
    if (!tail.empty()) {
        sweep.log_model_prefactor = fit_log_model_prefactor(tail, kappa);
    }
    return sweep;
}

}  // namespace qspi
