#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qspi/decision.hpp"
#include "qspi/fitting.hpp"
#include "qspi/phase_file.hpp"

namespace qspi {

struct OptimizerConfig {
    int restarts = 32;
    int keep_top = 4;
    // <= 0 picks the default budgets: 200 (d+1) iterations for the coarse
    // pass over all restarts, 2000 (d+1) for refinement of the keep_top best.
    int max_iterations = 0;
    double angle_tolerance = 1e-5;
    double objective_tolerance = 1e-5;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct OptimizationResult {
    PhaseSequence phases;
    double p_err = 0.0;
    int iterations = 0;
    bool converged = false;
    int restart_index = 0;
};

struct NelderMeadResult {
    std::vector<double> point;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;
// Called after each iteration with (iteration, best value so far).
using TraceSink = std::function<void(int, double)>;

// Standard simplex method: reflection 1, expansion 2, contraction 0.5,
// shrink 0.5; initial simplex is `start` plus 0.1-radian steps along each
// coordinate. Converged when the simplex value spread drops to
// objective_tolerance or every coordinate spread drops to angle_tolerance.
// Throws NonFiniteObjective when the objective produces a non-finite value.
NelderMeadResult nelder_mead(const Objective& objective,
                             const std::vector<double>& start,
                             const OptimizerConfig& cfg,
                             int max_iterations,
                             const TraceSink& trace = nullptr);

// Decision-error objective used by the phase search:
// perr_analytic o response_coefficients o build_laurent_recursive.
double decision_error_for_angles(const std::vector<double>& angles,
                                 const DecisionProblem& dp);

// Multi-start search: `restarts` uniform [-pi, pi)^(d+1) starts from the
// counter RNG keyed by (rng_seed, restart index), a coarse pass on all, then
// full refinement of the keep_top best. Deterministic for fixed inputs and
// seed, independent of `threads`.
OptimizationResult optimize_phases(const DecisionProblem& dp, const OptimizerConfig& cfg,
                                   int threads = 0);

// Re-optimizes prev.phases under new parameters; no random restarts.
OptimizationResult warm_start(const OptimizationResult& prev, double new_kappa,
                              double new_beta_th, const OptimizerConfig& cfg);

struct SweepRow {
    int degree = 0;
    double p_err = 0.0;
    double slope_running = 0.0;  // NaN until three rows exist
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<OptimizationResult> designs;
    // NaN markers when the fit is underdetermined.
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    double log_model_prefactor = 0.0;
};

// optimize_phases per degree plus a log-log least-squares fit; the
// log-corrected 1/d model prefactor is fitted on the d >= 5 rows.
SweepResult scaling_sweep(const std::vector<int>& degrees, double kappa,
                          double beta_th, const OptimizerConfig& cfg,
                          int threads = 0);

}  // namespace qspi
