#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "qspi/optimizer.hpp"
#include "qspi/rng.hpp"

namespace qspi {

// Bit-by-bit estimation setup: unknown beta in [0, R], target precision
// delta, M-vote majority decisions with a degree-d oracle at kappa chosen so
// the full prior range fits one sensing cell.
struct SearchPlan {
    double range = 1.0;     // R
    double delta = 1e-2;
    int votes = 1;          // M, odd
    int degree = 5;
    double kappa = 0.0;     // defaults to pi / (2R)

    SearchPlan() = default;
    SearchPlan(double range, double delta, int votes, int degree,
               std::optional<double> kappa = std::nullopt);
    void validate() const;
};

struct DecisionRecord {
    double threshold = 0.0;
    bool below = false;
    int votes_below = 0;
    int votes_above = 0;
};

struct EstimateResult {
    double low = 0.0;
    double high = 0.0;
    int queries_used = 0;
    std::vector<DecisionRecord> decisions;
    double success_model = 1.0;
    // Response edge width at the final threshold when the oracle reports
    // one; the accuracy floor is reached when the interval is narrower.
    double edge_width = 0.0;
    bool floor_reached = false;
};

// ceil(log2(R / delta)), exact at power-of-two ratios.
int n_query_ideal(double range, double delta);

// floor(log2(kappa d R / log d)) clamped to >= 0; requires d >= 2.
int n_query_max(int d, double kappa, double range);

// Exact majority-vote error for a per-shot error probability p and M odd.
double majority_error_exact(double perr, int votes);
// The factorial-approximation form M!/((M/2)!(M/2)!) p^{M/2}, reported for
// comparison against the exact tail.
double majority_error_stirling(double perr, int votes);

// Overall failure probability model: per-decision error (exact tail for
// M > 1, perr itself for M = 1) times n_query_max, capped at 1.
double failure_model(int d, double kappa, double range, int votes, double perr);

// One threshold oracle shot: answers "beta is below the threshold".
using ThresholdOracle = std::function<bool(double threshold)>;

struct MajorityOutcome {
    bool below = false;
    int votes_below = 0;
    int votes_above = 0;
};
MajorityOutcome majority_decide(const ThresholdOracle& oracle, double threshold,
                                int votes);

// Midpoint bisection of [0, R] with majority-voted decisions. Stops at
// min(n_query_ideal, n_query_max) decisions, earlier if the interval width
// reaches delta or falls below the reported response edge width.
// `model_perr` feeds the modeled success probability; `edge_width` (if
// given) is queried per threshold for the accuracy-floor report.
EstimateResult binary_search_estimate(
    const SearchPlan& plan, const ThresholdOracle& oracle, double model_perr = 0.0,
    const std::function<double(double)>& edge_width = nullptr);

// Phase designs per (kappa, beta_th) with warm-starting from the nearest
// cached threshold; keys are rounded at 1e-9. Thread-safe inserts.
class PhaseCache {
public:
    PhaseCache(int degree, const OptimizerConfig& cfg, int threads = 0)
        : degree_(degree), cfg_(cfg), threads_(threads) {}

    const OptimizationResult& get(double kappa, double beta_th);

private:
    int degree_;
    OptimizerConfig cfg_;
    int threads_;
    std::mutex mutex_;
    std::map<std::pair<long long, long long>, OptimizationResult> cache_;
};

// Oracle backed by the QSPI protocol: designs phases per threshold, obtains
// P(down | beta_true) either from the Fock simulator or the series sum, and
// samples single shots from it.
class QspiOracle {
public:
    enum class Backend { Simulator, Series };

    QspiOracle(int degree, double kappa, const OptimizerConfig& cfg,
               Backend backend = Backend::Simulator, int truncation = 500,
               int threads = 0);

    // Single measurement shot for the decision at `threshold` given the true
    // displacement; consumes one Bernoulli draw from rng.
    bool shot(double threshold, double beta_true, CounterRng& rng);

    // P(down | beta_true) for the design at `threshold` (cached).
    double probability(double threshold, double beta_true);

    // Distance between the P = 0.9 and P = 0.1 crossings around the
    // threshold, measured on the designed response.
    double edge_width(double threshold);

    // Decision error density of the design at `threshold`.
    double design_perr(double threshold);

private:
    const OptimizationResult& design(double beta_th);

    int degree_;
    double kappa_;
    Backend backend_;
    int truncation_;
    PhaseCache cache_;
    std::mutex mutex_;
    std::map<std::pair<long long, long long>, double> probability_cache_;
};

}  // namespace qspi
