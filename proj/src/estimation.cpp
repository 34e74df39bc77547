#include "qspi/estimation.hpp"

#include <cmath>
#include <stdexcept>

#include "qspi/laurent.hpp"
#include "qspi/response.hpp"
#include "qspi/simulator.hpp"

namespace qspi {

namespace {

long long rounded_key(double value) {
    return static_cast<long long>(std::llround(value * 1e9));
}

}  // namespace

SearchPlan::SearchPlan(double range, double delta, int votes, int degree,
                       std::optional<double> kappa)
    : range(range), delta(delta), votes(votes), degree(degree),
      kappa(kappa.value_or(M_PI / (2.0 * range))) {
    validate();
}

void SearchPlan::validate() const {
    if (!(range > 0.0) || !(delta > 0.0) || delta >= range) {
        throw std::invalid_argument("SearchPlan: needs 0 < delta < R");
    }
    if (votes < 1 || votes % 2 == 0) {
        throw std::invalid_argument("SearchPlan: votes must be odd and >= 1");
    }
    if (degree < 1) {
        throw std::invalid_argument("SearchPlan: degree must be >= 1");
    }
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("SearchPlan: kappa must be > 0");
    }
}

int n_query_ideal(double range, double delta) {
    if (!(range > 0.0) || !(delta > 0.0) || delta >= range) {
        throw std::invalid_argument("n_query_ideal: needs 0 < delta < range");
    }
    // Smallest k with delta * 2^k >= range; exact at power-of-two ratios.
    int k = 0;
    while (std::ldexp(delta, k) < range && k < 1024) ++k;
    return k;
}

int n_query_max(int d, double kappa, double range) {
    if (d < 2) {
        throw std::invalid_argument("n_query_max: needs d >= 2");
    }
    const double limit = kappa * d * range / std::log(static_cast<double>(d));
    if (!(limit > 1.0)) return 0;
    return static_cast<int>(std::floor(std::log2(limit)));
}

double majority_error_exact(double perr, int votes) {
    if (votes == 1) return perr;
    double total = 0.0;
    // Exact binomial tail over majorities of wrong shots.
    for (int m = (votes + 1) / 2; m <= votes; ++m) {
        double term = std::exp(std::lgamma(votes + 1) - std::lgamma(m + 1) -
                               std::lgamma(votes - m + 1));
        term *= std::pow(perr, m) * std::pow(1.0 - perr, votes - m);
        total += term;
    }
    return total;
}

double majority_error_stirling(double perr, int votes) {
    const double half = votes / 2.0;
    return std::exp(std::lgamma(votes + 1) - 2.0 * std::lgamma(half + 1)) *
           std::pow(perr, half);
}

double failure_model(int d, double kappa, double range, int votes, double perr) {
    if (perr <= 0.0) return 0.0;
    if (perr >= 0.5) return 1.0;
    const double per_decision = majority_error_exact(perr, votes);
    return std::min(1.0, per_decision * n_query_max(d, kappa, range));
}

MajorityOutcome majority_decide(const ThresholdOracle& oracle, double threshold,
                                int votes) {
    if (votes < 1 || votes % 2 == 0) {
        throw std::invalid_argument("majority_decide: votes must be odd and >= 1");
    }
    MajorityOutcome out;
    for (int i = 0; i < votes; ++i) {
        if (oracle(threshold)) {
            ++out.votes_below;
        } else {
            ++out.votes_above;
        }
    }
    out.below = out.votes_below > out.votes_above;
    return out;
}

EstimateResult binary_search_estimate(const SearchPlan& plan,
                                      const ThresholdOracle& oracle, double model_perr,
                                      const std::function<double(double)>& edge_width) {
    plan.validate();
    const int budget = std::min(n_query_ideal(plan.range, plan.delta),
                                n_query_max(plan.degree, plan.kappa, plan.range));

    EstimateResult result;
    result.low = 0.0;
    result.high = plan.range;
    for (int step = 0; step < budget; ++step) {
        const double threshold = 0.5 * (result.low + result.high);
        if (edge_width) {
            result.edge_width = edge_width(threshold);
            if (result.high - result.low <= result.edge_width) {
                result.floor_reached = true;
                break;
            }
        }
        const MajorityOutcome vote = majority_decide(oracle, threshold, plan.votes);
        result.decisions.push_back(
            {threshold, vote.below, vote.votes_below, vote.votes_above});
        if (vote.below) {
            result.high = threshold;
        } else {
            result.low = threshold;
        }
        if (result.high - result.low <= plan.delta) break;
    }
    result.queries_used = plan.votes * static_cast<int>(result.decisions.size());
    result.success_model =
        1.0 - failure_model(plan.degree, plan.kappa, plan.range, plan.votes, model_perr);
    return result;
}

const OptimizationResult& PhaseCache::get(double kappa, double beta_th) {
    const std::pair<long long, long long> key{rounded_key(kappa), rounded_key(beta_th)};
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    // Warm-start from the cached design with the nearest threshold.
    const OptimizationResult* nearest = nullptr;
    double best_distance = 0.0;
    for (const auto& [k, design] : cache_) {
        const double distance = std::abs(design.phases.beta_th - beta_th) +
                                std::abs(design.phases.kappa - kappa);
        if (nearest == nullptr || distance < best_distance) {
            nearest = &design;
            best_distance = distance;
        }
    }
    OptimizationResult design;
    if (nearest != nullptr) {
        design = warm_start(*nearest, kappa, beta_th, cfg_);
    } else {
        design = optimize_phases(DecisionProblem(kappa, beta_th, degree_), cfg_, threads_);
    }
    return cache_.emplace(key, std::move(design)).first->second;
}

QspiOracle::QspiOracle(int degree, double kappa, const OptimizerConfig& cfg,
                       Backend backend, int truncation, int threads)
    : degree_(degree), kappa_(kappa), backend_(backend), truncation_(truncation),
      cache_(degree, cfg, threads) {}

const OptimizationResult& QspiOracle::design(double beta_th) {
    return cache_.get(kappa_, beta_th);
}

double QspiOracle::probability(double threshold, double beta_true) {
    const std::pair<long long, long long> key{rounded_key(threshold),
                                              rounded_key(beta_true)};
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = probability_cache_.find(key);
        if (it != probability_cache_.end()) return it->second;
    }
    const OptimizationResult& d = design(threshold);
    double p = 0.0;
    if (backend_ == Backend::Simulator) {
        p = run_protocol(d.phases, beta_true, truncation_);
    } else {
        const ResponseSpectrum rs =
            response_coefficients(build_laurent_recursive(d.phases), kappa_);
        p = response_probability(rs, beta_true);
    }
    std::lock_guard<std::mutex> lock(mutex_);
    probability_cache_.emplace(key, p);
    return p;
}

bool QspiOracle::shot(double threshold, double beta_true, CounterRng& rng) {
    return rng.next_bernoulli(probability(threshold, beta_true));
}

double QspiOracle::edge_width(double threshold) {
    const OptimizationResult& d = design(threshold);
    const ResponseSpectrum rs =
        response_coefficients(build_laurent_recursive(d.phases), kappa_);
    // Scan outward from the threshold for the 0.9 and 0.1 crossings.
    const double cell = M_PI / (2.0 * kappa_);
    const double step = cell * 1e-4;
    double lo = threshold, hi = threshold;
    while (lo > 0.0 && response_probability(rs, lo) < 0.9) lo -= step;
    while (hi < cell && response_probability(rs, hi) > 0.1) hi += step;
    return hi - lo;
}

double QspiOracle::design_perr(double threshold) {
    return design(threshold).p_err;
}

}  // namespace qspi
