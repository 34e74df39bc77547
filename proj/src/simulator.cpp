#include "qspi/simulator.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "qspi/errors.hpp"

namespace qspi {

namespace {

using Complex = std::complex<double>;

// Spectral factorization of the truncated position operator
// x = (a + a^dag) / sqrt(2); exponentials built from it stay unitary to
// machine precision at any truncation.
struct PositionSpectrum {
    Eigen::MatrixXd vectors;      // columns are eigenvectors
    Eigen::VectorXd values;       // eigenvalues
    Eigen::VectorXcd fock_phase;  // diag(i^n), rotates x into p
};

const PositionSpectrum& position_spectrum(int truncation) {
    static std::map<int, PositionSpectrum> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(truncation);
    if (it == cache.end()) {
        Eigen::MatrixXd x = Eigen::MatrixXd::Zero(truncation, truncation);
        for (int n = 0; n + 1 < truncation; ++n) {
            const double v = std::sqrt((n + 1) / 2.0);
            x(n, n + 1) = v;
            x(n + 1, n) = v;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x);
        PositionSpectrum spec;
        spec.vectors = solver.eigenvectors();
        spec.values = solver.eigenvalues();
        spec.fock_phase.resize(truncation);
        const Complex i_unit(0.0, 1.0);
        Complex phase(1.0, 0.0);
        for (int n = 0; n < truncation; ++n) {
            spec.fock_phase(n) = phase;
            phase *= i_unit;
        }
        it = cache.emplace(truncation, std::move(spec)).first;
    }
    return it->second;
}

Eigen::VectorXcd exp_ix_apply(const PositionSpectrum& spec, const Eigen::VectorXcd& vec,
                              double scale) {
    Eigen::VectorXcd coords = spec.vectors.transpose() * vec;
    for (int i = 0; i < coords.size(); ++i) {
        coords(i) *= std::polar(1.0, scale * spec.values(i));
    }
    return spec.vectors * coords;
}

void check_leakage(const HybridFockState& state) {
    const double leak = state.leakage();
    if (leak > kLeakageThreshold) {
        throw LeakageExceeded(leak, kLeakageThreshold);
    }
}

void prepare(HybridFockState& state, const PhaseSequence& phases) {
    gate_qubit_rotation(state, phases.angles[0]);
    for (int j = 1; j <= phases.degree(); ++j) {
        gate_conditional_displacement(state, phases.kappa, +1);
        gate_qubit_rotation(state, phases.angles[j]);
    }
}

void unprepare(HybridFockState& state, const PhaseSequence& phases) {
    for (int j = phases.degree(); j >= 1; --j) {
        gate_qubit_rotation(state, -phases.angles[j]);
        gate_conditional_displacement(state, phases.kappa, -1);
    }
    gate_qubit_rotation(state, -phases.angles[0]);
}

double run_protocol_once(const PhaseSequence& phases, double beta, int truncation) {
    HybridFockState state = HybridFockState::vacuum(truncation);
    prepare(state, phases);
    gate_signal_displacement(state, beta);
    unprepare(state, phases);
    return state.down.squaredNorm();
}

}  // namespace

HybridFockState HybridFockState::vacuum(int truncation) {
    if (truncation < 2) {
        throw std::invalid_argument("HybridFockState: truncation must be >= 2");
    }
    HybridFockState state;
    state.down = Eigen::VectorXcd::Zero(truncation);
    state.up = Eigen::VectorXcd::Zero(truncation);
    state.down(0) = Complex(1.0, 0.0);
    return state;
}

double HybridFockState::leakage() const {
    const int n = truncation();
    const int guard = std::max(1, n / 20);
    double pop = 0.0;
    for (int k = n - guard; k < n; ++k) {
        pop += std::norm(down(k)) + std::norm(up(k));
    }
    return pop;
}

void gate_qubit_rotation(HybridFockState& state, double theta) {
    const double c = std::cos(theta);
    const Complex is(0.0, std::sin(theta));
    Eigen::VectorXcd new_down = c * state.down + is * state.up;
    Eigen::VectorXcd new_up = is * state.down + c * state.up;
    state.down = std::move(new_down);
    state.up = std::move(new_up);
}

void gate_conditional_displacement(HybridFockState& state, double kappa, int sign) {
    const PositionSpectrum& spec = position_spectrum(state.truncation());
    // sigma_z = +1 on the down branch under the chosen basis map.
    state.down = exp_ix_apply(spec, state.down, sign * kappa);
    state.up = exp_ix_apply(spec, state.up, -sign * kappa);
    check_leakage(state);
}

void gate_signal_displacement(HybridFockState& state, double beta) {
    state.down = apply_exp_ip(state.down, beta);
    state.up = apply_exp_ip(state.up, beta);
    check_leakage(state);
}

Eigen::VectorXcd apply_exp_ix(const Eigen::VectorXcd& vec, double scale) {
    return exp_ix_apply(position_spectrum(static_cast<int>(vec.size())), vec, scale);
}

Eigen::VectorXcd apply_exp_ip(const Eigen::VectorXcd& vec, double scale) {
    // p = R x R^dag with R = diag(i^n), so e^{i beta p} = R e^{i beta x} R^dag.
    const PositionSpectrum& spec = position_spectrum(static_cast<int>(vec.size()));
    Eigen::VectorXcd rotated = spec.fock_phase.conjugate().cwiseProduct(vec);
    rotated = exp_ix_apply(spec, rotated, scale);
    return spec.fock_phase.cwiseProduct(rotated);
}

double mean_position(const Eigen::VectorXcd& vec) {
    const int n = static_cast<int>(vec.size());
    Complex acc(0.0, 0.0);
    for (int k = 0; k + 1 < n; ++k) {
        acc += std::conj(vec(k)) * vec(k + 1) * std::sqrt((k + 1) / 2.0);
    }
    return 2.0 * acc.real();
}

double run_protocol(const PhaseSequence& phases, double beta, int truncation,
                    bool verify_truncation) {
    phases.validate();
    const double p = run_protocol_once(phases, beta, truncation);
    if (verify_truncation) {
        const double p2 = run_protocol_once(phases, beta, 2 * truncation);
        if (std::abs(p - p2) > 1e-6) {
            throw TruncationWarning(std::abs(p - p2));
        }
    }
    return p;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd>
sensing_state_branches(const PhaseSequence& phases, int truncation) {
    phases.validate();
    HybridFockState state = HybridFockState::vacuum(truncation);
    prepare(state, phases);
    return {state.down, state.up};
}

std::vector<Table1Row> table1_probabilities(
    const std::map<int, PhaseSequence>& phases_per_degree, double kappa,
    double beta_th, int truncation) {
    std::vector<Table1Row> rows;
    const PhaseSequence cat({M_PI / 4.0, 0.0}, kappa, beta_th);
    Table1Row cat_row;
    cat_row.label = "cat";
    cat_row.p_below = run_protocol(cat, beta_th / 2.0, truncation);
    cat_row.p_above = run_protocol(cat, 3.0 * beta_th / 2.0, truncation);
    rows.push_back(cat_row);
    for (const auto& [degree, phases] : phases_per_degree) {
        Table1Row row;
        row.label = "qspi-" + std::to_string(degree);
        row.p_below = run_protocol(phases, beta_th / 2.0, truncation);
        row.p_above = run_protocol(phases, 3.0 * beta_th / 2.0, truncation);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qspi
