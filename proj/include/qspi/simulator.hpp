#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "qspi/phase_file.hpp"

namespace qspi {

// Joint qubit-oscillator state vector at Fock truncation N. The qubit basis
// maps |down> to the +1 eigenvector of sigma_z, so the conditional
// displacement boosts the down branch momentum by +kappa; the d = 1
// regression P = cos^2(kappa beta) pins this mapping (the response is even
// in kappa, so the flipped mapping gives identical probabilities).
struct HybridFockState {
    Eigen::VectorXcd down;
    Eigen::VectorXcd up;

    int truncation() const { return static_cast<int>(down.size()); }
    double norm_squared() const { return down.squaredNorm() + up.squaredNorm(); }
    // Population in the top 5% of Fock levels (at least one level).
    double leakage() const;

    static HybridFockState vacuum(int truncation);
};

// Population threshold above which displacement-type gates refuse to proceed.
inline constexpr double kLeakageThreshold = 1e-6;

// e^{i theta sigma_x} on the qubit factor.
void gate_qubit_rotation(HybridFockState& state, double theta);

// e^{sign * i kappa x sigma_z}: momentum kick +-kappa with the sign set by
// the qubit branch. Exact exponential of the truncated position operator.
void gate_conditional_displacement(HybridFockState& state, double kappa, int sign = +1);

// I (x) e^{i beta p}: position kick x -> x - beta on both branches.
void gate_signal_displacement(HybridFockState& state, double beta);

// Full sensing run: state preparation with `phases`, signal displacement by
// beta, inverse preparation, probability of measuring the qubit down.
// With verify_truncation set the run is repeated at 2N and a shift of the
// probability above 1e-6 raises TruncationWarning.
double run_protocol(const PhaseSequence& phases, double beta, int truncation,
                    bool verify_truncation = false);

// Oscillator branch vectors (unnormalized) right after state preparation;
// their squared norms sum to one.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd>
sensing_state_branches(const PhaseSequence& phases, int truncation);

// Oscillator-only helpers shared with tests and the Wigner tooling.
Eigen::VectorXcd apply_exp_ix(const Eigen::VectorXcd& vec, double scale);
Eigen::VectorXcd apply_exp_ip(const Eigen::VectorXcd& vec, double scale);
double mean_position(const Eigen::VectorXcd& vec);

struct Table1Row {
    std::string label;
    double p_below = 0.0;  // beta = beta_th / 2
    double p_above = 0.0;  // beta = 3 beta_th / 2
};

// Probabilities of measuring down after the full protocol at the two probe
// displacements, for the closed-form cat reference (theta_0 = pi/4, d = 1)
// and for each supplied phase sequence.
std::vector<Table1Row> table1_probabilities(
    const std::map<int, PhaseSequence>& phases_per_degree, double kappa,
    double beta_th, int truncation);

}  // namespace qspi
