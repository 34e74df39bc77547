#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qspi {

// Ordered rotation angles theta_0..theta_d together with the coupling kappa
// and the decision threshold beta_th they were designed for. theta_0 is the
// first rotation applied to the qubit; theta_d is the last.
struct PhaseSequence {
    std::vector<double> angles;  // length d + 1
    double kappa = 0.0;
    double beta_th = 0.0;

    PhaseSequence() = default;
    PhaseSequence(std::vector<double> angles, double kappa, double beta_th);

    int degree() const { return static_cast<int>(angles.size()) - 1; }

    // Throws std::invalid_argument when the sensing-range or positivity
    // invariants fail: needs angles non-empty, kappa > 0 and
    // 0 < beta_th < pi / (2 kappa).
    void validate() const;
};

// Text format, one file per sequence:
//   line 1: "qspi-phases v1"
//   line 2: "d=<int> kappa=<decimal> beta_th=<decimal>"
//   then d+1 lines, one angle (radians) each, 17 significant digits.
std::string to_phase_file(const PhaseSequence& phases);
PhaseSequence parse_phase_file(const std::string& text);

void write_phase_file(const std::filesystem::path& path, const PhaseSequence& phases);
PhaseSequence read_phase_file(const std::filesystem::path& path);

}  // namespace qspi
