#include "qspi/phase_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qspi/io.hpp"

namespace qspi {

namespace {

constexpr const char* kMagic = "qspi-phases v1";

double parse_finite(const std::string& token, const char* what) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("phase file: bad ") + what + " '" + token + "'");
    }
    if (pos != token.size() || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("phase file: non-finite ") + what + " '" + token + "'");
    }
    return value;
}

}  // namespace

PhaseSequence::PhaseSequence(std::vector<double> angles, double kappa, double beta_th)
    : angles(std::move(angles)), kappa(kappa), beta_th(beta_th) {
    validate();
}

void PhaseSequence::validate() const {
    if (angles.empty()) {
        throw std::invalid_argument("PhaseSequence: needs at least one angle");
    }
    for (double a : angles) {
        if (!std::isfinite(a)) {
            throw std::invalid_argument("PhaseSequence: non-finite angle");
        }
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw std::invalid_argument("PhaseSequence: kappa must be > 0");
    }
    if (!(beta_th > 0.0) || !(beta_th < M_PI / (2.0 * kappa))) {
        throw std::invalid_argument("PhaseSequence: beta_th outside (0, pi/(2 kappa))");
    }
}

std::string to_phase_file(const PhaseSequence& phases) {
    phases.validate();
    std::ostringstream out;
    out << kMagic << "\n";
    out << "d=" << phases.degree() << " kappa=" << format_g17(phases.kappa)
        << " beta_th=" << format_g17(phases.beta_th) << "\n";
    for (double a : phases.angles) {
        out << format_g17(a) << "\n";
    }
    return out.str();
}

PhaseSequence parse_phase_file(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    if (lines.size() < 2 || lines[0] != kMagic) {
        throw std::invalid_argument("phase file: missing 'qspi-phases v1' header");
    }

    int d = -1;
    double kappa = 0.0, beta_th = 0.0;
    {
        std::istringstream meta(lines[1]);
        std::string tok;
        bool have_d = false, have_kappa = false, have_beta = false;
        while (meta >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("phase file: bad metadata token '" + tok + "'");
            }
            std::string key = tok.substr(0, eq);
            std::string val = tok.substr(eq + 1);
            if (key == "d") {
                d = static_cast<int>(parse_finite(val, "degree"));
                have_d = true;
            } else if (key == "kappa") {
                kappa = parse_finite(val, "kappa");
                have_kappa = true;
            } else if (key == "beta_th") {
                beta_th = parse_finite(val, "beta_th");
                have_beta = true;
            } else {
                throw std::invalid_argument("phase file: unknown metadata key '" + key + "'");
            }
        }
        if (!have_d || !have_kappa || !have_beta) {
            throw std::invalid_argument("phase file: metadata line needs d=, kappa=, beta_th=");
        }
    }
    if (d < 0) {
        throw std::invalid_argument("phase file: negative degree");
    }
    if (lines.size() != static_cast<std::size_t>(d) + 3) {
        throw std::invalid_argument("phase file: expected " + std::to_string(d + 1) +
                                    " angle lines, found " + std::to_string(lines.size() - 2));
    }
    std::vector<double> angles;
    angles.reserve(d + 1);
    for (int i = 0; i <= d; ++i) {
        angles.push_back(parse_finite(lines[2 + i], "angle"));
    }
    return PhaseSequence(std::move(angles), kappa, beta_th);
}

void write_phase_file(const std::filesystem::path& path, const PhaseSequence& phases) {
    atomic_write(path, to_phase_file(phases));
}

PhaseSequence read_phase_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open phase file: " + path.string());
    }
    std::ostringstream content;
    content << in.rdbuf();
    return parse_phase_file(content.str());
}

}  // namespace qspi
