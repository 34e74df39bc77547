#include "qspi/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qspi/decision.hpp"
#include "qspi/errors.hpp"
#include "qspi/estimation.hpp"
#include "qspi/io.hpp"
#include "qspi/laurent.hpp"
#include "qspi/optimizer.hpp"
#include "qspi/phase_file.hpp"
#include "qspi/response.hpp"
#include "qspi/simulator.hpp"
#include "qspi/version.hpp"
#include "qspi/wigner.hpp"

namespace qspi {

namespace {

using nlohmann::json;

struct GlobalOptions {
    std::uint64_t seed = 0;
    int threads = 0;
    std::vector<std::string> argv;
};

void write_manifest(const std::filesystem::path& output, const std::string& subcommand,
                    const GlobalOptions& global, const json& parameters,
                    const json& results) {
    json manifest;
    manifest["tool"] = "qspi";
    manifest["version"] = kVersion;
    manifest["subcommand"] = subcommand;
    manifest["command"] = global.argv;
    manifest["seed"] = global.seed;
    manifest["parameters"] = parameters;
    manifest["results"] = results;
    std::filesystem::path path = output;
    path += ".manifest.json";
    atomic_write(path, manifest.dump(2) + "\n");
}

double resolve_beta_th(const std::string& text, double kappa) {
    if (text == "auto") {
        // Protocol parameter choice: kappa = pi / (4 beta_th) inverted.
        return M_PI / (4.0 * kappa);
    }
    std::size_t pos = 0;
    const double value = std::stod(text, &pos);
    if (pos != text.size() || !std::isfinite(value)) {
        throw CLI::ValidationError("--beta-th", "expected a decimal or 'auto'");
    }
    return value;
}

std::vector<int> parse_degrees(const std::string& text) {
    std::vector<int> degrees;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        degrees.push_back(std::stoi(token));
    }
    return degrees;
}

OptimizerConfig make_config(std::uint64_t seed, int restarts, int keep_top) {
    OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.keep_top = std::min(keep_top, restarts);
    cfg.rng_seed = seed;
    return cfg;
}

int cmd_design(const GlobalOptions& global, int d, double kappa,
               const std::string& beta_th_text, int restarts, int keep_top,
               const std::string& output, const std::string& trace_path) {
    const double beta_th = resolve_beta_th(beta_th_text, kappa);
    const DecisionProblem dp(kappa, beta_th, d);
    const OptimizerConfig cfg = make_config(global.seed, restarts, keep_top);
    const OptimizationResult result = optimize_phases(dp, cfg, global.threads);
    write_phase_file(output, result.phases);

    if (!trace_path.empty()) {
        // A refinement re-run from the found optimum, recorded per iteration.
        std::ostringstream trace;
        trace << "iteration,best_perr\n";
        nelder_mead(
            [&](const std::vector<double>& angles) {
                return decision_error_for_angles(angles, dp);
            },
            result.phases.angles, cfg, 2000 * (d + 1),
            [&](int iter, double best) {
                trace << iter << "," << format_g17(best) << "\n";
            });
        atomic_write(trace_path, trace.str());
    }

    json params{{"d", d},           {"kappa", kappa},       {"beta_th", beta_th},
                {"restarts", restarts}, {"keep_top", cfg.keep_top}, {"output", output}};
    json results{{"p_err", result.p_err},
                 {"iterations", result.iterations},
                 {"converged", result.converged},
                 {"restart_index", result.restart_index}};
    write_manifest(output, "design", global, params, results);
    std::cout << "p_err " << format_g17(result.p_err) << " (restart "
              << result.restart_index << ", " << result.iterations << " iterations, "
              << (result.converged ? "converged" : "iteration cap") << ")\n";
    return 0;
}

int cmd_response(const GlobalOptions& global, const std::string& phase_path,
                 double beta_min, double beta_max_opt, int steps,
                 const std::string& output) {
    const PhaseSequence phases = read_phase_file(phase_path);
    const double beta_max =
        std::isnan(beta_max_opt) ? M_PI / (2.0 * phases.kappa) : beta_max_opt;
    const ResponseSpectrum rs =
        response_coefficients(build_laurent_direct(phases), phases.kappa);
    std::vector<double> betas;
    betas.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        betas.push_back(steps == 1 ? beta_min
                                   : beta_min + (beta_max - beta_min) * i / (steps - 1));
    }
    write_response_csv(output, rs, betas);
    json params{{"phases", phase_path}, {"beta_min", beta_min},
                {"beta_max", beta_max}, {"steps", steps}};
    write_manifest(output, "response", global, params, json::object());
    return 0;
}

int cmd_perr(const std::string& phase_path, const std::string& beta_th_override) {
    PhaseSequence phases = read_phase_file(phase_path);
    if (!beta_th_override.empty()) {
        phases.beta_th = resolve_beta_th(beta_th_override, phases.kappa);
        phases.validate();
    }
    const DecisionProblem dp(phases.kappa, phases.beta_th, phases.degree());
    const ResponseSpectrum rs =
        response_coefficients(build_laurent_direct(phases), phases.kappa);
    const double analytic = perr_analytic(rs, dp);
    const ErrorBreakdown breakdown = perr_quadrature(
        [&](double beta) { return response_probability(rs, beta); }, dp);
    std::cout << "p_err " << format_g17(analytic) << "\n";
    std::cout << "p_fn " << format_g17(breakdown.p_fn) << "\n";
    std::cout << "p_fp " << format_g17(breakdown.p_fp) << "\n";
    return 0;
}

int cmd_scaling(const GlobalOptions& global, const std::string& degrees_text,
                double kappa, const std::string& beta_th_text, int restarts,
                int keep_top, const std::string& output) {
    const std::vector<int> degrees = parse_degrees(degrees_text);
    const double beta_th = resolve_beta_th(beta_th_text, kappa);
    const OptimizerConfig cfg = make_config(global.seed, restarts, keep_top);
    const SweepResult sweep = scaling_sweep(degrees, kappa, beta_th, cfg, global.threads);

    std::ostringstream csv;
    csv << "d,p_err,slope_running\n";
    for (const SweepRow& row : sweep.rows) {
        csv << row.degree << "," << format_g17(row.p_err) << ","
            << format_g17(row.slope_running) << "\n";
    }
    atomic_write(output, csv.str());

    json params{{"degrees", degrees}, {"kappa", kappa}, {"beta_th", beta_th},
                {"restarts", restarts}};
    json results{{"slope", sweep.slope},
                 {"slope_stderr", sweep.slope_stderr},
                 {"intercept", sweep.intercept},
                 {"log_model_prefactor", sweep.log_model_prefactor}};
    write_manifest(output, "scaling", global, params, results);
    std::cout << "slope " << format_g17(sweep.slope) << " stderr "
              << format_g17(sweep.slope_stderr) << " log-model prefactor "
              << format_g17(sweep.log_model_prefactor) << "\n";
    return 0;
}

int cmd_simulate(const GlobalOptions& global, const std::vector<std::string>& phase_paths,
                 double beta, int truncation, bool verify_truncation, bool table1,
                 const std::string& output) {
    if (table1) {
        std::map<int, PhaseSequence> per_degree;
        double kappa = 0.0, beta_th = 0.0;
        for (const std::string& path : phase_paths) {
            PhaseSequence phases = read_phase_file(path);
            kappa = phases.kappa;
            beta_th = phases.beta_th;
            per_degree.emplace(phases.degree(), std::move(phases));
        }
        if (per_degree.empty()) {
            throw CLI::ValidationError("--phases", "--table1 needs at least one phase file");
        }
        const auto rows = table1_probabilities(per_degree, kappa, beta_th, truncation);
        std::ostringstream table;
        table << "state,p_below,p_above\n";
        for (const Table1Row& row : rows) {
            table << row.label << "," << format_g17(row.p_below) << ","
                  << format_g17(row.p_above) << "\n";
        }
        std::cout << table.str();
        if (!output.empty()) {
            atomic_write(output, table.str());
            json params{{"phases", phase_paths}, {"truncation", truncation},
                        {"kappa", kappa},        {"beta_th", beta_th}};
            write_manifest(output, "simulate", global, params, json::object());
        }
        return 0;
    }
    if (phase_paths.size() != 1) {
        throw CLI::ValidationError("--phases", "simulate needs exactly one phase file");
    }
    const PhaseSequence phases = read_phase_file(phase_paths[0]);
    const double p = run_protocol(phases, beta, truncation, verify_truncation);
    std::cout << format_g17(p) << "\n";
    return 0;
}

int cmd_estimate(const GlobalOptions& global, int d, double range, double delta,
                 int votes, int trials, double true_beta, int restarts, int keep_top,
                 int truncation, const std::string& backend_name,
                 const std::string& output) {
    const SearchPlan plan(range, delta, votes, d);
    const OptimizerConfig cfg = make_config(global.seed, restarts, keep_top);
    const QspiOracle::Backend backend = backend_name == "series"
                                            ? QspiOracle::Backend::Series
                                            : QspiOracle::Backend::Simulator;
    QspiOracle oracle(d, plan.kappa, cfg, backend, truncation, global.threads);
    const double model_perr = oracle.design_perr(range / 2.0);

    std::ostringstream csv;
    csv << "trial,true_beta,low,high,queries,success\n";
    int failures = 0;
    double model_failure = failure_model(d, plan.kappa, range, votes, model_perr);
    for (int trial = 0; trial < trials; ++trial) {
        CounterRng rng(CounterRng::derive_key(global.seed, trial));
        const double beta = true_beta >= 0.0 ? true_beta : rng.next_double() * range;
        const EstimateResult estimate = binary_search_estimate(
            plan,
            [&](double threshold) { return oracle.shot(threshold, beta, rng); },
            model_perr, [&](double threshold) { return oracle.edge_width(threshold); });
        const bool success = estimate.low <= beta && beta <= estimate.high;
        if (!success) ++failures;
        csv << trial << "," << format_g17(beta) << "," << format_g17(estimate.low)
            << "," << format_g17(estimate.high) << "," << estimate.queries_used << ","
            << (success ? 1 : 0) << "\n";
    }
    const double empirical = trials > 0 ? static_cast<double>(failures) / trials : 0.0;
    csv << "# empirical_failure=" << format_g17(empirical)
        << " model_failure=" << format_g17(model_failure) << "\n";
    atomic_write(output, csv.str());

    json params{{"d", d},         {"R", range},        {"delta", delta},
                {"M", votes},     {"trials", trials},  {"true_beta", true_beta},
                {"restarts", restarts}, {"backend", backend_name}, {"truncation", truncation}};
    json results{{"empirical_failure", empirical}, {"model_failure", model_failure}};
    write_manifest(output, "estimate", global, params, results);
    std::cout << "empirical_failure " << format_g17(empirical) << " model_failure "
              << format_g17(model_failure) << "\n";
    return 0;
}

int cmd_wigner(const GlobalOptions& global, const std::string& phase_path,
               const WignerGridSpec& spec, bool normalize, int truncation,
               const std::string& prefix) {
    const PhaseSequence phases = read_phase_file(phase_path);
    auto [down, up] = sensing_state_branches(phases, truncation);
    if (normalize) {
        if (down.norm() > 0.0) down /= down.norm();
        if (up.norm() > 0.0) up /= up.norm();
    }
    const std::string f_path = prefix + "_f.csv";
    const std::string g_path = prefix + "_g.csv";
    write_wigner_csv(f_path, wigner(down, spec));
    write_wigner_csv(g_path, wigner(up, spec));
    write_branch_csv(prefix + "_f_branch.csv", down);
    write_branch_csv(prefix + "_g_branch.csv", up);

    // Sidecar so an external plotter can reproduce the symlog rendering.
    json meta{{"x_axis", "x"},
              {"p_axis", "p"},
              {"value", "wigner_quasiprobability"},
              {"color_scale", {{"type", "symlog"}, {"linthresh", 1e-4}, {"vmin", -1.0 / M_PI}, {"vmax", 1.0 / M_PI}}},
              {"files", {f_path, g_path}},
              {"normalized_branches", normalize}};
    atomic_write(prefix + "_meta.json", meta.dump(2) + "\n");

    json params{{"phases", phase_path},   {"x_min", spec.x_min}, {"x_max", spec.x_max},
                {"p_min", spec.p_min},    {"p_max", spec.p_max}, {"step", spec.step},
                {"truncation", truncation}, {"normalize", normalize}};
    write_manifest(f_path, "wigner", global, params, json::object());
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Qubit-oscillator interferometric sensing toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global --seed/--threads may follow the subcommand
    app.set_config("--config");
    app.set_version_flag("--version", kVersion);

    GlobalOptions global;
    for (int i = 0; i < argc; ++i) global.argv.emplace_back(argv[i]);
    app.add_option("--seed", global.seed, "RNG seed")->capture_default_str();
    app.add_option("--threads", global.threads,
                   "Internal parallelism cap (0 = hardware)")
        ->capture_default_str();

    // design
    auto* design = app.add_subcommand("design", "Optimize phases for a decision problem");
    int d = 1;
    double kappa = 1.0;
    std::string beta_th_text = "auto";
    int restarts = 32, keep_top = 4;
    std::string output, trace_path;
    design->add_option("--d", d, "Protocol degree")->required();
    design->add_option("--kappa", kappa, "Momentum-kick magnitude")->required();
    design->add_option("--beta-th", beta_th_text, "Decision threshold or 'auto'")
        ->capture_default_str();
    design->add_option("--restarts", restarts)->capture_default_str();
    design->add_option("--keep-top", keep_top)->capture_default_str();
    design->add_option("--output", output, "Phase file destination")->required();
    design->add_option("--trace", trace_path, "Optional iteration,best_perr log");

    // response
    auto* response = app.add_subcommand("response", "Tabulate the qubit response curve");
    std::string phase_path;
    double beta_min = 0.0;
    double beta_max = std::nan("");
    int steps = 0;
    response->add_option("--phases", phase_path)->required();
    response->add_option("--beta-min", beta_min)->capture_default_str();
    response->add_option("--beta-max", beta_max, "Default: pi / (2 kappa)");
    response->add_option("--steps", steps, "Grid size (must be >= 1)")->required();
    response->add_option("--output", output)->required();

    // perr
    auto* perr = app.add_subcommand("perr", "Decision error of a phase file");
    std::string beta_th_override;
    perr->add_option("--phases", phase_path)->required();
    perr->add_option("--beta-th", beta_th_override, "Override the stored threshold");

    // scaling
    auto* scaling = app.add_subcommand("scaling", "Error-vs-degree study");
    std::string degrees_text = "1,3,5,7,9,11,13";
    scaling->add_option("--degrees", degrees_text, "Comma-separated ascending degrees")
        ->capture_default_str();
    scaling->add_option("--kappa", kappa)->required();
    scaling->add_option("--beta-th", beta_th_text)->capture_default_str();
    scaling->add_option("--restarts", restarts)->capture_default_str();
    scaling->add_option("--keep-top", keep_top)->capture_default_str();
    scaling->add_option("--output", output)->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Fock-space protocol simulation");
    std::vector<std::string> phase_paths;
    double beta = 0.0;
    int truncation = 500;
    bool verify_truncation = false;
    bool table1 = false;
    simulate->add_option("--phases", phase_paths, "Phase file (repeatable with --table1)")
        ->required();
    simulate->add_option("--beta", beta, "Signal displacement");
    simulate->add_option("--truncation", truncation)->capture_default_str();
    simulate->add_flag("--verify-truncation", verify_truncation,
                       "Re-run at 2N and require agreement");
    simulate->add_flag("--table1", table1, "Probe beta_th/2 and 3 beta_th/2 per state");
    simulate->add_option("--output", output, "Optional CSV destination");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Bit-by-bit displacement estimation");
    double range = 1.0, delta = 1.0 / 16.0, true_beta = -1.0;
    int votes = 1, trials = 100;
    std::string backend_name = "simulator";
    estimate->add_option("--d", d)->required();
    estimate->add_option("--R", range, "Prior range upper bound")->capture_default_str();
    estimate->add_option("--delta", delta, "Target precision")->capture_default_str();
    estimate->add_option("--M", votes, "Votes per decision (odd)")->capture_default_str();
    estimate->add_option("--trials", trials)->capture_default_str();
    estimate->add_option("--true-beta", true_beta,
                         "Fixed true displacement (negative = sample uniformly)")
        ->capture_default_str();
    estimate->add_option("--restarts", restarts)->capture_default_str();
    estimate->add_option("--keep-top", keep_top)->capture_default_str();
    estimate->add_option("--truncation", truncation)->capture_default_str();
    estimate->add_option("--backend", backend_name, "simulator | series")
        ->check(CLI::IsMember({"simulator", "series"}))
        ->capture_default_str();
    estimate->add_option("--output", output, "Report CSV destination")->required();

    // wigner
    auto* wigner_cmd = app.add_subcommand("wigner", "Export branch Wigner functions");
    WignerGridSpec spec;
    bool normalize = false;
    std::string prefix;
    wigner_cmd->add_option("--phases", phase_path)->required();
    wigner_cmd->add_option("--x-min", spec.x_min)->capture_default_str();
    wigner_cmd->add_option("--x-max", spec.x_max)->capture_default_str();
    wigner_cmd->add_option("--p-min", spec.p_min)->capture_default_str();
    wigner_cmd->add_option("--p-max", spec.p_max)->capture_default_str();
    wigner_cmd->add_option("--step", spec.step)->capture_default_str();
    wigner_cmd->add_option("--truncation", truncation)->capture_default_str();
    wigner_cmd->add_flag("--normalize-branch", normalize,
                         "Normalize each branch before the transform");
    wigner_cmd->add_option("--output-prefix", prefix)->required();

    try {
        app.parse(argc, argv);
        if (response->parsed() && steps < 1) {
            throw CLI::ValidationError("--steps", "grid needs at least one point");
        }
        if (design->parsed()) {
            return cmd_design(global, d, kappa, beta_th_text, restarts, keep_top, output,
                              trace_path);
        }
        if (response->parsed()) {
            return cmd_response(global, phase_path, beta_min, beta_max, steps, output);
        }
        if (perr->parsed()) {
            return cmd_perr(phase_path, beta_th_override);
        }
        if (scaling->parsed()) {
            return cmd_scaling(global, degrees_text, kappa, beta_th_text, restarts,
                               keep_top, output);
        }
        if (simulate->parsed()) {
            return cmd_simulate(global, phase_paths, beta, truncation, verify_truncation,
                                table1, output);
        }
        if (estimate->parsed()) {
            return cmd_estimate(global, d, range, delta, votes, trials, true_beta,
                                restarts, keep_top, truncation, backend_name, output);
        }
        if (wigner_cmd->parsed()) {
            return cmd_wigner(global, phase_path, spec, normalize, truncation, prefix);
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 1;
    } catch (const Error& e) {
        std::cerr << "numerical invariant failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace qspi
