#include "lambdagen/runner.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "lambdagen/analytic.hpp"
#include "lambdagen/io.hpp"
#include "lambdagen/solvers.hpp"

namespace lambdagen {

namespace {

using nlohmann::json;

json nan_safe(Real v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

// One log line whenever zeta passes another tenth of zeta_max.
ProgressFn decade_logger(std::ostream* log, const std::string& name, Real zeta_max)
{
    if (!log)
        return {};
    return [log, name, zeta_max, next = 0](Real zeta) mutable {
        while (next <= 10 && zeta >= zeta_max * next / 10.0 - 1e-12) {
            *log << "[" << name << "] zeta = " << zeta << " (" << next * 10 << "%)\n";
            ++next;
        }
    };
}

json regime_json(const analysis::RegimeReport& r)
{
    return {{"r1_omega_over_gamma", nan_safe(r.r1)},
            {"r2_inverse_gamma_tau_bar", nan_safe(r.r2)},
            {"r3_omega2_tau_bar_over_gamma", nan_safe(r.r3)},
            {"r1_status", analysis::to_string(r.s1)},
            {"r2_status", analysis::to_string(r.s2)},
            {"r3_status", analysis::to_string(r.s3)},
            {"status", analysis::to_string(r.overall)},
            {"pass_below", analysis::kRegimePassBelow},
            {"warn_below", analysis::kRegimeWarnBelow}};
}

json run_summary_json(const FieldState& f)
{
    const Real z_end = f.zeta_grid[f.zeta_count() - 1];
    json j;
    j["zeta_max"] = z_end;
    try {
        j["efficiency"] = analysis::conversion_efficiency(f, z_end);
        j["transmission"] = analysis::transmission(f, z_end);
        j["energy_efficiency"] = analysis::energy_conversion_efficiency(f, z_end);
        j["energy_transmission"] = analysis::energy_transmission(f, z_end);
        const analysis::ConvergenceReport c = analysis::convergence_report(f);
        j["convergence"] = {{"zeta_from", c.zeta_from},
                            {"zeta_to", c.zeta_to},
                            {"transmission_change", c.transmission_change},
                            {"efficiency_change", c.efficiency_change}};
    } catch (const DivisionError&) {
        j["efficiency"] = nullptr;
        j["transmission"] = nullptr;
        j["note"] = "injected pulse is identically zero";
    }
    return j;
}

void write_outputs(const SolverRun& run, const ExperimentConfig& config,
                   const CoherenceProfile& profile, const PulseEnvelope& pulse)
{
    std::error_code ec;
    std::filesystem::create_directories(run.directory, ec);
    if (ec)
        throw io::IoError("cannot create '" + run.directory.string() + "': " + ec.message());
    io::write_fields_csv(run.directory / "fields.csv", run.fields);
    io::write_summary_csv(run.directory / "summary.csv", run.fields, profile, config.medium);
    io::write_peaks_csv(run.directory / "peaks_vs_zeta.csv", run.fields);
    io::write_slices(run.directory, run.fields, pulse.amplitude(), config.record_zeta);
}

void check_solver_preconditions(const ExperimentConfig& config)
{
    if (config.solver == SolverChoice::full)
        return;
    if (!config.medium.two_photon_resonant())
        throw ConfigError("delta2", "reduced solver requires delta1 == delta2");
    if (config.medium.delta1 == 0.0 && config.medium.gamma == 0.0)
        throw ConfigError("gamma", "reduced solver requires delta != 0 or gamma > 0");
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, std::ostream* log)
{
    config.validate();
    check_solver_preconditions(config);

    const CoherenceProfile profile = config.build_profile();
    const PulseEnvelope pulse = config.build_pulse();
    const Eigen::VectorXd tau = config.tau_grid();

    RunResult result;
    result.regime = analysis::regime_check(config.medium, pulse);

    if (config.solver != SolverChoice::full) {
        SolverRun run{"reduced",
                      reduced_propagate(profile, config.medium, pulse, config.reduced_config(), tau,
                                        decade_logger(log, "reduced", config.zeta_max)),
                      config.output_dir / "reduced"};
        result.runs.push_back(std::move(run));
    }
    if (config.solver != SolverChoice::reduced) {
        FullResult full = full_propagate(profile, config.medium, pulse, config.full_config(),
                                         decade_logger(log, "full", config.zeta_max));
        result.runs.push_back({"full", std::move(full.fields), config.output_dir / "full"});
    }
    if (result.runs.size() == 2) {
        try {
            result.comparison = analysis::compare_solvers(result.runs[0].fields,
                                                          result.runs[1].fields);
        } catch (const DivisionError&) {
            // zero input pulse: nothing to compare
        }
    }

    for (const SolverRun& run : result.runs)
        write_outputs(run, config, profile, pulse);

    json report;
    json echo = json::object();
    for (const auto& [key, value] : config.to_key_values())
        echo[key] = value;
    report["config"] = echo;
    report["regime_check"] = regime_json(result.regime);

    const ReducedSolverConfig rc = config.reduced_config();
    const FullSolverConfig fc = config.full_config();
    json settings;
    settings["tau_points"] = tau.size();
    settings["tau_step"] = tau.size() > 1 ? tau[1] - tau[0] : 0.0;
    settings["reduced"] = {{"method", "rk4"},
                           {"zeta_max", rc.zeta_max},
                           {"d_zeta", rc.step()},
                           {"steps", rc.steps()},
                           {"record_every", rc.record_every}};
    settings["full"] = {{"zeta_order", "midpoint"},
                        {"atomic_method", "rk4"},
                        {"zeta_max", fc.zeta_max},
                        {"d_zeta", fc.step()},
                        {"steps", fc.steps()},
                        {"record_every", fc.record_every},
                        {"tau_interpolation", "linear"}};
    report["solver_settings"] = settings;

    try {
        const analytic::AdiabaticityReport a =
            analytic::adiabaticity_ratio(profile, config.medium, result.runs.front().fields.zeta_grid);
        report["adiabaticity"] = {{"max_ratio", a.max_ratio}, {"zeta_at_max", a.zeta_at_max}};
    } catch (const Error&) {
        report["adiabaticity"] = nullptr;
    }

    json results = json::object();
    for (const SolverRun& run : result.runs)
        results[run.name] = run_summary_json(run.fields);
    report["results"] = results;

    if (result.comparison) {
        const analysis::SolverComparison& c = *result.comparison;
        report["compare_solvers"] = {
            {"max_efficiency_discrepancy", c.max_efficiency_discrepancy},
            {"max_transmission_discrepancy", c.max_transmission_discrepancy},
            {"max_relative_l2", c.max_relative_l2}};
    }

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec)
        throw io::IoError("cannot create '" + config.output_dir.string() + "': " + ec.message());
    result.report_path = config.output_dir / "report.json";
    std::ofstream out(result.report_path);
    out << report.dump(2) << "\n";
    out.close();
    if (!out)
        throw io::IoError("failed writing '" + result.report_path.string() + "'");

    if (log)
        *log << "wrote " << result.report_path.string() << "\n";
    return result;
}

int run_command(const ExperimentConfig& config, std::ostream& err, std::ostream* log)
{
    try {
        run_experiment(config, log);
        return exit_ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical_failure;
    } catch (const io::IoError& e) {
        err << "I/O failure: " << e.what() << "\n";
        return exit_io_failure;
    } catch (const RangeError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const ContractViolation& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const DivisionError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    }
}

}  // namespace lambdagen
