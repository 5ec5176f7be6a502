// runner.hpp - Executes an ExperimentConfig end to end and writes its outputs:
//
//   <out>/report.json
//   <out>/<solver>/fields.csv, summary.csv, peaks_vs_zeta.csv,
//   <out>/<solver>/slice_zeta_<value>.csv
//
// for solver in {reduced, full}.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lambdagen/analysis.hpp"
#include "lambdagen/config.hpp"

namespace lambdagen {

enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_numerical_failure = 3,
    exit_io_failure = 4,
};

struct SolverRun {
    std::string name;  // "reduced" or "full"
    FieldState fields;
    std::filesystem::path directory;
};

struct RunResult {
    std::vector<SolverRun> runs;
    analysis::RegimeReport regime;
    std::optional<analysis::SolverComparison> comparison;
    std::filesystem::path report_path;
};

/// Validates, runs the requested solvers and writes every output file.
/// Throws ConfigError, NumericalError or io::IoError.
RunResult run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// run_experiment with errors mapped to exit codes and reported on err.
int run_command(const ExperimentConfig& config, std::ostream& err, std::ostream* log = nullptr);

}  // namespace lambdagen
