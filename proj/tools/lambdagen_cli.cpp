// lambdagen_cli - batch front end.
//
//   lambdagen_cli run <config>... [--out DIR] [--solver reduced|full|both] [--jobs N]
//   lambdagen_cli run --preset fig2 [--out DIR]
//   lambdagen_cli preset <name>        print a bundled preset
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 I/O failure.

#include <algorithm>
#include <atomic>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lambdagen/runner.hpp"

namespace {

using namespace lambdagen;

struct Job {
    std::string label;
    ExperimentConfig config;
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Parametric generation in a Lambda medium with spatially varying coherence"};
    app.require_subcommand(1);

    std::vector<std::string> config_files;
    std::string preset_name;
    std::string out_dir;
    std::string solver;
    unsigned jobs = 1;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "Run one or more experiment configurations");
    run->add_option("config", config_files, "Key-value config file or a report.json to replay");
    run->add_option("--preset", preset_name, "Bundled preset (fig2, constant, absorption)");
    run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    run->add_option("--solver", solver, "Solvers to run")
        ->check(CLI::IsMember({"reduced", "full", "both"}));
    run->add_option("--jobs", jobs, "Configurations run in parallel")->check(CLI::PositiveNumber);
    run->add_flag("-q,--quiet", quiet, "Suppress progress log");

    std::string show_name;
    auto* show = app.add_subcommand("preset", "Print a bundled preset");
    show->add_option("name", show_name, "Preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config_error;
    }

    if (*show) {
        try {
            std::cout << preset_text(show_name);
            return exit_ok;
        } catch (const ConfigError& e) {
            std::cerr << e.what() << "\n";
            return exit_config_error;
        }
    }

    std::vector<Job> batch;
    try {
        if (!preset_name.empty())
            batch.push_back({"preset " + preset_name, preset(preset_name)});
        for (const auto& f : config_files)
            batch.push_back({f, ExperimentConfig::load(f)});
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    }
    if (batch.empty()) {
        std::cerr << "run: give a config file or --preset\n";
        return exit_config_error;
    }

    for (std::size_t i = 0; i < batch.size(); ++i) {
        ExperimentConfig& c = batch[i].config;
        if (!out_dir.empty()) {
            c.output_dir = out_dir;
            if (batch.size() > 1)
                c.output_dir /= "job" + std::to_string(i);
        }
        if (solver == "reduced")
            c.solver = SolverChoice::reduced;
        else if (solver == "full")
            c.solver = SolverChoice::full;
        else if (solver == "both")
            c.solver = SolverChoice::both;
    }

    const unsigned n_threads = std::min<unsigned>(jobs, static_cast<unsigned>(batch.size()));
    if (n_threads <= 1) {
        int code = exit_ok;
        for (const Job& job : batch)
            code = std::max(code, run_command(job.config, std::cerr, quiet ? nullptr : &std::cerr));
        return code;
    }

    // Logs are buffered per job so parallel runs do not interleave lines.
    std::mutex io_mutex;
    std::vector<int> codes(batch.size(), exit_ok);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < batch.size(); i = next++) {
            std::ostringstream log, err;
            codes[i] = run_command(batch[i].config, err, quiet ? nullptr : &log);
            std::lock_guard lock(io_mutex);
            std::cerr << log.str();
            if (!err.str().empty())
                std::cerr << batch[i].label << ": " << err.str();
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    return *std::max_element(codes.begin(), codes.end());
}
