// config.hpp - Experiment configuration: a flat "key = value" text format
// with '#' comments, bundled presets, and a canonical key-value echo that
// reproduces a run exactly.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lambdagen/core.hpp"
#include "lambdagen/solvers.hpp"

namespace lambdagen {

/// Invalid or missing configuration value. key() names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message);
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class SolverChoice { reduced, full, both };

struct ProfileSpec {
    CoherenceProfile::Kind kind = CoherenceProfile::Kind::sigmoid;
    Complex b1{0.0, 0.0};
    Complex b2{1.0, 0.0};
    Real zeta0 = 100.0;
    Real zeta_bar = 5.0;
    Real phi1 = 0.0;
    Real phi2 = 0.0;
    std::filesystem::path file;  // zeta,re_b1,im_b1,re_b2,im_b2
};

struct PulseSpec {
    PulseEnvelope::Kind kind = PulseEnvelope::Kind::sin_squared;
    Real amplitude = 0.01;
    Real tau_p = 50.0;
    Real tau_bar = 0.0;
    std::filesystem::path file;  // tau,re_omega,im_omega
};

using KeyValues = std::map<std::string, std::string>;

struct ExperimentConfig {
    MediumParams medium;
    ProfileSpec profile;
    PulseSpec pulse;
    Real zeta_max = 200.0;
    Real d_zeta = 0.0;
    int record_every = 1;
    Real tau_max = 0.0;
    Real d_tau = 0.0;
    SolverChoice solver = SolverChoice::both;
    std::vector<Real> record_zeta{0.0, 100.0, 200.0};
    std::filesystem::path output_dir = "results";

    CoherenceProfile build_profile() const;
    PulseEnvelope build_pulse() const;
    ReducedSolverConfig reduced_config() const;
    FullSolverConfig full_config() const;
    Eigen::VectorXd tau_grid() const;

    /// Checks every value and builds profile and pulse once; throws
    /// ConfigError naming the first offending key.
    void validate() const;

    /// Canonical echo; doubles are written with 17 significant digits.
    KeyValues to_key_values() const;
    std::string to_text() const;

    /// Unknown keys are rejected. Relative data-file paths resolve
    /// against base_dir.
    static ExperimentConfig from_key_values(const KeyValues& kv,
                                            const std::filesystem::path& base_dir = {});
    static ExperimentConfig parse(std::string_view text,
                                  const std::filesystem::path& base_dir = {});

    /// Reads a key-value file, or the "config" object of a report.json.
    static ExperimentConfig load(const std::filesystem::path& path);
};

KeyValues parse_key_values(std::string_view text);

std::vector<std::string> preset_names();

/// Text of a bundled preset (fig2, constant, absorption).
std::string preset_text(std::string_view name);
ExperimentConfig preset(std::string_view name);

std::string to_string(SolverChoice choice);

}  // namespace lambdagen
