#include "lambdagen/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lambdagen {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string format_real(Real v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Real parse_real(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    Real v = 0.0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end || t.empty())
        throw ConfigError(key, "expected a number, got '" + text + "'");
    if (!std::isfinite(v))
        throw ConfigError(key, "value must be finite");
    return v;
}

int parse_int(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    int v = 0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end || t.empty())
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    return v;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

const char* profile_kind_name(CoherenceProfile::Kind k)
{
    switch (k) {
    case CoherenceProfile::Kind::constant: return "constant";
    case CoherenceProfile::Kind::sigmoid: return "sigmoid";
    case CoherenceProfile::Kind::tabulated: return "tabulated";
    }
    return "sigmoid";
}

const char* pulse_kind_name(PulseEnvelope::Kind k)
{
    switch (k) {
    case PulseEnvelope::Kind::sin_squared: return "sin_squared";
    case PulseEnvelope::Kind::gaussian: return "gaussian";
    case PulseEnvelope::Kind::tabulated: return "tabulated";
    }
    return "sin_squared";
}

// Numeric rows of a comma-separated file; a non-numeric first line is a header.
std::vector<std::vector<Real>> read_numeric_csv(const std::string& key,
                                                const std::filesystem::path& path,
                                                std::size_t columns)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(key, "cannot open data file '" + path.string() + "'");
    std::vector<std::vector<Real>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto cells = split(t, ',');
        std::vector<Real> row;
        try {
            for (const auto& c : cells)
                row.push_back(parse_real(key, c));
        } catch (const ConfigError&) {
            if (rows.empty() && lineno == 1)
                continue;
            throw ConfigError(key, path.string() + ":" + std::to_string(lineno)
                                       + ": non-numeric value");
        }
        if (row.size() != columns)
            throw ConfigError(key, path.string() + ":" + std::to_string(lineno) + ": expected "
                                       + std::to_string(columns) + " columns");
        rows.push_back(std::move(row));
    }
    return rows;
}

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys{
        "a1", "a2", "delta1", "delta2", "gamma",
        "profile.kind", "profile.b1_re", "profile.b1_im", "profile.b2_re", "profile.b2_im",
        "profile.zeta0", "profile.zeta_bar", "profile.phi1", "profile.phi2", "profile.file",
        "pulse.kind", "pulse.amplitude", "pulse.tau_p", "pulse.tau_bar", "pulse.file",
        "solver.run", "solver.zeta_max", "solver.d_zeta", "solver.record_every",
        "solver.tau_max", "solver.d_tau",
        "output.record_zeta", "output.dir"};
    return keys;
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : Error(key + ": " + message), key_(std::move(key))
{
}

std::string to_string(SolverChoice choice)
{
    switch (choice) {
    case SolverChoice::reduced: return "reduced";
    case SolverChoice::full: return "full";
    case SolverChoice::both: return "both";
    }
    return "both";
}

KeyValues parse_key_values(std::string_view text)
{
    KeyValues kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string t = trim(std::string_view(line).substr(0, hash));
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno), "empty key");
        if (kv.count(key))
            throw ConfigError(key, "duplicate key");
        kv.emplace(key, value);
    }
    return kv;
}

ExperimentConfig ExperimentConfig::from_key_values(const KeyValues& kv,
                                                   const std::filesystem::path& base_dir)
{
    for (const auto& [key, value] : kv)
        if (!known_keys().count(key))
            throw ConfigError(key, "unknown key");

    ExperimentConfig c;
    const auto real = [&](const char* key, Real& out) {
        if (auto it = kv.find(key); it != kv.end())
            out = parse_real(key, it->second);
    };
    const auto path = [&](const char* key, std::filesystem::path& out) {
        if (auto it = kv.find(key); it != kv.end()) {
            std::filesystem::path p(it->second);
            out = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        }
    };

    real("a1", c.medium.a1);
    real("a2", c.medium.a2);
    real("delta1", c.medium.delta1);
    real("delta2", c.medium.delta2);
    real("gamma", c.medium.gamma);

    if (auto it = kv.find("profile.kind"); it != kv.end()) {
        if (it->second == "constant")
            c.profile.kind = CoherenceProfile::Kind::constant;
        else if (it->second == "sigmoid")
            c.profile.kind = CoherenceProfile::Kind::sigmoid;
        else if (it->second == "tabulated")
            c.profile.kind = CoherenceProfile::Kind::tabulated;
        else
            throw ConfigError("profile.kind", "expected constant, sigmoid or tabulated");
    }
    Real b1re = c.profile.b1.real(), b1im = c.profile.b1.imag();
    Real b2re = c.profile.b2.real(), b2im = c.profile.b2.imag();
    real("profile.b1_re", b1re);
    real("profile.b1_im", b1im);
    real("profile.b2_re", b2re);
    real("profile.b2_im", b2im);
    c.profile.b1 = {b1re, b1im};
    c.profile.b2 = {b2re, b2im};
    real("profile.zeta0", c.profile.zeta0);
    real("profile.zeta_bar", c.profile.zeta_bar);
    real("profile.phi1", c.profile.phi1);
    real("profile.phi2", c.profile.phi2);
    path("profile.file", c.profile.file);

    if (auto it = kv.find("pulse.kind"); it != kv.end()) {
        if (it->second == "sin_squared")
            c.pulse.kind = PulseEnvelope::Kind::sin_squared;
        else if (it->second == "gaussian")
            c.pulse.kind = PulseEnvelope::Kind::gaussian;
        else if (it->second == "tabulated")
            c.pulse.kind = PulseEnvelope::Kind::tabulated;
        else
            throw ConfigError("pulse.kind", "expected sin_squared, gaussian or tabulated");
    }
    real("pulse.amplitude", c.pulse.amplitude);
    real("pulse.tau_p", c.pulse.tau_p);
    real("pulse.tau_bar", c.pulse.tau_bar);
    path("pulse.file", c.pulse.file);

    if (auto it = kv.find("solver.run"); it != kv.end()) {
        if (it->second == "reduced")
            c.solver = SolverChoice::reduced;
        else if (it->second == "full")
            c.solver = SolverChoice::full;
        else if (it->second == "both")
            c.solver = SolverChoice::both;
        else
            throw ConfigError("solver.run", "expected reduced, full or both");
    }
    real("solver.zeta_max", c.zeta_max);
    real("solver.d_zeta", c.d_zeta);
    real("solver.tau_max", c.tau_max);
    real("solver.d_tau", c.d_tau);
    if (auto it = kv.find("solver.record_every"); it != kv.end())
        c.record_every = parse_int("solver.record_every", it->second);

    if (auto it = kv.find("output.record_zeta"); it != kv.end()) {
        c.record_zeta.clear();
        if (!trim(it->second).empty())
            for (const auto& cell : split(it->second, ','))
                c.record_zeta.push_back(parse_real("output.record_zeta", cell));
    }
    if (auto it = kv.find("output.dir"); it != kv.end())
        c.output_dir = it->second;
    return c;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text,
                                         const std::filesystem::path& base_dir)
{
    return from_key_values(parse_key_values(text), base_dir);
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    if (path.extension() == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config", std::string("invalid JSON: ") + e.what());
        }
        if (!j.contains("config") || !j["config"].is_object())
            throw ConfigError("config", "JSON file has no 'config' object");
        KeyValues kv;
        for (const auto& [key, value] : j["config"].items()) {
            if (!value.is_string())
                throw ConfigError(key, "echoed values must be strings");
            kv.emplace(key, value.get<std::string>());
        }
        return from_key_values(kv, path.parent_path());
    }
    return parse(text, path.parent_path());
}

KeyValues ExperimentConfig::to_key_values() const
{
    KeyValues kv;
    kv["a1"] = format_real(medium.a1);
    kv["a2"] = format_real(medium.a2);
    kv["delta1"] = format_real(medium.delta1);
    kv["delta2"] = format_real(medium.delta2);
    kv["gamma"] = format_real(medium.gamma);

    kv["profile.kind"] = profile_kind_name(profile.kind);
    switch (profile.kind) {
    case CoherenceProfile::Kind::constant:
        kv["profile.b1_re"] = format_real(profile.b1.real());
        kv["profile.b1_im"] = format_real(profile.b1.imag());
        kv["profile.b2_re"] = format_real(profile.b2.real());
        kv["profile.b2_im"] = format_real(profile.b2.imag());
        break;
    case CoherenceProfile::Kind::sigmoid:
        kv["profile.zeta0"] = format_real(profile.zeta0);
        kv["profile.zeta_bar"] = format_real(profile.zeta_bar);
        kv["profile.phi1"] = format_real(profile.phi1);
        kv["profile.phi2"] = format_real(profile.phi2);
        break;
    case CoherenceProfile::Kind::tabulated:
        kv["profile.file"] = std::filesystem::absolute(profile.file).string();
        break;
    }

    kv["pulse.kind"] = pulse_kind_name(pulse.kind);
    if (pulse.kind == PulseEnvelope::Kind::tabulated) {
        kv["pulse.file"] = std::filesystem::absolute(pulse.file).string();
    } else {
        kv["pulse.amplitude"] = format_real(pulse.amplitude);
        kv["pulse.tau_p"] = format_real(pulse.tau_p);
    }
    kv["pulse.tau_bar"] = format_real(pulse.tau_bar);

    kv["solver.run"] = to_string(solver);
    kv["solver.zeta_max"] = format_real(zeta_max);
    kv["solver.d_zeta"] = format_real(d_zeta);
    kv["solver.record_every"] = std::to_string(record_every);
    kv["solver.tau_max"] = format_real(tau_max);
    kv["solver.d_tau"] = format_real(d_tau);

    std::string zs;
    for (std::size_t i = 0; i < record_zeta.size(); ++i)
        zs += (i ? ", " : "") + format_real(record_zeta[i]);
    kv["output.record_zeta"] = zs;
    kv["output.dir"] = output_dir.string();
    return kv;
}

std::string ExperimentConfig::to_text() const
{
    std::string out;
    for (const auto& [key, value] : to_key_values())
        out += key + " = " + value + "\n";
    return out;
}

CoherenceProfile ExperimentConfig::build_profile() const
{
    try {
        switch (profile.kind) {
        case CoherenceProfile::Kind::constant:
            return CoherenceProfile::constant(profile.b1, profile.b2);
        case CoherenceProfile::Kind::sigmoid:
            return CoherenceProfile::sigmoid(profile.zeta0, profile.zeta_bar, profile.phi1,
                                             profile.phi2);
        case CoherenceProfile::Kind::tabulated: {
            if (profile.file.empty())
                throw ConfigError("profile.file", "required for tabulated profiles");
            const auto rows = read_numeric_csv("profile.file", profile.file, 5);
            std::vector<Real> z;
            std::vector<Complex> b1, b2;
            for (const auto& r : rows) {
                z.push_back(r[0]);
                b1.emplace_back(r[1], r[2]);
                b2.emplace_back(r[3], r[4]);
            }
            return CoherenceProfile::tabulated(std::move(z), std::move(b1), std::move(b2));
        }
        }
    } catch (const ContractViolation& e) {
        throw ConfigError("profile", e.what());
    }
    throw ConfigError("profile.kind", "unsupported");
}

PulseEnvelope ExperimentConfig::build_pulse() const
{
    try {
        switch (pulse.kind) {
        case PulseEnvelope::Kind::sin_squared:
            return PulseEnvelope::sin_squared(pulse.amplitude, pulse.tau_p, pulse.tau_bar);
        case PulseEnvelope::Kind::gaussian:
            return PulseEnvelope::gaussian(pulse.amplitude, pulse.tau_p, pulse.tau_bar);
        case PulseEnvelope::Kind::tabulated: {
            if (pulse.file.empty())
                throw ConfigError("pulse.file", "required for tabulated pulses");
            const auto rows = read_numeric_csv("pulse.file", pulse.file, 3);
            std::vector<Real> t;
            std::vector<Complex> o;
            for (const auto& r : rows) {
                t.push_back(r[0]);
                o.emplace_back(r[1], r[2]);
            }
            return PulseEnvelope::tabulated(std::move(t), std::move(o), pulse.tau_bar);
        }
        }
    } catch (const ContractViolation& e) {
        throw ConfigError("pulse", e.what());
    }
    throw ConfigError("pulse.kind", "unsupported");
}

ReducedSolverConfig ExperimentConfig::reduced_config() const
{
    return {zeta_max, d_zeta, record_every, ReducedMethod::rk4};
}

FullSolverConfig ExperimentConfig::full_config() const
{
    FullSolverConfig f;
    f.zeta_max = zeta_max;
    f.d_zeta = d_zeta;
    f.tau_max = tau_max;
    f.d_tau = d_tau;
    f.record_every = record_every;
    return f;
}

Eigen::VectorXd ExperimentConfig::tau_grid() const
{
    return make_tau_grid(build_pulse(), tau_max, d_tau);
}

void ExperimentConfig::validate() const
{
    try {
        medium.validate();
    } catch (const ContractViolation& e) {
        throw ConfigError(medium.gamma < 0.0 ? "gamma" : "medium", e.what());
    }
    if (!(zeta_max > 0.0))
        throw ConfigError("solver.zeta_max", "must be positive");
    if (d_zeta < 0.0 || d_zeta > zeta_max)
        throw ConfigError("solver.d_zeta", "must be in (0, zeta_max]; 0 selects zeta_max/4000");
    if (record_every < 1)
        throw ConfigError("solver.record_every", "must be at least 1");
    if (tau_max < 0.0)
        throw ConfigError("solver.tau_max", "must be non-negative; 0 selects tau_p");
    if (d_tau < 0.0)
        throw ConfigError("solver.d_tau", "must be non-negative; 0 selects tau_p/1000");

    const CoherenceProfile p = build_profile();
    const PulseEnvelope pulse_env = build_pulse();
    const auto [lo, hi] = p.domain();
    if (lo > 0.0 || hi < zeta_max)
        throw ConfigError("profile.file", "tabulated profile must cover [0, solver.zeta_max]");
    for (Real z = 0.0; z <= zeta_max; z += zeta_max / 64.0) {
        const ProfileSample b = p.evaluate(std::min(z, zeta_max));
        if (std::abs(std::norm(b.b1) + std::norm(b.b2) - 1.0) > kNormalizationTolerance)
            throw ConfigError("profile", "|b1|^2 + |b2|^2 != 1");
    }
    const Real span = tau_max > 0.0 ? tau_max : pulse_env.tau_p();
    const Real dt = d_tau > 0.0 ? d_tau : pulse_env.tau_p() / 1000.0;
    if (dt > span)
        throw ConfigError("solver.d_tau", "larger than the tau window");

    const ReducedSolverConfig rc = reduced_config();
    const Real spacing = rc.step() * record_every;
    for (Real z : record_zeta) {
        if (z < -1e-12 || z > zeta_max * (1.0 + 1e-12))
            throw ConfigError("output.record_zeta", "value " + format_real(z)
                                                        + " outside [0, solver.zeta_max]");
        const Real k = z / spacing;
        const bool on_grid = std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k)
                             || std::abs(z - zeta_max) <= 1e-9 * zeta_max;
        if (!on_grid)
            throw ConfigError("output.record_zeta",
                              "value " + format_real(z)
                                  + " is not a multiple of d_zeta * record_every");
    }
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kTransferPreset = R"(# Complete conversion of an injected sin^2 pulse by a sigmoid coherence
# profile (counterintuitive: b1(0) ~ 0, b2(large zeta) ~ 0).
a1 = 1000
a2 = 1000
delta1 = 0
delta2 = 0
gamma = 100
profile.kind = sigmoid
profile.zeta0 = 100
profile.zeta_bar = 5
profile.phi1 = 0
profile.phi2 = 0
pulse.kind = sin_squared
pulse.amplitude = 0.01
pulse.tau_p = 50
solver.run = both
solver.zeta_max = 200
solver.d_zeta = 0.05
solver.record_every = 40
solver.tau_max = 50
solver.d_tau = 0.05
output.record_zeta = 0, 100, 200
output.dir = results/fig2
)";

constexpr std::string_view kConstantPreset = R"(# Zeta-independent coherence b1 = b2 = 1/sqrt(2): the bright component is
# absorbed and at most a quarter of the peak intensity is converted.
a1 = 1000
a2 = 1000
delta1 = 0
delta2 = 0
gamma = 100
profile.kind = constant
profile.b1_re = 0.70710678118654757
profile.b1_im = 0
profile.b2_re = 0.70710678118654757
profile.b2_im = 0
pulse.kind = sin_squared
pulse.amplitude = 0.01
pulse.tau_p = 50
solver.run = both
solver.zeta_max = 5
solver.d_zeta = 0.00125
solver.record_every = 40
solver.tau_max = 50
solver.d_tau = 0.05
output.record_zeta = 0, 0.5, 5
output.dir = results/constant
)";

constexpr std::string_view kAbsorptionPreset = R"(# Pure absorption: all population in |1>, so |Omega1| decays as
# exp(-2 a zeta / gamma) and no field is generated.
a1 = 10
a2 = 10
delta1 = 0
delta2 = 0
gamma = 100
profile.kind = constant
profile.b1_re = 1
profile.b1_im = 0
profile.b2_re = 0
profile.b2_im = 0
pulse.kind = sin_squared
pulse.amplitude = 0.01
pulse.tau_p = 50
solver.run = both
solver.zeta_max = 50
solver.d_zeta = 0.0125
solver.record_every = 40
solver.tau_max = 50
solver.d_tau = 0.05
output.record_zeta = 0, 25, 50
output.dir = results/absorption
)";

}  // namespace

std::vector<std::string> preset_names()
{
    return {"fig2", "constant", "absorption"};
}

std::string preset_text(std::string_view name)
{
    if (name == "fig2")
        return std::string(kTransferPreset);
    if (name == "constant")
        return std::string(kConstantPreset);
    if (name == "absorption")
        return std::string(kAbsorptionPreset);
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

ExperimentConfig preset(std::string_view name)
{
    return ExperimentConfig::parse(preset_text(name));
}

}  // namespace lambdagen
