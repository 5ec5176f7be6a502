// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "lambdagen/analysis.hpp"
#include "lambdagen/analytic.hpp"
#include "lambdagen/config.hpp"
#include "lambdagen/solvers.hpp"

using namespace lambdagen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

class Detail {
public:
    Detail& add(const std::string& name, Real value, bool ok)
    {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s%s=%.6g%s", s_.empty() ? "" : ", ", name.c_str(), value,
                      ok ? "" : " (!)");
        s_ += buf;
        pass_ = pass_ && ok;
        return *this;
    }
    Outcome done() const { return {pass_, s_}; }

private:
    std::string s_;
    bool pass_ = true;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const MediumParams kMedium{1000.0, 1000.0, 0.0, 0.0, 100.0};
const Real kAmp = 0.01;
const Real kTauP = 50.0;

PulseEnvelope reference_pulse()
{
    return PulseEnvelope::sin_squared(kAmp, kTauP);
}

CoherenceProfile reference_profile()
{
    return CoherenceProfile::sigmoid(100.0, 5.0);
}

// Default grids: d_zeta = zeta_max / 4000, d_tau = tau_p / 1000.
ReducedSolverConfig reference_reduced(int record_every = 40)
{
    return ReducedSolverConfig{200.0, 0.0, record_every};
}

// 1. Complete conversion by the sigmoid profile, reduced solver.
Outcome criterion_conversion()
{
    const auto t0 = std::chrono::steady_clock::now();
    const PulseEnvelope pulse = reference_pulse();
    const FieldState f = reduced_propagate(reference_profile(), kMedium, pulse, reference_reduced(),
                                           make_tau_grid(pulse));
    const Real eff = analysis::conversion_efficiency(f, 200.0);
    const Real tr = analysis::transmission(f, 200.0);
    const double t = seconds_since(t0);
    return Detail()
        .add("efficiency(200)", eff, eff >= 0.95)
        .add("transmission(200)", tr, tr <= 0.05)
        .add("runtime_s", t, t < 5.0)
        .done();
}

// Max over recorded zeta of |Omega_num - Omega_exact| / |Omega_exact| per unit input.
Real constant_oracle_error(const PropagatorPath& path, Complex b1, Complex b2)
{
    Real worst = 0.0;
    for (Eigen::Index i = 0; i < path.zeta.size(); ++i) {
        const auto [e1, e2] = analytic::constant_solution(b1, b2, kMedium, path.zeta[i], 1.0);
        const Matrix2cd& u = path.u[static_cast<std::size_t>(i)];
        const Real err = std::hypot(std::abs(u(0, 0) - e1), std::abs(u(1, 0) - e2));
        worst = std::max(worst, err / std::hypot(std::abs(e1), std::abs(e2)));
    }
    return worst;
}

// 2. Constant coherence against the closed-form solution.
Outcome criterion_constant_oracle()
{
    const Complex b(1.0 / std::sqrt(2.0));
    const auto profile = CoherenceProfile::constant(b, b);
    const PropagatorPath coarse =
        reduced_propagator_path(profile, kMedium, ReducedSolverConfig{200.0, 0.05, 1});
    const PropagatorPath fine =
        reduced_propagator_path(profile, kMedium, ReducedSolverConfig{200.0, 0.025, 2});
    const Real e_coarse = constant_oracle_error(coarse, b, b);
    const Real e_fine = constant_oracle_error(fine, b, b);
    const Real ratio = e_coarse / e_fine;
    return Detail()
        .add("max_rel_error(d_zeta=0.05)", e_coarse, e_coarse < 1e-8)
        .add("max_rel_error(d_zeta=0.025)", e_fine, true)
        .add("convergence_ratio", ratio, ratio >= 8.0 && ratio <= 32.0)
        .done();
}

// Max over recorded zeta and both channels of the normalized peak-intensity
// difference between the reduced solver and the adiabatic solution.
Real adiabatic_deviation(const CoherenceProfile& profile, Real d_zeta, int record_every)
{
    const PropagatorPath path =
        reduced_propagator_path(profile, kMedium, ReducedSolverConfig{200.0, d_zeta, record_every});
    Real worst = 0.0;
    for (Eigen::Index i = 0; i < path.zeta.size(); ++i) {
        const auto [a1, a2] = analytic::adiabatic_solution(profile, kMedium, path.zeta[i], 1.0);
        const Matrix2cd& u = path.u[static_cast<std::size_t>(i)];
        worst = std::max({worst, std::abs(std::norm(u(0, 0)) - std::norm(a1)),
                          std::abs(std::norm(u(1, 0)) - std::norm(a2))});
    }
    return worst;
}

// 3. Adiabatic closed form, and its breakdown for a sharp profile.
Outcome criterion_adiabatic_oracle()
{
    const Eigen::VectorXd z = uniform_grid(200.0, 0.05);
    const auto smooth = reference_profile();
    const auto sharp = CoherenceProfile::sigmoid(100.0, 0.05);
    const Real r_smooth = analytic::adiabaticity_ratio(smooth, kMedium, z).max_ratio;
    const Real r_sharp = analytic::adiabaticity_ratio(sharp, kMedium, z).max_ratio;
    const Real dev_smooth = adiabatic_deviation(smooth, 0.05, 40);
    // The sharp profile needs a step well below its width.
    const Real dev_sharp = adiabatic_deviation(sharp, 0.005, 400);
    return Detail()
        .add("max_ratio(zeta_bar=5)", r_smooth, std::abs(r_smooth - 0.0025) < 1e-12)
        .add("peak_deviation(zeta_bar=5)", dev_smooth, dev_smooth < 0.01)
        .add("max_ratio(zeta_bar=0.05)", r_sharp, std::abs(r_sharp - 0.25) < 1e-12)
        .add("peak_deviation(zeta_bar=0.05)", dev_sharp, dev_sharp > 0.05)
        .done();
}

// 4. Long-distance limit for constant coherence.
Outcome criterion_long_distance()
{
    const ExperimentConfig c = preset("constant");
    const CoherenceProfile profile = c.build_profile();
    const ProfileSample b = profile.evaluate(0.0);
    const PulseEnvelope pulse = c.build_pulse();
    const Real zeta = 10.0 * c.medium.gamma / (2.0 * c.medium.a1) * 10.0;
    const Real zeta_long = analytic::long_distance_zeta(c.medium) * 10.0;

    ReducedSolverConfig rc = c.reduced_config();
    rc.zeta_max = zeta;
    const Eigen::VectorXd tau = c.tau_grid();
    const FieldState f = reduced_propagate(profile, c.medium, pulse, rc, tau);
    const Eigen::Index last = f.zeta_count() - 1;

    // Absolute error in units of the injected peak amplitude.
    Real err1 = 0.0, err2 = 0.0;
    for (Eigen::Index k = 0; k < tau.size(); ++k) {
        const Complex o = pulse.evaluate(tau[k]);
        err1 = std::max(err1, std::abs(f.omega1(last, k) - std::norm(b.b2) * o) / kAmp);
        err2 = std::max(err2, std::abs(f.omega2(last, k) + std::conj(b.b1) * b.b2 * o) / kAmp);
    }
    const Real eff = analysis::conversion_efficiency(f, f.zeta_grid[last]);
    const Real bound = std::norm(b.b1 * b.b2);
    return Detail()
        .add("zeta", f.zeta_grid[last], std::abs(f.zeta_grid[last] - zeta_long) < 1e-12)
        .add("abs_error_omega1", err1, err1 < 1e-6)
        .add("abs_error_omega2", err2, err2 < 1e-6)
        .add("efficiency", eff, std::abs(eff - bound) < 1e-6 && eff <= 0.25 + 1e-12)
        .done();
}

// 5. Full Maxwell-Schroedinger solver against the reduced solver.
Outcome criterion_full_vs_reduced()
{
    const PulseEnvelope pulse = reference_pulse();
    const auto profile = reference_profile();
    const auto t0 = std::chrono::steady_clock::now();
    FullSolverConfig fc;
    fc.zeta_max = 200.0;
    fc.record_every = 40;
    const FullResult full = full_propagate(profile, kMedium, pulse, fc);
    const double t = seconds_since(t0);
    const FieldState reduced =
        reduced_propagate(profile, kMedium, pulse, reference_reduced(), full.fields.tau_grid);
    const analysis::SolverComparison cmp = analysis::compare_solvers(reduced, full.fields);
    return Detail()
        .add("max_efficiency_discrepancy", cmp.max_efficiency_discrepancy,
             cmp.max_efficiency_discrepancy < 0.05)
        .add("max_transmission_discrepancy", cmp.max_transmission_discrepancy,
             cmp.max_transmission_discrepancy < 0.05)
        .add("full_runtime_s", t, t < 300.0)
        .done();
}

// 6. Property suite.
Outcome criterion_properties()
{
    Detail d;
    const PulseEnvelope pulse = reference_pulse();
    const Eigen::VectorXd tau = make_tau_grid(pulse);

    {
        // Without decay the field equation is undamped; weak coupling keeps
        // the zeta stepping stable.
        const MediumParams lossless{0.1, 0.1, 0.0, 0.0, 0.0};
        FullSolverConfig fc;
        fc.zeta_max = 20.0;
        fc.d_zeta = 0.05;
        fc.record_every = 10;
        const FullResult r = full_propagate(CoherenceProfile::sigmoid(10.0, 2.0), lossless,
                                            PulseEnvelope::sin_squared(0.1, kTauP), fc);
        Real worst = 0.0;
        for (const AtomicSnapshot& s : r.atoms)
            for (Eigen::Index k = 0; k < s.b.cols(); ++k)
                worst = std::max(worst, std::abs(s.b.col(k).squaredNorm() - 1.0));
        d.add("norm_drift(gamma=0)", worst, worst < 1e-8);
    }

    {
        const auto profile = CoherenceProfile::sigmoid(100.0, 5.0, 0.4, -0.9);
        const Complex c(-1.7, 0.6);
        std::vector<Real> ts(tau.data(), tau.data() + tau.size());
        std::vector<Complex> scaled;
        for (Real t : ts)
            scaled.push_back(c * pulse.evaluate(t));
        const FieldState a = reduced_propagate(profile, kMedium, pulse, reference_reduced(), tau);
        const FieldState b = reduced_propagate(profile, kMedium, PulseEnvelope::tabulated(ts, scaled),
                                               reference_reduced(), tau);
        const Real rel = std::hypot((b.omega1 - c * a.omega1).norm(), (b.omega2 - c * a.omega2).norm())
                         / std::hypot((c * a.omega1).norm(), (c * a.omega2).norm());
        d.add("linearity_rel_error", rel, rel < 1e-12);
    }

    {
        const auto constant = CoherenceProfile::constant(Complex(0.6, 0.0), Complex(0.0, 0.8));
        const FieldState f = reduced_propagate(constant, kMedium, pulse, reference_reduced(1), tau);
        const Eigen::VectorXcd dark = analysis::dark_component_trace(f, constant);
        const Real drift = (dark.array() - dark[0]).abs().maxCoeff() / std::abs(dark[0]);
        d.add("dark_drift(constant)", drift, drift < 1e-10);

        const auto sig = reference_profile();
        const FieldState g = reduced_propagate(sig, kMedium, pulse, reference_reduced(), tau);
        const Eigen::VectorXd mag = analysis::dark_component_trace(g, sig).cwiseAbs();
        const Real spread = (mag.array() - mag[0]).abs().maxCoeff() / mag[0];
        d.add("dark_drift(sigmoid)", spread, spread < 0.01);
    }

    {
        const ExperimentConfig c = preset("absorption");
        const CoherenceProfile profile = c.build_profile();
        const PulseEnvelope p = c.build_pulse();
        const Eigen::VectorXd t = c.tau_grid();
        const FieldState f = reduced_propagate(profile, c.medium, p, c.reduced_config(), t);
        Real worst = 0.0;
        for (Eigen::Index i = 0; i < f.zeta_count(); ++i) {
            const Real decay = std::exp(-2.0 * c.medium.a1 * f.zeta_grid[i] / c.medium.gamma);
            for (Eigen::Index k = 0; k < t.size(); ++k) {
                const Real in = std::abs(p.evaluate(t[k]));
                if (in > 1e-6 * p.amplitude())
                    worst = std::max(worst, std::abs(std::abs(f.omega1(i, k)) / (decay * in) - 1.0));
            }
        }
        d.add("absorption_rel_error", worst, worst < 1e-6);
    }

    {
        const analysis::RegimeReport r = analysis::regime_check(kMedium, pulse);
        const auto near = [](Real x, Real y) { return std::abs(x - y) <= 1e-12 * std::abs(y); };
        d.add("r1", r.r1, near(r.r1, 1e-4))
            .add("r2", r.r2, near(r.r2, 2e-4))
            .add("r3", r.r3, near(r.r3, 5e-8))
            .add("regime_pass", r.overall == analysis::RegimeStatus::pass ? 1.0 : 0.0,
                 r.overall == analysis::RegimeStatus::pass);
    }
    return d.done();
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string("\"") + LAMBDAGEN_CLI_PATH + "\" " + args;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 7. Repeated preset runs give byte-identical CSV files.
Outcome criterion_determinism()
{
    const fs::path root = fs::temp_directory_path() / "lambdagen_acceptance_determinism";
    fs::remove_all(root);
    const int rc1 = run_cli("run -q --preset fig2 --out \"" + (root / "a").string() + "\"");
    const int rc2 = run_cli("run -q --preset fig2 --out \"" + (root / "b").string() + "\"");
    Detail d;
    d.add("exit_codes", rc1 + rc2, rc1 == 0 && rc2 == 0);
    int files = 0, differing = 0;
    if (fs::exists(root / "a"))
        for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
            if (e.path().extension() != ".csv")
                continue;
            ++files;
            const fs::path other = root / "b" / fs::relative(e.path(), root / "a");
            if (slurp(e.path()) != slurp(other))
                ++differing;
        }
    d.add("csv_files", files, files > 0).add("differing", differing, differing == 0);
    fs::remove_all(root);
    return d.done();
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 sigmoid conversion (reduced solver)", criterion_conversion},
        {"2 constant-coherence closed form", criterion_constant_oracle},
        {"3 adiabatic closed form", criterion_adiabatic_oracle},
        {"4 long-distance limits", criterion_long_distance},
        {"5 full vs reduced agreement", criterion_full_vs_reduced},
        {"6 property suite", criterion_properties},
        {"7 determinism", criterion_determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s  criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
