#include <doctest.h>

#include <cmath>
#include <random>

#include "lambdagen/analysis.hpp"
#include "lambdagen/analytic.hpp"
#include "lambdagen/solvers.hpp"
#include "test_support.hpp"

using namespace lambdagen;

namespace {

MediumParams fig2_medium()
{
    return MediumParams{1000.0, 1000.0, 0.0, 0.0, 100.0};
}

const Real kInvSqrt2 = 1.0 / std::sqrt(2.0);

Real max_error_vs_constant_solution(const CoherenceProfile& profile, const MediumParams& params,
                                    Real zeta_max, Real d_zeta, int record_every)
{
    const auto& c = *profile.as_constant();
    const ReducedSolverConfig cfg{zeta_max, d_zeta, record_every};
    const PropagatorPath path = reduced_propagator_path(profile, params, cfg);
    Real worst = 0.0;
    for (Eigen::Index i = 0; i < path.zeta.size(); ++i) {
        const auto [o1, o2] = analytic::constant_solution(c.b1, c.b2, params, path.zeta[i], 1.0);
        const Matrix2cd& u = path.u[static_cast<std::size_t>(i)];
        const Real err = std::hypot(std::abs(u(0, 0) - o1), std::abs(u(1, 0) - o2));
        worst = std::max(worst, err / std::hypot(std::abs(o1), std::abs(o2)));
    }
    return worst;
}

}  // namespace

TEST_CASE("rk4_step is fourth order on a complex exponential")
{
    const Complex lambda(-0.7, 2.3);
    const auto f = [&](Real, const Eigen::Vector2cd& y) -> Eigen::Vector2cd { return lambda * y; };
    const auto err = [&](int n) {
        Eigen::Vector2cd y(1.0, Complex(0, 1));
        const Real h = 1.0 / n;
        for (int i = 0; i < n; ++i)
            y = rk4_step(y, i * h, h, f);
        return std::abs(y[0] - std::exp(lambda));
    };
    const Real ratio = err(20) / err(40);
    CHECK(ratio == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("reduced propagator basics")
{
    const MediumParams p = fig2_medium();
    const auto sig = CoherenceProfile::sigmoid(100.0, 5.0);
    const ReducedSolverConfig cfg{200.0, 0.05, 1};
    CHECK(reduced_propagator(sig, p, 0.0, cfg) == Matrix2cd::Identity());

    const Matrix2cd u = reduced_propagator(sig, p, 200.0, cfg);
    CHECK(std::norm(u(1, 0)) >= 0.95);
    CHECK(std::norm(u(0, 0)) <= 0.05);

    MediumParams off = p;
    off.delta2 = 0.5;
    CHECK_THROWS_AS(reduced_propagator(sig, off, 1.0, cfg), ContractViolation);

    const auto short_table = test::tabulated_transfer(0.0, 50.0, 11, 0.0, 0.0);
    CHECK_THROWS_AS(reduced_propagator(short_table, p, 100.0, cfg), RangeError);
}

TEST_CASE("reduced propagator reports blow-up with its location")
{
    MediumParams p = fig2_medium();
    p.a1 = p.a2 = 1e306;
    const auto c = CoherenceProfile::constant(kInvSqrt2, kInvSqrt2);
    try {
        reduced_propagator(c, p, 1.0, ReducedSolverConfig{1.0, 0.1, 1});
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.zeta() == doctest::Approx(0.1));
        CHECK(std::string(e.what()).find("zeta") != std::string::npos);
    }
}

TEST_CASE("reduced propagator reproduces the constant-coherence closed form")
{
    const MediumParams p = fig2_medium();
    const auto c = CoherenceProfile::constant(Complex(0.6, 0.0), Complex(0.0, 0.8));
    // With |alpha| d_zeta = 0.02 the scheme error is far below 1e-8.
    CHECK(max_error_vs_constant_solution(c, p, 20.0, 0.001, 1) < 1e-8);
}

TEST_CASE("reduced solver converges at fourth order")
{
    MediumParams p = fig2_medium();
    const auto c = CoherenceProfile::constant(kInvSqrt2, kInvSqrt2);
    const Real coarse = max_error_vs_constant_solution(c, p, 2.0, 0.01, 1);
    const Real fine = max_error_vs_constant_solution(c, p, 2.0, 0.005, 2);
    CHECK(coarse / fine >= 8.0);
    CHECK(coarse / fine <= 32.0);
}

TEST_CASE("reduced_propagate: entrance slice, zero pulse and conversion")
{
    const MediumParams p = fig2_medium();
    const auto sig = CoherenceProfile::sigmoid(100.0, 5.0);
    const auto pulse = PulseEnvelope::sin_squared(0.01, 50.0);
    const Eigen::VectorXd tau = make_tau_grid(pulse);
    const ReducedSolverConfig cfg{200.0, 0.05, 40};

    const FieldState f = reduced_propagate(sig, p, pulse, cfg, tau);
    CHECK(f.zeta_count() == 101);
    CHECK(f.tau_count() == 1001);
    CHECK(f.omega1.row(0).transpose() == sample_pulse(pulse, tau));
    CHECK(f.omega2.row(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.omega2.row(100).cwiseAbs2().maxCoeff() / (0.01 * 0.01) >= 0.95);

    const FieldState z = reduced_propagate(sig, p, PulseEnvelope::sin_squared(0.0, 50.0), cfg, tau);
    CHECK(z.omega1.cwiseAbs().maxCoeff() == 0.0);
    CHECK(z.omega2.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reduced problem is linear in the injected field")
{
    const MediumParams p = fig2_medium();
    const auto sig = CoherenceProfile::sigmoid(100.0, 5.0, 0.3, 1.2);
    const auto pulse = PulseEnvelope::sin_squared(0.01, 50.0);
    const Eigen::VectorXd tau = make_tau_grid(pulse, 50.0, 0.5);
    const ReducedSolverConfig cfg{200.0, 0.05, 100};

    const Complex c(2.5, -1.5);
    std::vector<Real> ts(tau.data(), tau.data() + tau.size());
    std::vector<Complex> scaled;
    for (Real t : ts)
        scaled.push_back(c * pulse.evaluate(t));
    const auto scaled_pulse = PulseEnvelope::tabulated(ts, scaled);

    const FieldState a = reduced_propagate(sig, p, pulse, cfg, tau);
    const FieldState b = reduced_propagate(sig, p, scaled_pulse, cfg, tau);
    const Real ref = (c * a.omega1).norm() + (c * a.omega2).norm();
    CHECK(((b.omega1 - c * a.omega1).norm() + (b.omega2 - c * a.omega2).norm()) <= 1e-12 * ref);
}

TEST_CASE("constant profile: dark combination conserved exactly")
{
    const MediumParams p = fig2_medium();
    const Complex b1 = std::polar(0.6, 0.5), b2 = std::polar(0.8, -0.2);
    const auto c = CoherenceProfile::constant(b1, b2);
    const auto pulse = PulseEnvelope::sin_squared(0.01, 50.0);
    const FieldState f = reduced_propagate(c, p, pulse, ReducedSolverConfig{200.0, 0.05, 1},
                                           make_tau_grid(pulse, 50.0, 1.0));
    const Eigen::VectorXcd d = analysis::dark_component_trace(f, c);
    CHECK((d.array() - d[0]).abs().maxCoeff() < 1e-10 * std::abs(d[0]));
}

TEST_CASE("pure absorption benchmark")
{
    MediumParams p{10.0, 10.0, 0.0, 0.0, 100.0};
    const auto c = CoherenceProfile::constant(1.0, 0.0);
    const PropagatorPath path = reduced_propagator_path(c, p, ReducedSolverConfig{50.0, 0.0, 10});
    for (Eigen::Index i = 0; i < path.zeta.size(); ++i) {
        const Real expected = std::exp(-2.0 * p.a1 * path.zeta[i] / p.gamma);
        CHECK(std::abs(path.u[static_cast<std::size_t>(i)](0, 0)) / expected
              == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::abs(path.u[static_cast<std::size_t>(i)](1, 0)) == 0.0);
    }
}

TEST_CASE("atomic Hamiltonian layout")
{
    MediumParams p{1.0, 1.0, 3.0, 2.0, 4.0};
    const Matrix3cd h = atomic_hamiltonian(p, Complex(0.1, 0.2), Complex(-0.3, 0.4));
    CHECK(h(0, 0) == Complex(3.0, -2.0));
    CHECK(h(0, 1) == Complex(0.1, -0.2));
    CHECK(h(0, 2) == Complex(-0.3, -0.4));
    CHECK(h(1, 0) == Complex(0.1, 0.2));
    CHECK(h(2, 0) == Complex(-0.3, 0.4));
    CHECK(h(2, 2) == Complex(1.0, 0.0));
    CHECK(h(1, 1) == Complex(0));
    CHECK(h(1, 2) == Complex(0));
    CHECK(h(2, 1) == Complex(0));
}

TEST_CASE("integrate_atoms agrees with a dense -i H b integration")
{
    MediumParams p{1.0, 1.0, 0.7, 0.2, 3.0};
    const Eigen::VectorXd tau = Eigen::VectorXd::LinSpaced(201, 0.0, 10.0);
    Eigen::VectorXcd o1(tau.size()), o2(tau.size());
    for (Eigen::Index k = 0; k < tau.size(); ++k) {
        o1[k] = Complex(0.5 * std::sin(0.3 * tau[k]), 0.1);
        o2[k] = Complex(0.2, -0.4 * std::cos(0.2 * tau[k]));
    }
    const ProfileSample b{std::polar(0.6, 0.1), std::polar(0.8, 0.9)};
    const AtomicTrace trace = integrate_atoms(b, p, tau, o1, o2, 0.0);

    Vector3cd y(0.0, b.b1, b.b2);
    for (Eigen::Index k = 0; k + 1 < tau.size(); ++k) {
        const Real h = tau[k + 1] - tau[k];
        const auto rhs = [&](Real t, const Vector3cd& v) -> Vector3cd {
            const Real s = (t - tau[k]) / h;
            const Matrix3cd H = atomic_hamiltonian(p, (1 - s) * o1[k] + s * o1[k + 1],
                                                   (1 - s) * o2[k] + s * o2[k + 1]);
            return Complex(0, -1) * (H * v);
        };
        y = rk4_step(y, tau[k], h, rhs);
    }
    CHECK((trace.col(tau.size() - 1) - y).norm() < 1e-14);
}

TEST_CASE("atomic norm: conserved without decay, non-increasing with decay")
{
    MediumParams p{1000.0, 1000.0, 0.0, 0.0, 0.0};
    const auto pulse = PulseEnvelope::sin_squared(0.01, 50.0);
    const Eigen::VectorXd tau = make_tau_grid(pulse);
    const Eigen::VectorXcd o1 = sample_pulse(pulse, tau);
    const Eigen::VectorXcd o2 = 0.5 * o1;
    const ProfileSample b{kInvSqrt2, Complex(0, kInvSqrt2)};

    const AtomicTrace lossless = integrate_atoms(b, p, tau, o1, o2, 0.0);
    for (Eigen::Index k = 0; k < tau.size(); ++k)
        CHECK(std::abs(lossless.col(k).squaredNorm() - 1.0) < 1e-8);

    p.gamma = 100.0;
    const AtomicTrace lossy = integrate_atoms(b, p, tau, o1, o2, 0.0);
    for (Eigen::Index k = 1; k < tau.size(); ++k)
        CHECK(lossy.col(k).squaredNorm() <= lossy.col(k - 1).squaredNorm() * (1.0 + 1e-15));
    CHECK(lossy.col(tau.size() - 1).squaredNorm() < 1.0);

    // Unstable atomic step: gamma d_tau far outside the RK4 stability interval.
    p.gamma = 1e4;
    CHECK_THROWS_AS(integrate_atoms(b, p, tau, o1, o2, 7.0), NumericalError);
}

TEST_CASE("full solver without fields leaves atoms untouched")
{
    MediumParams p{1000.0, 1000.0, 0.0, 0.0, 0.0};
    const auto c = CoherenceProfile::sigmoid(1.0, 0.5);
    const auto pulse = PulseEnvelope::sin_squared(0.0, 50.0);
    FullSolverConfig cfg;
    cfg.zeta_max = 2.0;
    cfg.d_zeta = 0.05;
    cfg.record_every = 10;
    const FullResult r = full_propagate(c, p, pulse, cfg);
    CHECK(r.fields.omega1.cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.fields.omega2.cwiseAbs().maxCoeff() == 0.0);
    for (const AtomicSnapshot& s : r.atoms) {
        const ProfileSample b = c.evaluate(s.zeta);
        for (Eigen::Index k = 0; k < s.b.cols(); ++k) {
            CHECK(s.b(0, k) == Complex(0));
            CHECK(s.b(1, k) == b.b1);
            CHECK(s.b(2, k) == b.b2);
            CHECK(std::abs(s.b.col(k).squaredNorm() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("full solver: sigmoid transfer against reduced solver and weak-field b0")
{
    const MediumParams p = fig2_medium();
    const auto sig = CoherenceProfile::sigmoid(100.0, 5.0);
    const auto pulse = PulseEnvelope::sin_squared(0.01, 50.0);
    FullSolverConfig cfg;
    cfg.zeta_max = 200.0;
    cfg.d_zeta = 0.05;
    cfg.record_every = 200;
    const FullResult full = full_propagate(sig, p, pulse, cfg);
    const FieldState reduced = reduced_propagate(sig, p, pulse, ReducedSolverConfig{200.0, 0.05, 200},
                                                 full.fields.tau_grid);

    const auto a = analysis::peak_curves(reduced);
    const auto b = analysis::peak_curves(full.fields);
    CHECK((a.efficiency - b.efficiency).cwiseAbs().maxCoeff() < 0.05);
    CHECK((a.transmission - b.transmission).cwiseAbs().maxCoeff() < 0.05);

    for (std::size_t s = 0; s < full.atoms.size(); ++s) {
        const AtomicSnapshot& snap = full.atoms[s];
        const ProfileSample b0 = sig.evaluate(snap.zeta);
        const auto row = static_cast<Eigen::Index>(s);
        for (Eigen::Index k = 200; k <= 800; k += 50) {
            const AtomicState w = analytic::weak_field_b0(full.fields.omega1(row, k),
                                                          full.fields.omega2(row, k), b0.b1, b0.b2, p);
            if (std::abs(w.b0) < 1e-12)
                continue;  // dark-state slices: both amplitudes vanish
            CHECK(std::abs(snap.b(0, k) - w.b0) <= 0.1 * std::abs(w.b0));
        }
    }
}

TEST_CASE("full solver validates configuration")
{
    const auto sig = CoherenceProfile::sigmoid(100.0, 5.0);
    const auto pulse = PulseEnvelope::sin_squared(0.01, 50.0);
    FullSolverConfig cfg;
    cfg.record_every = 0;
    CHECK_THROWS_AS(full_propagate(sig, fig2_medium(), pulse, cfg), ContractViolation);
    cfg.record_every = 1;
    cfg.zeta_max = -1.0;
    CHECK_THROWS_AS(full_propagate(sig, fig2_medium(), pulse, cfg), ContractViolation);
}
