#include "lambdagen/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace lambdagen {

namespace {

constexpr Real kDefaultZetaSteps = 4000.0;
constexpr Real kDefaultTauSteps = 1000.0;
constexpr Real kNormGrowthLimit = 1e-6;
const Complex kI(0.0, 1.0);

long long step_count(Real span, Real step)
{
    return std::max<long long>(1, std::llround(span / step));
}

std::vector<long long> recorded_steps(long long steps, int every)
{
    std::vector<long long> out;
    for (long long n = 0; n <= steps; n += every)
        out.push_back(n);
    if (out.back() != steps)
        out.push_back(steps);
    return out;
}

void check_zeta_coverage(const CoherenceProfile& profile, Real zeta_max)
{
    const auto [lo, hi] = profile.domain();
    if (lo > 0.0 || hi < zeta_max)
        throw RangeError("coherence profile does not cover [0, zeta_max]");
}

}  // namespace

Real ReducedSolverConfig::step() const
{
    const Real h = d_zeta > 0.0 ? d_zeta : zeta_max / kDefaultZetaSteps;
    return zeta_max / static_cast<Real>(step_count(zeta_max, h));
}

long long ReducedSolverConfig::steps() const
{
    return step_count(zeta_max, d_zeta > 0.0 ? d_zeta : zeta_max / kDefaultZetaSteps);
}

void ReducedSolverConfig::validate() const
{
    if (!(zeta_max > 0.0) || !std::isfinite(zeta_max))
        throw ContractViolation("zeta_max must be positive");
    if (!std::isfinite(d_zeta) || d_zeta > zeta_max)
        throw ContractViolation("d_zeta must be finite and no larger than zeta_max");
    if (record_every < 1)
        throw ContractViolation("record_every must be at least 1");
}

Real FullSolverConfig::step() const
{
    return ReducedSolverConfig{zeta_max, d_zeta, record_every, ReducedMethod::rk4}.step();
}

long long FullSolverConfig::steps() const
{
    return ReducedSolverConfig{zeta_max, d_zeta, record_every, ReducedMethod::rk4}.steps();
}

void FullSolverConfig::validate() const
{
    ReducedSolverConfig{zeta_max, d_zeta, record_every, ReducedMethod::rk4}.validate();
    if (!std::isfinite(tau_max) || !std::isfinite(d_tau))
        throw ContractViolation("tau_max and d_tau must be finite");
}

Eigen::VectorXd make_tau_grid(const PulseEnvelope& pulse, Real tau_max, Real d_tau)
{
    const Real span = tau_max > 0.0 ? tau_max : pulse.tau_p();
    const Real step = d_tau > 0.0 ? d_tau : pulse.tau_p() / kDefaultTauSteps;
    return uniform_grid(span, step);
}

Eigen::VectorXcd sample_pulse(const PulseEnvelope& pulse, const Eigen::VectorXd& tau_grid)
{
    Eigen::VectorXcd out(tau_grid.size());
    for (Eigen::Index k = 0; k < tau_grid.size(); ++k)
        out[k] = pulse.evaluate(tau_grid[k]);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct ReducedRhs {
    const CoherenceProfile& profile;
    const MediumParams& params;

    Matrix2cd operator()(Real zeta, const Matrix2cd& u) const
    {
        return -kI * (coupling_matrix(profile, params, zeta) * u);
    }
};

}  // namespace

Matrix2cd reduced_propagator(const CoherenceProfile& profile, const MediumParams& params,
                             Real zeta, const ReducedSolverConfig& config)
{
    config.validate();
    if (!(zeta >= 0.0))
        throw ContractViolation("reduced_propagator: zeta must be non-negative");
    Matrix2cd u = Matrix2cd::Identity();
    if (zeta == 0.0)
        return u;
    check_zeta_coverage(profile, zeta);

    const long long n = step_count(zeta, config.d_zeta > 0.0 ? config.d_zeta : config.step());
    const Real h = zeta / static_cast<Real>(n);
    const ReducedRhs rhs{profile, params};
    for (long long i = 0; i < n; ++i) {
        const Real z = h * static_cast<Real>(i);
        u = rk4_step(u, z, h, rhs);
        if (!all_finite(u))
            throw NumericalError("non-finite propagator", z + h);
    }
    return u;
}

PropagatorPath reduced_propagator_path(const CoherenceProfile& profile,
                                       const MediumParams& params,
                                       const ReducedSolverConfig& config,
                                       const ProgressFn& progress)
{
    config.validate();
    check_zeta_coverage(profile, config.zeta_max);
    const long long n = config.steps();
    const Real h = config.step();
    const auto record = recorded_steps(n, config.record_every);

    PropagatorPath path;
    path.zeta.resize(static_cast<Eigen::Index>(record.size()));
    path.u.reserve(record.size());

    const ReducedRhs rhs{profile, params};
    Matrix2cd u = Matrix2cd::Identity();
    std::size_t next = 0;
    for (long long i = 0;; ++i) {
        const Real z = h * static_cast<Real>(i);
        if (next < record.size() && record[next] == i) {
            path.zeta[static_cast<Eigen::Index>(next)] = z;
            path.u.push_back(u);
            ++next;
        }
        if (progress)
            progress(z);
        if (i == n)
            break;
        u = rk4_step(u, z, h, rhs);
        if (!all_finite(u))
            throw NumericalError("non-finite propagator", z + h);
    }
    return path;
}

FieldState reduced_propagate(const CoherenceProfile& profile, const MediumParams& params,
                             const PulseEnvelope& pulse, const ReducedSolverConfig& config,
                             const Eigen::VectorXd& tau_grid, const ProgressFn& progress)
{
    const PropagatorPath path = reduced_propagator_path(profile, params, config, progress);
    const Eigen::VectorXcd input = sample_pulse(pulse, tau_grid);

    FieldState state(path.zeta, tau_grid);
    for (Eigen::Index i = 0; i < path.zeta.size(); ++i) {
        const Matrix2cd& u = path.u[static_cast<std::size_t>(i)];
        state.omega1.row(i) = u(0, 0) * input.transpose();
        state.omega2.row(i) = u(1, 0) * input.transpose();
    }
    return state;
}

// ---------------------------------------------------------------------------

Matrix3cd atomic_hamiltonian(const MediumParams& params, Complex omega1, Complex omega2)
{
    Matrix3cd h;
    h << Complex(params.delta1, -0.5 * params.gamma), std::conj(omega1), std::conj(omega2),
         omega1, 0.0, 0.0,
         omega2, 0.0, params.delta1 - params.delta2;
    return h;
}

namespace {

// -i H b written out; the Hamiltonian is sparse and this runs in the
// innermost loop of the full solver.
struct AtomicRhs {
    Complex excited;   // delta1 - i gamma / 2
    Real raman;        // delta1 - delta2
    Complex omega1_begin, omega1_end;
    Complex omega2_begin, omega2_end;
    Real tau_begin;
    Real inv_step;

    Vector3cd operator()(Real tau, const Vector3cd& b) const
    {
        const Real s = (tau - tau_begin) * inv_step;
        const Complex o1 = omega1_begin + s * (omega1_end - omega1_begin);
        const Complex o2 = omega2_begin + s * (omega2_end - omega2_begin);
        Vector3cd d;
        d[0] = -kI * (excited * b[0] + std::conj(o1) * b[1] + std::conj(o2) * b[2]);
        d[1] = -kI * (o1 * b[0]);
        d[2] = -kI * (o2 * b[0] + raman * b[2]);
        return d;
    }
};

}  // namespace

AtomicTrace integrate_atoms(const ProfileSample& prepared, const MediumParams& params,
                            const Eigen::VectorXd& tau_grid,
                            const Eigen::Ref<const Eigen::VectorXcd>& omega1,
                            const Eigen::Ref<const Eigen::VectorXcd>& omega2, Real zeta)
{
    const Eigen::Index nt = tau_grid.size();
    if (omega1.size() != nt || omega2.size() != nt)
        throw ContractViolation("integrate_atoms: field samples do not match tau grid");

    AtomicTrace trace(3, nt);
    Vector3cd b(0.0, prepared.b1, prepared.b2);
    trace.col(0) = b;
    const Real initial = b.squaredNorm();
    const Real limit = initial * (1.0 + kNormGrowthLimit);

    AtomicRhs rhs{Complex(params.delta1, -0.5 * params.gamma), params.delta1 - params.delta2,
                  0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (Eigen::Index k = 0; k + 1 < nt; ++k) {
        const Real h = tau_grid[k + 1] - tau_grid[k];
        rhs.omega1_begin = omega1[k];
        rhs.omega1_end = omega1[k + 1];
        rhs.omega2_begin = omega2[k];
        rhs.omega2_end = omega2[k + 1];
        rhs.tau_begin = tau_grid[k];
        rhs.inv_step = 1.0 / h;
        b = rk4_step(b, tau_grid[k], h, rhs);
        if (!all_finite(b))
            throw NumericalError("non-finite atomic amplitudes", zeta, tau_grid[k + 1]);
        if (b.squaredNorm() > limit)
            throw NumericalError("atomic norm grew beyond 1 + 1e-6 (unstable atomic step)", zeta,
                                 tau_grid[k + 1]);
        trace.col(k + 1) = b;
    }
    return trace;
}

namespace {

// i a_n b_n b0* on the tau grid.
void field_source(const AtomicTrace& b, const MediumParams& params, Eigen::VectorXcd& s1,
                  Eigen::VectorXcd& s2)
{
    const Eigen::Index nt = b.cols();
    s1.resize(nt);
    s2.resize(nt);
    for (Eigen::Index k = 0; k < nt; ++k) {
        const Complex b0c = std::conj(b(0, k));
        s1[k] = kI * params.a1 * b(1, k) * b0c;
        s2[k] = kI * params.a2 * b(2, k) * b0c;
    }
}

void check_fields(const Eigen::VectorXcd& o1, const Eigen::VectorXcd& o2,
                  const Eigen::VectorXd& tau, Real zeta)
{
    for (Eigen::Index k = 0; k < tau.size(); ++k)
        if (!is_finite(o1[k]) || !is_finite(o2[k]))
            throw NumericalError("non-finite field", zeta, tau[k]);
}

}  // namespace

FullResult full_propagate(const CoherenceProfile& profile, const MediumParams& params,
                          const PulseEnvelope& pulse, const FullSolverConfig& config,
                          const ProgressFn& progress)
{
    config.validate();
    params.validate();
    check_zeta_coverage(profile, config.zeta_max);

    const Eigen::VectorXd tau = make_tau_grid(pulse, config.tau_max, config.d_tau);
    const long long n = config.steps();
    const Real h = config.step();
    const auto record = recorded_steps(n, config.record_every);

    Eigen::VectorXd zeta_rec(static_cast<Eigen::Index>(record.size()));
    for (std::size_t r = 0; r < record.size(); ++r)
        zeta_rec[static_cast<Eigen::Index>(r)] = h * static_cast<Real>(record[r]);

    FullResult result{FieldState(zeta_rec, tau), {}};
    result.atoms.reserve(record.size());

    Eigen::VectorXcd o1 = sample_pulse(pulse, tau);
    Eigen::VectorXcd o2 = Eigen::VectorXcd::Zero(tau.size());
    Eigen::VectorXcd s1, s2, o1_half, o2_half;

    AtomicTrace atoms = integrate_atoms(profile.evaluate(0.0), params, tau, o1, o2, 0.0);
    std::size_t next = 0;
    for (long long i = 0;; ++i) {
        const Real z = h * static_cast<Real>(i);
        if (next < record.size() && record[next] == i) {
            const auto row = static_cast<Eigen::Index>(next);
            result.fields.omega1.row(row) = o1.transpose();
            result.fields.omega2.row(row) = o2.transpose();
            result.atoms.push_back({z, atoms});
            ++next;
        }
        if (progress)
            progress(z);
        if (i == n)
            break;

        // Midpoint rule in zeta: predict fields at z + h/2, re-solve the
        // atoms there, then advance with the midpoint source.
        field_source(atoms, params, s1, s2);
        o1_half = o1 + (0.5 * h) * s1;
        o2_half = o2 + (0.5 * h) * s2;
        const Real z_half = z + 0.5 * h;
        check_fields(o1_half, o2_half, tau, z_half);
        const AtomicTrace mid =
            integrate_atoms(profile.evaluate(z_half), params, tau, o1_half, o2_half, z_half);
        field_source(mid, params, s1, s2);
        o1 += h * s1;
        o2 += h * s2;
        const Real z_next = h * static_cast<Real>(i + 1);
        check_fields(o1, o2, tau, z_next);
        atoms = integrate_atoms(profile.evaluate(z_next), params, tau, o1, o2, z_next);
    }
    return result;
}

}  // namespace lambdagen
