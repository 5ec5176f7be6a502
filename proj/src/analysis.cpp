#include "lambdagen/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lambdagen::analysis {

namespace {

Real entrance_peak(const FieldState& field)
{
    if (field.zeta_count() == 0 || field.tau_count() == 0)
        throw ContractViolation("field state is empty");
    const Real peak = field.omega1.row(0).cwiseAbs2().maxCoeff();
    if (!(peak > 0.0))
        throw DivisionError("efficiency undefined: injected pulse is identically zero");
    return peak;
}

Real trapezoid(const Eigen::VectorXd& tau, const Eigen::RowVectorXd& y)
{
    Real sum = 0.0;
    for (Eigen::Index k = 0; k + 1 < tau.size(); ++k)
        sum += 0.5 * (tau[k + 1] - tau[k]) * (y[k] + y[k + 1]);
    return sum;
}

Real entrance_energy(const FieldState& field)
{
    entrance_peak(field);
    return trapezoid(field.tau_grid, field.omega1.row(0).cwiseAbs2());
}

RegimeStatus classify(Real r)
{
    if (!std::isfinite(r) || r >= kRegimeWarnBelow)
        return RegimeStatus::fail;
    return r < kRegimePassBelow ? RegimeStatus::pass : RegimeStatus::warn;
}

}  // namespace

Real conversion_efficiency(const FieldState& field, Real zeta)
{
    const Real peak = entrance_peak(field);
    return field.omega2.row(field.zeta_index(zeta)).cwiseAbs2().maxCoeff() / peak;
}

Real transmission(const FieldState& field, Real zeta)
{
    const Real peak = entrance_peak(field);
    return field.omega1.row(field.zeta_index(zeta)).cwiseAbs2().maxCoeff() / peak;
}

Real energy_conversion_efficiency(const FieldState& field, Real zeta)
{
    const Real e0 = entrance_energy(field);
    return trapezoid(field.tau_grid, field.omega2.row(field.zeta_index(zeta)).cwiseAbs2()) / e0;
}

Real energy_transmission(const FieldState& field, Real zeta)
{
    const Real e0 = entrance_energy(field);
    return trapezoid(field.tau_grid, field.omega1.row(field.zeta_index(zeta)).cwiseAbs2()) / e0;
}

PeakCurves peak_curves(const FieldState& field)
{
    const Real peak = entrance_peak(field);
    PeakCurves c;
    c.zeta = field.zeta_grid;
    c.transmission = field.omega1.cwiseAbs2().rowwise().maxCoeff() / peak;
    c.efficiency = field.omega2.cwiseAbs2().rowwise().maxCoeff() / peak;
    return c;
}

std::string to_string(RegimeStatus status)
{
    switch (status) {
    case RegimeStatus::pass: return "PASS";
    case RegimeStatus::warn: return "WARN";
    case RegimeStatus::fail: return "FAIL";
    }
    return "FAIL";
}

RegimeReport regime_check(const MediumParams& params, const PulseEnvelope& pulse)
{
    const Real inf = std::numeric_limits<Real>::infinity();
    const Real omega = pulse.amplitude();
    const Real tau_bar = pulse.tau_bar();
    const Real gamma = params.gamma;

    RegimeReport r;
    if (gamma > 0.0) {
        r.r1 = omega / gamma;
        r.r2 = 1.0 / (gamma * tau_bar);
        r.r3 = omega * omega * tau_bar / gamma;
    } else {
        r.r1 = omega > 0.0 ? inf : 0.0;
        r.r2 = inf;
        r.r3 = omega > 0.0 ? inf : 0.0;
    }
    r.s1 = classify(r.r1);
    r.s2 = classify(r.r2);
    r.s3 = classify(r.r3);
    r.overall = std::max({r.s1, r.s2, r.s3});
    return r;
}

SolverComparison compare_solvers(const FieldState& reduced, const FieldState& full)
{
    reduced.validate();
    full.validate();
    const auto same = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        return x.size() == y.size()
               && (x.size() == 0 || (x - y).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff()));
    };
    if (!same(reduced.zeta_grid, full.zeta_grid) || !same(reduced.tau_grid, full.tau_grid))
        throw ContractViolation("compare_solvers: field states are on different grids");

    SolverComparison c;
    c.zeta = reduced.zeta_grid;
    c.relative_l2 = Eigen::VectorXd::Zero(c.zeta.size());
    const PeakCurves a = peak_curves(reduced);
    const PeakCurves b = peak_curves(full);
    c.max_efficiency_discrepancy = (a.efficiency - b.efficiency).cwiseAbs().maxCoeff();
    c.max_transmission_discrepancy = (a.transmission - b.transmission).cwiseAbs().maxCoeff();

    for (Eigen::Index i = 0; i < c.zeta.size(); ++i) {
        const Real diff = (reduced.omega1.row(i) - full.omega1.row(i)).squaredNorm()
                          + (reduced.omega2.row(i) - full.omega2.row(i)).squaredNorm();
        const Real na = reduced.omega1.row(i).squaredNorm() + reduced.omega2.row(i).squaredNorm();
        const Real nb = full.omega1.row(i).squaredNorm() + full.omega2.row(i).squaredNorm();
        const Real scale = 0.5 * (na + nb);
        c.relative_l2[i] = scale > 0.0 ? std::sqrt(diff / scale) : 0.0;
    }
    c.max_relative_l2 = c.relative_l2.size() ? c.relative_l2.maxCoeff() : 0.0;
    return c;
}

Eigen::VectorXcd dark_component_trace(const FieldState& field, const CoherenceProfile& profile)
{
    Eigen::Index peak = 0;
    field.omega1.row(0).cwiseAbs2().maxCoeff(&peak);
    Eigen::VectorXcd d(field.zeta_count());
    for (Eigen::Index i = 0; i < field.zeta_count(); ++i) {
        const ProfileSample b = profile.evaluate(field.zeta_grid[i]);
        d[i] = b.b2 * field.omega1(i, peak) - b.b1 * field.omega2(i, peak);
    }
    return d;
}

ConvergenceReport convergence_report(const FieldState& field)
{
    const PeakCurves c = peak_curves(field);
    const Eigen::Index last = c.zeta.size() - 1;
    const Real from = c.zeta[last] - 0.1 * (c.zeta[last] - c.zeta[0]);
    Eigen::Index first = last;
    while (first > 0 && c.zeta[first - 1] >= from - 1e-12)
        --first;
    return {c.zeta[first], c.zeta[last], c.transmission[last] - c.transmission[first],
            c.efficiency[last] - c.efficiency[first]};
}

}  // namespace lambdagen::analysis
