// analysis.hpp - Observables derived from propagated fields, weak-field
// regime validation and solver cross-comparison.

#pragma once

#include <string>

#include "lambdagen/core.hpp"

namespace lambdagen::analysis {

/// max_tau |Omega2(zeta)|^2 / max_tau |Omega1(0)|^2. Throws DivisionError
/// when the entrance pulse is identically zero.
Real conversion_efficiency(const FieldState& field, Real zeta);

/// max_tau |Omega1(zeta)|^2 / max_tau |Omega1(0)|^2.
Real transmission(const FieldState& field, Real zeta);

/// Pulse-energy variants (trapezoidal integrals over tau) of the above.
Real energy_conversion_efficiency(const FieldState& field, Real zeta);
Real energy_transmission(const FieldState& field, Real zeta);

/// Peak normalized intensities at every recorded zeta.
struct PeakCurves {
    Eigen::VectorXd zeta;
    Eigen::VectorXd transmission;
    Eigen::VectorXd efficiency;
};
PeakCurves peak_curves(const FieldState& field);

enum class RegimeStatus { pass, warn, fail };

std::string to_string(RegimeStatus status);

/// Ratios for |Omega| << gamma, gamma tau_bar >> 1 and |Omega|^2 tau_bar << gamma.
struct RegimeReport {
    Real r1 = 0.0;  // Omega_peak / gamma
    Real r2 = 0.0;  // 1 / (gamma tau_bar)
    Real r3 = 0.0;  // Omega_peak^2 tau_bar / gamma
    RegimeStatus s1 = RegimeStatus::pass;
    RegimeStatus s2 = RegimeStatus::pass;
    RegimeStatus s3 = RegimeStatus::pass;
    RegimeStatus overall = RegimeStatus::pass;
};

inline constexpr Real kRegimePassBelow = 0.1;
inline constexpr Real kRegimeWarnBelow = 1.0;

RegimeReport regime_check(const MediumParams& params, const PulseEnvelope& pulse);

struct SolverComparison {
    Real max_efficiency_discrepancy = 0.0;
    Real max_transmission_discrepancy = 0.0;
    Eigen::VectorXd zeta;
    // ||a - b|| / sqrt((||a||^2 + ||b||^2) / 2) over both channels per slice;
    // zero when both slices vanish.
    Eigen::VectorXd relative_l2;
    Real max_relative_l2 = 0.0;
};

/// Requires identical grids (within 1e-12); throws ContractViolation otherwise.
SolverComparison compare_solvers(const FieldState& reduced, const FieldState& full);

/// D(zeta) = b2(zeta) Omega1(zeta, tau*) - b1(zeta) Omega2(zeta, tau*) at the
/// tau* where the entrance pulse peaks. Conserved exactly by K for fixed b
/// and, for slowly varying b, in the adiabatic limit.
Eigen::VectorXcd dark_component_trace(const FieldState& field, const CoherenceProfile& profile);

/// Change of the peak curves over the last 10% of the recorded zeta range.
struct ConvergenceReport {
    Real zeta_from = 0.0;
    Real zeta_to = 0.0;
    Real transmission_change = 0.0;
    Real efficiency_change = 0.0;
};
ConvergenceReport convergence_report(const FieldState& field);

}  // namespace lambdagen::analysis
