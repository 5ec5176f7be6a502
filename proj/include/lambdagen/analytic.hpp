// analytic.hpp - Closed-form field solutions and regime criteria.
//
// All solutions assume the parametric-generation boundary condition
// Omega1(0, tau) = Omega(tau), Omega2(0, tau) = 0, and equal propagation
// constants a1 = a2.

#pragma once

#include <utility>

#include "lambdagen/core.hpp"

namespace lambdagen::analytic {

using FieldPair = std::pair<Complex, Complex>;

/// alpha_n = a_n / (delta + i gamma / 2), n in {1, 2}.
Complex alpha(const MediumParams& params, int which);

/// Solution for zeta-independent amplitudes (b1, b2).
FieldPair constant_solution(Complex b1, Complex b2, const MediumParams& params, Real zeta,
                            Complex omega_in);

/// Zeta beyond which the bright component is below e^{-factor}:
/// factor / |Im alpha|, i.e. factor * gamma / (2a) on resonance.
Real long_distance_zeta(const MediumParams& params, Real factor = 10.0);

/// Adiabatic-following solution. Evaluated regardless of whether the
/// profile is actually adiabatic; pair with adiabaticity_ratio.
FieldPair adiabatic_solution(const CoherenceProfile& profile, const MediumParams& params,
                             Real zeta, Complex omega_in);

/// v(zeta) = i (b1 db2/dzeta - db1/dzeta b2).
Complex adiabaticity_mismatch(const CoherenceProfile& profile, Real zeta);

struct AdiabaticityReport {
    Eigen::VectorXd ratio;  // |v| / |alpha| per grid point
    Real max_ratio = 0.0;
    Real zeta_at_max = 0.0;
};

AdiabaticityReport adiabaticity_ratio(const CoherenceProfile& profile,
                                      const MediumParams& params,
                                      const Eigen::Ref<const Eigen::VectorXd>& zeta_grid);

/// Weak-field, strongly damped excited-state amplitude with the lower
/// amplitudes frozen at (b1, b2): b0 = -(Omega1* b1 + Omega2* b2) / (delta - i gamma/2).
AtomicState weak_field_b0(Complex omega1, Complex omega2, Complex b1, Complex b2,
                          const MediumParams& params);

}  // namespace lambdagen::analytic
