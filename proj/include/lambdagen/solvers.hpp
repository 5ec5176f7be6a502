// solvers.hpp - Fixed-step integrators for the reduced propagation equation
// dOmega/dzeta = -i K(zeta) Omega and for the full coupled system
//   i db/dtau = H(zeta, tau) b,   dOmega_n/dzeta = i a_n b_n b0*.

#pragma once

#include <functional>
#include <vector>

#include "lambdagen/core.hpp"

namespace lambdagen {

/// One classical Runge-Kutta step for y' = f(x, y). State is any Eigen
/// fixed- or dynamic-size dense type.
template <typename State, typename Rhs>
State rk4_step(const State& y, Real x, Real h, Rhs&& f)
{
    const State k1 = f(x, y);
    const State k2 = f(x + 0.5 * h, State(y + (0.5 * h) * k1));
    const State k3 = f(x + 0.5 * h, State(y + (0.5 * h) * k2));
    const State k4 = f(x + h, State(y + h * k3));
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

using ProgressFn = std::function<void(Real zeta)>;

enum class ReducedMethod { rk4 };

struct ReducedSolverConfig {
    Real zeta_max = 200.0;
    Real d_zeta = 0.0;       // non-positive selects zeta_max / 4000
    int record_every = 1;
    ReducedMethod method = ReducedMethod::rk4;

    Real step() const;
    long long steps() const;
    void validate() const;
};

enum class FieldStepping { midpoint };
enum class AtomicMethod { rk4 };

struct FullSolverConfig {
    Real zeta_max = 200.0;
    Real d_zeta = 0.0;       // non-positive selects zeta_max / 4000
    Real tau_max = 0.0;      // non-positive selects the pulse duration
    Real d_tau = 0.0;        // non-positive selects tau_p / 1000
    int record_every = 1;
    FieldStepping zeta_order = FieldStepping::midpoint;
    AtomicMethod atomic_method = AtomicMethod::rk4;

    Real step() const;
    long long steps() const;
    void validate() const;
};

/// Uniform tau grid on [0, tau_max] with the defaults documented on
/// FullSolverConfig.
Eigen::VectorXd make_tau_grid(const PulseEnvelope& pulse, Real tau_max = 0.0, Real d_tau = 0.0);

/// Samples of the injected envelope on a tau grid.
Eigen::VectorXcd sample_pulse(const PulseEnvelope& pulse, const Eigen::VectorXd& tau_grid);

// ---------------------------------------------------------------------------
// Reduced equation
// ---------------------------------------------------------------------------

/// U(zeta) with dU/dzeta = -i K(zeta) U, U(0) = I. The step is d_zeta
/// adjusted to divide zeta evenly.
Matrix2cd reduced_propagator(const CoherenceProfile& profile, const MediumParams& params,
                             Real zeta, const ReducedSolverConfig& config);

struct PropagatorPath {
    Eigen::VectorXd zeta;          // recorded positions
    std::vector<Matrix2cd> u;      // U at each recorded position
};

/// U sampled every record_every steps (and always at zeta_max).
PropagatorPath reduced_propagator_path(const CoherenceProfile& profile,
                                       const MediumParams& params,
                                       const ReducedSolverConfig& config,
                                       const ProgressFn& progress = {});

/// Omega(zeta, tau) = U(zeta) (Omega(tau), 0) on the recorded zeta grid.
FieldState reduced_propagate(const CoherenceProfile& profile, const MediumParams& params,
                             const PulseEnvelope& pulse, const ReducedSolverConfig& config,
                             const Eigen::VectorXd& tau_grid,
                             const ProgressFn& progress = {});

// ---------------------------------------------------------------------------
// Full Maxwell-Schroedinger system
// ---------------------------------------------------------------------------

/// H(zeta, tau) acting on (b0, b1, b2).
Matrix3cd atomic_hamiltonian(const MediumParams& params, Complex omega1, Complex omega2);

/// Amplitudes (b0, b1, b2) along tau, one column per tau sample.
using AtomicTrace = Eigen::Matrix<Complex, 3, Eigen::Dynamic>;

/// Integrates i db/dtau = H b over the tau grid from b = (0, b1, b2), with
/// the fields interpolated linearly between samples. Throws NumericalError
/// on non-finite values or norm growth beyond 1 + 1e-6.
AtomicTrace integrate_atoms(const ProfileSample& prepared, const MediumParams& params,
                            const Eigen::VectorXd& tau_grid,
                            const Eigen::Ref<const Eigen::VectorXcd>& omega1,
                            const Eigen::Ref<const Eigen::VectorXcd>& omega2, Real zeta);

struct AtomicSnapshot {
    Real zeta;
    AtomicTrace b;
};

struct FullResult {
    FieldState fields;
    std::vector<AtomicSnapshot> atoms;  // one per recorded zeta
};

FullResult full_propagate(const CoherenceProfile& profile, const MediumParams& params,
                          const PulseEnvelope& pulse, const FullSolverConfig& config,
                          const ProgressFn& progress = {});

}  // namespace lambdagen
