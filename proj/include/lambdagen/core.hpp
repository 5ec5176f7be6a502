// core.hpp - Domain types for a Lambda-type medium with position-dependent
// lower-state coherence: medium constants, coherence profiles, injected
// pulse envelopes and sampled field / atomic states.
//
// Coordinates are the local frame (zeta = z, tau = t - z/c). All quantities
// are in arbitrary units.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace lambdagen {

using Real = double;
using Complex = std::complex<Real>;

template <typename Scalar>
using Vector2c = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Vector3c = Eigen::Matrix<std::complex<Scalar>, 3, 1>;
template <typename Scalar>
using Matrix3c = Eigen::Matrix<std::complex<Scalar>, 3, 3>;

using Vector2cd = Vector2c<Real>;
using Matrix2cd = Matrix2c<Real>;
using Vector3cd = Vector3c<Real>;
using Matrix3cd = Matrix3c<Real>;

inline constexpr Real kNormalizationTolerance = 1e-9;
inline constexpr Real kResonanceTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was not met.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain an object was sampled on.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Denominator of a closed-form expression vanished.
class DivisionError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or unstable growth during integration. Carries the
/// location of the failure; tau is NaN when the failure is not tied to one.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, Real zeta,
                   Real tau = std::numeric_limits<Real>::quiet_NaN());

    Real zeta() const noexcept { return zeta_; }
    Real tau() const noexcept { return tau_; }

private:
    Real zeta_;
    Real tau_;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const auto& z = m(i, j);
            if (!std::isfinite(std::real(z)) || !std::isfinite(std::imag(z)))
                return false;
        }
    return true;
}

inline bool is_finite(Complex z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------------------
// Medium
// ---------------------------------------------------------------------------

struct MediumParams {
    Real a1 = 1000.0;     // propagation constant, transition |0>-|1>
    Real a2 = 1000.0;     // propagation constant, transition |0>-|2>
    Real delta1 = 0.0;    // detuning of field 1
    Real delta2 = 0.0;    // detuning of field 2
    Real gamma = 100.0;   // decay rate of |0> out of the system

    /// True iff delta1 == delta2 within kResonanceTolerance.
    bool two_photon_resonant() const noexcept;

    /// Common detuning; requires two_photon_resonant().
    Real delta() const;

    bool equal_propagation_constants() const noexcept;

    /// Throws ContractViolation when gamma < 0 or a value is non-finite.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Coherence profile b1(zeta), b2(zeta)
// ---------------------------------------------------------------------------

struct ProfileSample {
    Complex b1;
    Complex b2;
};

/// Amplitudes of the prepared lower-state superposition along zeta.
///
/// Three kinds are supported: constant amplitudes, the logistic (sigmoid)
/// transfer b1 = e^{i phi1} sqrt(1/(1+e^{-(zeta-zeta0)/zeta_bar})),
/// b2 = e^{i phi2} sqrt(1/(1+e^{(zeta-zeta0)/zeta_bar})), and tabulated
/// samples interpolated with a monotone cubic and renormalized.
class CoherenceProfile {
public:
    struct Constant {
        Complex b1;
        Complex b2;
    };
    struct Sigmoid {
        Real zeta0;
        Real zeta_bar;
        Real phi1;
        Real phi2;
    };
    struct Tabulated {
        std::vector<Real> zeta;
        std::vector<Complex> b1;
        std::vector<Complex> b2;
    };

    enum class Kind { constant, sigmoid, tabulated };

    static CoherenceProfile constant(Complex b1, Complex b2);
    static CoherenceProfile sigmoid(Real zeta0, Real zeta_bar, Real phi1 = 0.0,
                                    Real phi2 = 0.0);
    static CoherenceProfile tabulated(std::vector<Real> zeta,
                                      std::vector<Complex> b1,
                                      std::vector<Complex> b2);

    Kind kind() const noexcept;
    const Constant* as_constant() const noexcept { return std::get_if<Constant>(&data_); }
    const Sigmoid* as_sigmoid() const noexcept { return std::get_if<Sigmoid>(&data_); }
    const Tabulated* as_tabulated() const noexcept { return std::get_if<Tabulated>(&data_); }

    /// (b1, b2) at zeta. Tabulated profiles throw RangeError outside their
    /// sampled range.
    ProfileSample evaluate(Real zeta) const;

    /// (db1/dzeta, db2/dzeta). Analytic for constant and sigmoid kinds,
    /// central differences with half the local sample spacing otherwise.
    ProfileSample derivative(Real zeta) const;

    /// Sampled range; infinite for analytic kinds.
    std::pair<Real, Real> domain() const noexcept;

private:
    explicit CoherenceProfile(std::variant<Constant, Sigmoid, Tabulated> data);

    ProfileSample interpolate(Real zeta) const;

    std::variant<Constant, Sigmoid, Tabulated> data_;
    // Fritsch-Carlson slopes of re/im b1, re/im b2 at every tabulated sample.
    std::vector<Eigen::Vector4d> slopes_;
};

inline ProfileSample evaluate_profile(const CoherenceProfile& profile, Real zeta)
{
    return profile.evaluate(zeta);
}

// ---------------------------------------------------------------------------
// Pulse envelope Omega(tau)
// ---------------------------------------------------------------------------

class PulseEnvelope {
public:
    enum class Kind { sin_squared, gaussian, tabulated };

    /// amplitude * sin^2(pi tau / tau_p) on [0, tau_p], zero elsewhere.
    /// tau_bar is the characteristic length used by the regime check; a
    /// non-positive value selects tau_p.
    static PulseEnvelope sin_squared(Real amplitude, Real tau_p, Real tau_bar = 0.0);

    /// amplitude * exp(-((tau - tau_p/2) / (tau_p/6))^2), centered in [0, tau_p].
    static PulseEnvelope gaussian(Real amplitude, Real tau_p, Real tau_bar = 0.0);

    /// Linear interpolation of complex samples, zero outside the samples.
    /// amplitude is max |Omega|, tau_p the sampled span.
    static PulseEnvelope tabulated(std::vector<Real> tau, std::vector<Complex> omega,
                                   Real tau_bar = 0.0);

    Kind kind() const noexcept { return kind_; }
    Real amplitude() const noexcept { return amplitude_; }
    Real tau_p() const noexcept { return tau_p_; }
    Real tau_bar() const noexcept { return tau_bar_; }
    const std::vector<Real>& samples_tau() const noexcept { return tau_; }
    const std::vector<Complex>& samples_omega() const noexcept { return omega_; }

    Complex evaluate(Real tau) const;

private:
    PulseEnvelope(Kind kind, Real amplitude, Real tau_p, Real tau_bar);

    Kind kind_;
    Real amplitude_;
    Real tau_p_;
    Real tau_bar_;
    std::vector<Real> tau_;
    std::vector<Complex> omega_;
};

inline Complex evaluate_pulse(const PulseEnvelope& pulse, Real tau)
{
    return pulse.evaluate(tau);
}

// ---------------------------------------------------------------------------
// Sampled states
// ---------------------------------------------------------------------------

/// Two Rabi envelopes on a (zeta x tau) grid, rows indexed by zeta.
struct FieldState {
    Eigen::VectorXd zeta_grid;
    Eigen::VectorXd tau_grid;
    Eigen::MatrixXcd omega1;
    Eigen::MatrixXcd omega2;

    FieldState() = default;
    FieldState(Eigen::VectorXd zeta, Eigen::VectorXd tau);

    Eigen::Index zeta_count() const noexcept { return zeta_grid.size(); }
    Eigen::Index tau_count() const noexcept { return tau_grid.size(); }

    /// Row whose zeta matches within 1e-9 (relative to max(1, |zeta|)).
    /// Throws RangeError when zeta is not on the recorded grid.
    Eigen::Index zeta_index(Real zeta) const;

    /// Throws ContractViolation on shape mismatch or non-increasing grids.
    void validate() const;
};

struct AtomicState {
    Complex b0;
    Complex b1;
    Complex b2;

    Vector3cd vector() const { return Vector3cd(b0, b1, b2); }
    Real norm2() const noexcept { return std::norm(b0) + std::norm(b1) + std::norm(b2); }
};

// ---------------------------------------------------------------------------
// Coupling matrix K(zeta)
// ---------------------------------------------------------------------------

/// a / (delta + i gamma / 2). Throws DivisionError when delta = gamma = 0.
template <typename Scalar>
std::complex<Scalar> response_coefficient(Scalar a, Scalar delta, Scalar gamma)
{
    const std::complex<Scalar> denom(delta, gamma / Scalar(2));
    if (denom == std::complex<Scalar>(0))
        throw DivisionError("response coefficient undefined for delta = gamma = 0");
    return a / denom;
}

/// K = [[alpha1 |b1|^2, alpha1 b1 b2*], [alpha2 b2 b1*, alpha2 |b2|^2]].
template <typename Scalar>
Matrix2c<Scalar> coupling_matrix(std::complex<Scalar> b1, std::complex<Scalar> b2,
                                 std::complex<Scalar> alpha1, std::complex<Scalar> alpha2)
{
    Matrix2c<Scalar> k;
    k << alpha1 * std::norm(b1), alpha1 * b1 * std::conj(b2),
         alpha2 * b2 * std::conj(b1), alpha2 * std::norm(b2);
    return k;
}

/// K(zeta) of the reduced propagation equation dOmega/dzeta = -i K Omega.
/// Requires two-photon resonance.
Matrix2cd coupling_matrix(const CoherenceProfile& profile, const MediumParams& params,
                          Real zeta);

/// Uniform grid 0, h, ..., span with count = round(span / step) intervals.
Eigen::VectorXd uniform_grid(Real span, Real step);

}  // namespace lambdagen
