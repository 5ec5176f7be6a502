#include "lambdagen/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lambdagen {

NumericalError::NumericalError(const std::string& what, Real zeta, Real tau)
    : Error([&] {
          std::ostringstream os;
          os.precision(10);
          os << what << " at zeta = " << zeta;
          if (!std::isnan(tau))
              os << ", tau = " << tau;
          return os.str();
      }()),
      zeta_(zeta),
      tau_(tau)
{
}

// ---------------------------------------------------------------------------

bool MediumParams::two_photon_resonant() const noexcept
{
    return std::abs(delta1 - delta2) <= kResonanceTolerance;
}

Real MediumParams::delta() const
{
    if (!two_photon_resonant())
        throw ContractViolation("medium is not two-photon resonant (delta1 != delta2)");
    return delta1;
}

bool MediumParams::equal_propagation_constants() const noexcept
{
    return std::abs(a1 - a2) <= kResonanceTolerance * std::max(1.0, std::abs(a1));
}

void MediumParams::validate() const
{
    for (Real v : {a1, a2, delta1, delta2, gamma})
        if (!std::isfinite(v))
            throw ContractViolation("medium parameters must be finite");
    if (gamma < 0.0)
        throw ContractViolation("gamma must be non-negative");
}

// ---------------------------------------------------------------------------

namespace {

void check_normalized(Complex b1, Complex b2, const char* where)
{
    if (!is_finite(b1) || !is_finite(b2))
        throw ContractViolation(std::string(where) + ": amplitudes must be finite");
    const Real total = std::norm(b1) + std::norm(b2);
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
        std::ostringstream os;
        os.precision(12);
        os << where << ": |b1|^2 + |b2|^2 = " << total << " is not normalized to 1";
        throw ContractViolation(os.str());
    }
}

Eigen::Vector4d pack(const CoherenceProfile::Tabulated& t, std::size_t k)
{
    return {t.b1[k].real(), t.b1[k].imag(), t.b2[k].real(), t.b2[k].imag()};
}

// Monotone piecewise-cubic slopes (Fritsch-Carlson with the weighted
// harmonic mean for interior points).
std::vector<Eigen::Vector4d> pchip_slopes(const CoherenceProfile::Tabulated& t)
{
    const std::size_t n = t.zeta.size();
    std::vector<Eigen::Vector4d> m(n, Eigen::Vector4d::Zero());
    std::vector<Eigen::Vector4d> secant(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k)
        secant[k] = (pack(t, k + 1) - pack(t, k)) / (t.zeta[k + 1] - t.zeta[k]);

    m.front() = secant.front();
    m.back() = secant.back();
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const Real h0 = t.zeta[k] - t.zeta[k - 1];
        const Real h1 = t.zeta[k + 1] - t.zeta[k];
        const Real w1 = 2.0 * h1 + h0;
        const Real w2 = h1 + 2.0 * h0;
        for (int c = 0; c < 4; ++c) {
            const Real d0 = secant[k - 1][c];
            const Real d1 = secant[k][c];
            m[k][c] = (d0 * d1 <= 0.0) ? 0.0 : (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    return m;
}

}  // namespace

CoherenceProfile::CoherenceProfile(std::variant<Constant, Sigmoid, Tabulated> data)
    : data_(std::move(data))
{
}

CoherenceProfile CoherenceProfile::constant(Complex b1, Complex b2)
{
    check_normalized(b1, b2, "constant profile");
    return CoherenceProfile(Constant{b1, b2});
}

CoherenceProfile CoherenceProfile::sigmoid(Real zeta0, Real zeta_bar, Real phi1, Real phi2)
{
    if (!std::isfinite(zeta0) || !std::isfinite(phi1) || !std::isfinite(phi2))
        throw ContractViolation("sigmoid profile: parameters must be finite");
    if (!(zeta_bar > 0.0) || !std::isfinite(zeta_bar))
        throw ContractViolation("sigmoid profile: zeta_bar must be positive");
    return CoherenceProfile(Sigmoid{zeta0, zeta_bar, phi1, phi2});
}

CoherenceProfile CoherenceProfile::tabulated(std::vector<Real> zeta, std::vector<Complex> b1,
                                             std::vector<Complex> b2)
{
    if (zeta.size() < 2)
        throw ContractViolation("tabulated profile: at least two samples required");
    if (zeta.size() != b1.size() || zeta.size() != b2.size())
        throw ContractViolation("tabulated profile: sample arrays differ in length");
    for (std::size_t k = 0; k < zeta.size(); ++k) {
        if (!std::isfinite(zeta[k]))
            throw ContractViolation("tabulated profile: zeta samples must be finite");
        if (k > 0 && !(zeta[k] > zeta[k - 1]))
            throw ContractViolation("tabulated profile: zeta samples must be strictly increasing");
        check_normalized(b1[k], b2[k], "tabulated profile sample");
    }
    CoherenceProfile p(Tabulated{std::move(zeta), std::move(b1), std::move(b2)});
    p.slopes_ = pchip_slopes(*p.as_tabulated());
    return p;
}

CoherenceProfile::Kind CoherenceProfile::kind() const noexcept
{
    switch (data_.index()) {
    case 0: return Kind::constant;
    case 1: return Kind::sigmoid;
    default: return Kind::tabulated;
    }
}

std::pair<Real, Real> CoherenceProfile::domain() const noexcept
{
    if (const auto* t = as_tabulated())
        return {t->zeta.front(), t->zeta.back()};
    const Real inf = std::numeric_limits<Real>::infinity();
    return {-inf, inf};
}

ProfileSample CoherenceProfile::interpolate(Real zeta) const
{
    const auto& t = *as_tabulated();
    if (!(zeta >= t.zeta.front() && zeta <= t.zeta.back())) {
        std::ostringstream os;
        os << "zeta = " << zeta << " outside tabulated profile range [" << t.zeta.front()
           << ", " << t.zeta.back() << "]";
        throw RangeError(os.str());
    }
    auto it = std::upper_bound(t.zeta.begin(), t.zeta.end(), zeta);
    std::size_t k = static_cast<std::size_t>(std::distance(t.zeta.begin(), it));
    k = std::clamp<std::size_t>(k, 1, t.zeta.size() - 1) - 1;

    const Real h = t.zeta[k + 1] - t.zeta[k];
    const Real s = (zeta - t.zeta[k]) / h;
    const Real s2 = s * s;
    const Real s3 = s2 * s;
    const Eigen::Vector4d y = (2 * s3 - 3 * s2 + 1) * pack(t, k)
                              + (s3 - 2 * s2 + s) * h * slopes_[k]
                              + (-2 * s3 + 3 * s2) * pack(t, k + 1)
                              + (s3 - s2) * h * slopes_[k + 1];
    Complex b1(y[0], y[1]);
    Complex b2(y[2], y[3]);
    const Real norm = std::sqrt(std::norm(b1) + std::norm(b2));
    return {b1 / norm, b2 / norm};
}

ProfileSample CoherenceProfile::evaluate(Real zeta) const
{
    if (const auto* c = as_constant())
        return {c->b1, c->b2};
    if (const auto* s = as_sigmoid()) {
        const Real x = (zeta - s->zeta0) / s->zeta_bar;
        // Both logistic branches evaluated directly so neither tail cancels.
        const Real upper = 1.0 / (1.0 + std::exp(-x));
        const Real lower = 1.0 / (1.0 + std::exp(x));
        return {std::polar(std::sqrt(upper), s->phi1), std::polar(std::sqrt(lower), s->phi2)};
    }
    return interpolate(zeta);
}

ProfileSample CoherenceProfile::derivative(Real zeta) const
{
    if (as_constant())
        return {Complex(0), Complex(0)};
    if (const auto* s = as_sigmoid()) {
        const Real x = (zeta - s->zeta0) / s->zeta_bar;
        const Real upper = 1.0 / (1.0 + std::exp(-x));
        const Real lower = 1.0 / (1.0 + std::exp(x));
        const ProfileSample b = evaluate(zeta);
        return {b.b1 * (lower / (2.0 * s->zeta_bar)), -b.b2 * (upper / (2.0 * s->zeta_bar))};
    }

    const auto& t = *as_tabulated();
    const ProfileSample centre = interpolate(zeta);  // range check
    (void)centre;
    auto it = std::upper_bound(t.zeta.begin(), t.zeta.end(), zeta);
    std::size_t k = static_cast<std::size_t>(std::distance(t.zeta.begin(), it));
    k = std::clamp<std::size_t>(k, 1, t.zeta.size() - 1) - 1;
    const Real step = 0.5 * (t.zeta[k + 1] - t.zeta[k]);
    const Real lo = std::max(t.zeta.front(), zeta - step);
    const Real hi = std::min(t.zeta.back(), zeta + step);
    const ProfileSample a = interpolate(lo);
    const ProfileSample b = interpolate(hi);
    return {(b.b1 - a.b1) / (hi - lo), (b.b2 - a.b2) / (hi - lo)};
}

// ---------------------------------------------------------------------------

PulseEnvelope::PulseEnvelope(Kind kind, Real amplitude, Real tau_p, Real tau_bar)
    : kind_(kind), amplitude_(amplitude), tau_p_(tau_p), tau_bar_(tau_bar > 0.0 ? tau_bar : tau_p)
{
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw ContractViolation("pulse amplitude must be finite and non-negative");
    if (!(tau_p > 0.0) || !std::isfinite(tau_p))
        throw ContractViolation("pulse duration tau_p must be positive");
    if (!std::isfinite(tau_bar))
        throw ContractViolation("pulse tau_bar must be finite");
}

PulseEnvelope PulseEnvelope::sin_squared(Real amplitude, Real tau_p, Real tau_bar)
{
    return PulseEnvelope(Kind::sin_squared, amplitude, tau_p, tau_bar);
}

PulseEnvelope PulseEnvelope::gaussian(Real amplitude, Real tau_p, Real tau_bar)
{
    return PulseEnvelope(Kind::gaussian, amplitude, tau_p, tau_bar);
}

PulseEnvelope PulseEnvelope::tabulated(std::vector<Real> tau, std::vector<Complex> omega,
                                       Real tau_bar)
{
    if (tau.size() < 2 || tau.size() != omega.size())
        throw ContractViolation("tabulated pulse: need at least two (tau, omega) samples");
    Real peak = 0.0;
    for (std::size_t k = 0; k < tau.size(); ++k) {
        if (!std::isfinite(tau[k]) || !is_finite(omega[k]))
            throw ContractViolation("tabulated pulse: samples must be finite");
        if (k > 0 && !(tau[k] > tau[k - 1]))
            throw ContractViolation("tabulated pulse: tau samples must be strictly increasing");
        peak = std::max(peak, std::abs(omega[k]));
    }
    PulseEnvelope p(Kind::tabulated, peak, tau.back() - tau.front(), tau_bar);
    p.tau_ = std::move(tau);
    p.omega_ = std::move(omega);
    return p;
}

Complex PulseEnvelope::evaluate(Real tau) const
{
    switch (kind_) {
    case Kind::sin_squared: {
        if (tau < 0.0 || tau > tau_p_)
            return 0.0;
        const Real s = std::sin(std::numbers::pi * tau / tau_p_);
        return amplitude_ * s * s;
    }
    case Kind::gaussian: {
        const Real x = (tau - 0.5 * tau_p_) / (tau_p_ / 6.0);
        return amplitude_ * std::exp(-x * x);
    }
    case Kind::tabulated: {
        if (tau < tau_.front() || tau > tau_.back())
            return 0.0;
        auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
        std::size_t k = static_cast<std::size_t>(std::distance(tau_.begin(), it));
        k = std::clamp<std::size_t>(k, 1, tau_.size() - 1) - 1;
        const Real s = (tau - tau_[k]) / (tau_[k + 1] - tau_[k]);
        return (1.0 - s) * omega_[k] + s * omega_[k + 1];
    }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------

Matrix2cd coupling_matrix(const CoherenceProfile& profile, const MediumParams& params, Real zeta)
{
    const Real delta = params.delta();
    const Complex alpha1 = response_coefficient(params.a1, delta, params.gamma);
    const Complex alpha2 = response_coefficient(params.a2, delta, params.gamma);
    const ProfileSample b = profile.evaluate(zeta);
    return coupling_matrix(b.b1, b.b2, alpha1, alpha2);
}

// ---------------------------------------------------------------------------

FieldState::FieldState(Eigen::VectorXd zeta, Eigen::VectorXd tau)
    : zeta_grid(std::move(zeta)),
      tau_grid(std::move(tau)),
      omega1(Eigen::MatrixXcd::Zero(zeta_grid.size(), tau_grid.size())),
      omega2(Eigen::MatrixXcd::Zero(zeta_grid.size(), tau_grid.size()))
{
}

Eigen::Index FieldState::zeta_index(Real zeta) const
{
    for (Eigen::Index i = 0; i < zeta_grid.size(); ++i)
        if (std::abs(zeta_grid[i] - zeta) <= 1e-9 * std::max(1.0, std::abs(zeta)))
            return i;
    std::ostringstream os;
    os << "zeta = " << zeta << " is not on the recorded grid";
    throw RangeError(os.str());
}

void FieldState::validate() const
{
    if (omega1.rows() != zeta_grid.size() || omega2.rows() != zeta_grid.size()
        || omega1.cols() != tau_grid.size() || omega2.cols() != tau_grid.size())
        throw ContractViolation("field state: array shape does not match grids");
    for (Eigen::Index i = 1; i < zeta_grid.size(); ++i)
        if (!(zeta_grid[i] > zeta_grid[i - 1]))
            throw ContractViolation("field state: zeta grid not strictly increasing");
    for (Eigen::Index i = 1; i < tau_grid.size(); ++i)
        if (!(tau_grid[i] > tau_grid[i - 1]))
            throw ContractViolation("field state: tau grid not strictly increasing");
}

Eigen::VectorXd uniform_grid(Real span, Real step)
{
    if (!(span > 0.0) || !(step > 0.0) || !std::isfinite(span) || !std::isfinite(step))
        throw ContractViolation("grid span and step must be positive");
    const auto n = std::max<long long>(1, std::llround(span / step));
    Eigen::VectorXd g(n + 1);
    for (long long k = 0; k <= n; ++k)
        g[k] = span * static_cast<Real>(k) / static_cast<Real>(n);
    return g;
}

}  // namespace lambdagen
