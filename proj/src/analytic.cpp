#include "lambdagen/analytic.hpp"

#include <cmath>

namespace lambdagen::analytic {

namespace {

void require_equal_constants(const MediumParams& params, const char* op)
{
    if (!params.equal_propagation_constants())
        throw ContractViolation(std::string(op) + " requires a1 == a2");
}

}  // namespace

Complex alpha(const MediumParams& params, int which)
{
    if (which != 1 && which != 2)
        throw ContractViolation("alpha: transition index must be 1 or 2");
    const Real a = which == 1 ? params.a1 : params.a2;
    return response_coefficient(a, params.delta(), params.gamma);
}

FieldPair constant_solution(Complex b1, Complex b2, const MediumParams& params, Real zeta,
                            Complex omega_in)
{
    require_equal_constants(params, "constant_solution");
    if (std::abs(std::norm(b1) + std::norm(b2) - 1.0) > kNormalizationTolerance)
        throw ContractViolation("constant_solution: |b1|^2 + |b2|^2 must equal 1");
    const Complex decay = std::exp(Complex(0, -1) * alpha(params, 1) * zeta);
    return {(std::norm(b1) * decay + std::norm(b2)) * omega_in,
            std::conj(b1) * b2 * (decay - 1.0) * omega_in};
}

Real long_distance_zeta(const MediumParams& params, Real factor)
{
    const Real rate = std::abs(alpha(params, 1).imag());
    if (rate == 0.0)
        throw DivisionError("long-distance limit undefined: Im(alpha) = 0");
    return factor / rate;
}

FieldPair adiabatic_solution(const CoherenceProfile& profile, const MediumParams& params,
                             Real zeta, Complex omega_in)
{
    require_equal_constants(params, "adiabatic_solution");
    const ProfileSample entry = profile.evaluate(0.0);
    const ProfileSample b = profile.evaluate(zeta);
    const Complex decay = std::exp(Complex(0, -1) * alpha(params, 1) * zeta);
    const Complex bright = decay * std::conj(entry.b1);
    return {(entry.b2 * std::conj(b.b2) + bright * b.b1) * omega_in,
            (-entry.b2 * std::conj(b.b1) + bright * b.b2) * omega_in};
}

Complex adiabaticity_mismatch(const CoherenceProfile& profile, Real zeta)
{
    const ProfileSample b = profile.evaluate(zeta);
    const ProfileSample db = profile.derivative(zeta);
    return Complex(0, 1) * (b.b1 * db.b2 - db.b1 * b.b2);
}

AdiabaticityReport adiabaticity_ratio(const CoherenceProfile& profile,
                                      const MediumParams& params,
                                      const Eigen::Ref<const Eigen::VectorXd>& zeta_grid)
{
    require_equal_constants(params, "adiabaticity_ratio");
    const Real scale = std::abs(alpha(params, 1));
    if (scale == 0.0)
        throw DivisionError("adiabaticity ratio undefined for alpha = 0");

    AdiabaticityReport report;
    report.ratio.resize(zeta_grid.size());
    for (Eigen::Index i = 0; i < zeta_grid.size(); ++i) {
        report.ratio[i] = std::abs(adiabaticity_mismatch(profile, zeta_grid[i])) / scale;
        if (i == 0 || report.ratio[i] > report.max_ratio) {
            report.max_ratio = report.ratio[i];
            report.zeta_at_max = zeta_grid[i];
        }
    }
    return report;
}

AtomicState weak_field_b0(Complex omega1, Complex omega2, Complex b1, Complex b2,
                          const MediumParams& params)
{
    const Complex denom(params.delta(), -0.5 * params.gamma);
    if (denom == Complex(0))
        throw DivisionError("weak-field amplitude undefined for delta = gamma = 0");
    const Complex b0 = -(std::conj(omega1) * b1 + std::conj(omega2) * b2) / denom;
    return {b0, b1, b2};
}

}  // namespace lambdagen::analytic
