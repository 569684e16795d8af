#ifndef DEULER_PARAMS_HPP
#define DEULER_PARAMS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace deuler
{

/// Thrown when an argument lies outside the domain of a thermodynamic or
/// spectral operation (non-positive pressure, bad grid size, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Polytropic gas with linear damping, linearised about (p_inf, 0, s_inf).
///
/// Only the six primitive constants are stored; rho_inf, kappa1 and kappa2 are
/// recomputed on demand so a params object can never hold stale derived values.
struct PhysicalParams
{
    double R     = 1.0;
    double cv    = 1.5;
    double a     = 1.0;
    double p_inf = 1.0;
    double s_inf = 0.0;
    double k     = 1.0;

    /// Defaults with k picked so that rho_inf == 1.
    static PhysicalParams defaults() { return PhysicalParams{}.with_unit_density(); }

    /// Same constants, k rescaled so the equilibrium density is exactly one.
    [[nodiscard]] PhysicalParams with_unit_density() const
    {
        PhysicalParams out = *this;
        out.k              = 1.0;
        out.k              = 1.0 / out.rho_inf();
        return out;
    }

    [[nodiscard]] double gamma_exponent() const { return cv / (cv + R); }

    [[nodiscard]] double rho_inf() const
    {
        return k * std::pow(p_inf, gamma_exponent()) * std::exp(-s_inf / (cv + R));
    }

    [[nodiscard]] double kappa1() const { return std::sqrt(cv / ((R + cv) * rho_inf() * p_inf)); }
    [[nodiscard]] double kappa2() const { return std::sqrt((R + cv) * p_inf / (cv * rho_inf())); }

    void validate() const
    {
        auto require_positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw DomainError(std::string("physical parameter ") + name + " must be positive and finite");
        };
        require_positive(R, "R");
        require_positive(cv, "cv");
        require_positive(a, "a");
        require_positive(p_inf, "p_inf");
        require_positive(k, "k");
        if (!std::isfinite(s_inf))
            throw DomainError("physical parameter s_inf must be finite");
    }
};

/// The two numbers the linearised (p, v) system actually depends on.
struct LinearCoefficients
{
    double a      = 1.0;
    double kappa2 = 1.0;

    LinearCoefficients() = default;
    LinearCoefficients(double damping, double wave_speed) : a(damping), kappa2(wave_speed) {}
    explicit LinearCoefficients(const PhysicalParams& params) : a(params.a), kappa2(params.kappa2()) {}

    /// |xi| at which the two eigenvalues of the mode matrix coincide.
    [[nodiscard]] double critical_wavenumber() const { return a / (2.0 * kappa2); }
};

} // namespace deuler

#endif // DEULER_PARAMS_HPP
