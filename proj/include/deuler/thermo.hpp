#ifndef DEULER_THERMO_HPP
#define DEULER_THERMO_HPP

#include "deuler/params.hpp"

#include <array>
#include <cmath>

namespace deuler
{

/// rho = k p^{cv/(cv+R)} exp(-s/(cv+R)), for total (not perturbed) p and s.
inline double eos_density(double p_total, double s_total, const PhysicalParams& params)
{
    if (!(p_total > 0.0))
        throw DomainError("eos_density: total pressure must be strictly positive");
    return params.k * std::pow(p_total, params.gamma_exponent()) * std::exp(-s_total / (params.cv + params.R));
}

struct ThermoState
{
    double rho;
    double theta;    ///< temperature p / (R rho)
    double e;        ///< internal energy cv theta
    double e_total;  ///< |u|^2/2 + e
};

/// Thermodynamic quantities at one point; `u` is the physical velocity.
inline ThermoState derived_thermo(double p_total, double s_total, const std::array<double, 3>& u,
                                  const PhysicalParams& params)
{
    const double rho   = eos_density(p_total, s_total, params);
    const double theta = p_total / (params.R * rho);
    const double e     = params.cv * theta;
    const double ke    = 0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    return {rho, theta, e, ke + e};
}

inline ThermoState derived_thermo(double p_total, double s_total, const PhysicalParams& params)
{
    return derived_thermo(p_total, s_total, {0.0, 0.0, 0.0}, params);
}

} // namespace deuler

#endif // DEULER_THERMO_HPP
