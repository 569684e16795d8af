#ifndef DEULER_PROPAGATE_HPP
#define DEULER_PROPAGATE_HPP

#include "deuler/green.hpp"
#include "deuler/hodge.hpp"

#include <cmath>
#include <vector>

namespace deuler
{

/// green_hat tabulated on every |k|^2 = (2 pi / L)^2 n that the grid can produce.
inline std::vector<GreenMatrix> green_table(const SpectralGrid& grid, double t, const LinearCoefficients& c)
{
    std::vector<GreenMatrix> table(static_cast<std::size_t>(grid.max_kindex()) + 1);
    const double             k0 = grid.fundamental();
    for (std::size_t n = 0; n < table.size(); ++n)
        table[n] = green_hat(k0 * std::sqrt(static_cast<double>(n)), t, c);
    return table;
}

/// Exact solution of the linearised system after time t:
/// (p, v) per mode through green_hat, omega decays as e^{-a t}, s is frozen.
inline FourierState propagate_linear(const FourierState& fs, double t, const PhysicalParams& params)
{
    if (!(t >= 0.0))
        throw DomainError("propagate_linear: t must be non-negative");
    const auto& grid = *fs.grid;
    grid.check_spectral(fs.p_hat);
    grid.check_spectral(fs.v_hat);
    const LinearCoefficients c(params);
    const auto               table = green_table(grid, t, c);
    const double             decay = std::exp(-params.a * t);

    FourierState out = fs;
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto& g       = table[static_cast<std::size_t>(grid.kindex(i, j, l))];
        const auto  pv      = g.apply(fs.p_hat[idx], fs.v_hat[idx]);
        out.p_hat[idx]      = pv[0];
        out.v_hat[idx]      = pv[1];
        out.omega_hat.w01[idx] *= decay;
        out.omega_hat.w02[idx] *= decay;
        out.omega_hat.w12[idx] *= decay;
    });
    return out;
}

} // namespace deuler

#endif // DEULER_PROPAGATE_HPP
