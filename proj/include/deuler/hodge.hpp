#ifndef DEULER_HODGE_HPP
#define DEULER_HODGE_HPP

#include "deuler/spectral_ops.hpp"

#include <cmath>

namespace deuler
{

/// Velocity split into v = Lambda^{-1} div u and omega = Lambda^{-1} curl u.
struct HodgeSplit
{
    SpectralField         v_hat;
    AntisymmetricSpectral omega_hat;
    /// Set when the input carried energy in modes where |k| = 0 (the mean, or a
    /// pure-Nyquist mode); that content cannot be represented and was dropped.
    bool mean_dropped = false;
};

inline HodgeSplit hodge_decompose(const SpectralVector& u, const SpectralGrid& grid)
{
    for (auto const& c : u)
        grid.check_spectral(c);
    HodgeSplit out{grid.spectral_zeros(), {grid.spectral_zeros(), grid.spectral_zeros(), grid.spectral_zeros()}};
    double     dropped = 0.0, total = 0.0;
    const Complex I{0.0, 1.0};
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto   k    = grid.kvec(i, j, l);
        const double kmag = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        const double mode_energy = std::norm(u[0][idx]) + std::norm(u[1][idx]) + std::norm(u[2][idx]);
        total += mode_energy;
        if (kmag == 0.0)
        {
            dropped += mode_energy;
            return;
        }
        const Complex* uh[3] = {&u[0][idx], &u[1][idx], &u[2][idx]};
        out.v_hat[idx]       = I * (k[0] * *uh[0] + k[1] * *uh[1] + k[2] * *uh[2]) / kmag;
        out.omega_hat.w01[idx] = I * (k[1] * *uh[0] - k[0] * *uh[1]) / kmag;
        out.omega_hat.w02[idx] = I * (k[2] * *uh[0] - k[0] * *uh[2]) / kmag;
        out.omega_hat.w12[idx] = I * (k[2] * *uh[1] - k[1] * *uh[2]) / kmag;
    });
    out.mean_dropped = std::sqrt(dropped) > 1e-13 * std::sqrt(total) && dropped > 0.0;
    return out;
}

/// u = -Lambda^{-1} grad v - Lambda^{-1} div omega, div acting along the rows of omega.
inline SpectralVector hodge_reconstruct(std::span<const Complex> v_hat, const AntisymmetricSpectral& omega_hat,
                                        const SpectralGrid& grid)
{
    grid.check_spectral(v_hat);
    SpectralVector out{grid.spectral_zeros(), grid.spectral_zeros(), grid.spectral_zeros()};
    const Complex  I{0.0, 1.0};
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto   k    = grid.kvec(i, j, l);
        const double kmag = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        if (kmag == 0.0)
            return;
        for (int row = 0; row < 3; ++row)
        {
            Complex div_row{};
            for (int col = 0; col < 3; ++col)
                div_row += I * k[col] * omega_hat.at(row, col, idx);
            out[row][idx] = -(I * k[row] * v_hat[idx] + div_row) / kmag;
        }
    });
    return out;
}

inline HodgeSplit hodge_decompose(const VectorField& u, const SpectralGrid& grid)
{
    return hodge_decompose(forward(u, grid), grid);
}

/// Squared L^2 norm of the full 3x3 omega field (both triangles counted).
inline double omega_norm_squared(const AntisymmetricSpectral& omega_hat, const SpectralGrid& grid)
{
    return 2.0 * (sobolev_norm_squared(omega_hat.w01, 0, grid) + sobolev_norm_squared(omega_hat.w02, 0, grid) +
                  sobolev_norm_squared(omega_hat.w12, 0, grid));
}

/// Spectral state of the linearised problem: pressure, compressible part v,
/// incompressible part omega and the (passively carried) entropy.
struct FourierState
{
    SpectralField         p_hat;
    SpectralField         v_hat;
    AntisymmetricSpectral omega_hat;
    SpectralField         s_hat;
    GridPtr               grid;

    static FourierState zeros(GridPtr grid)
    {
        const auto z = grid->spectral_zeros();
        return {z, z, {z, z, z}, z, std::move(grid)};
    }
};

} // namespace deuler

#endif // DEULER_HODGE_HPP
