#ifndef DEULER_SPECTRAL_OPS_HPP
#define DEULER_SPECTRAL_OPS_HPP

#include "deuler/grid.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace deuler
{

/// Antisymmetric 3x3 matrix field stored by its upper triangle.
/// at(i, j) materialises omega_i^j, with omega_j^i = -omega_i^j and a zero diagonal.
struct AntisymmetricSpectral
{
    SpectralField w01, w02, w12;

    [[nodiscard]] Complex at(int i, int j, std::size_t mode) const
    {
        if (i == j)
            return {};
        const double sign = i < j ? 1.0 : -1.0;
        const int    lo = std::min(i, j), hi = std::max(i, j);
        const SpectralField& f = (lo == 0 && hi == 1) ? w01 : (lo == 0 ? w02 : w12);
        return sign * f[mode];
    }
    [[nodiscard]] SpectralField& upper(int i, int j)
    {
        return (i == 0 && j == 1) ? w01 : (i == 0 ? w02 : w12);
    }
};

// -- Fourier multipliers -----------------------------------------------------

/// Lambda^r: multiplies each mode by |k|^r; the k = 0 mode is always mapped to 0.
inline SpectralField lambda_power(std::span<const Complex> field, double r, const SpectralGrid& grid)
{
    grid.check_spectral(field);
    SpectralField out(field.size());
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto   k  = grid.kvec(i, j, l);
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        out[idx]        = k2 == 0.0 ? Complex{} : field[idx] * std::pow(k2, 0.5 * r);
    });
    return out;
}

/// d/dx_axis in spectral space.
inline SpectralField partial(std::span<const Complex> field, int axis, const SpectralGrid& grid)
{
    grid.check_spectral(field);
    SpectralField out(field.size());
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        out[idx] = Complex(0.0, grid.kvec(i, j, l)[axis]) * field[idx];
    });
    return out;
}

/// d^alpha for a multi-index alpha.
inline SpectralField partial(std::span<const Complex> field, const std::array<int, 3>& alpha,
                             const SpectralGrid& grid)
{
    grid.check_spectral(field);
    SpectralField out(field.size());
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto k = grid.kvec(i, j, l);
        Complex    m{1.0, 0.0};
        for (int d = 0; d < 3; ++d)
            for (int p = 0; p < alpha[d]; ++p)
                m *= Complex(0.0, k[d]);
        out[idx] = m * field[idx];
    });
    return out;
}

inline SpectralVector gradient(std::span<const Complex> field, const SpectralGrid& grid)
{
    return {partial(field, 0, grid), partial(field, 1, grid), partial(field, 2, grid)};
}

inline SpectralField divergence(const SpectralVector& u, const SpectralGrid& grid)
{
    SpectralField out = grid.spectral_zeros();
    for (auto const& c : u)
        grid.check_spectral(c);
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto k = grid.kvec(i, j, l);
        out[idx]     = Complex(0.0, 1.0) * (k[0] * u[0][idx] + k[1] * u[1][idx] + k[2] * u[2][idx]);
    });
    return out;
}

inline SpectralField laplacian(std::span<const Complex> field, const SpectralGrid& grid)
{
    grid.check_spectral(field);
    SpectralField out(field.size());
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto k = grid.kvec(i, j, l);
        out[idx]     = -(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * field[idx];
    });
    return out;
}

/// Matrix curl, (curl z)_i^j = d_j z^i - d_i z^j.
inline AntisymmetricSpectral curl_matrix(const SpectralVector& z, const SpectralGrid& grid)
{
    AntisymmetricSpectral out{grid.spectral_zeros(), grid.spectral_zeros(), grid.spectral_zeros()};
    for (auto const& c : z)
        grid.check_spectral(c);
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto    k = grid.kvec(i, j, l);
        const Complex I{0.0, 1.0};
        out.w01[idx] = I * (k[1] * z[0][idx] - k[0] * z[1][idx]);
        out.w02[idx] = I * (k[2] * z[0][idx] - k[0] * z[2][idx]);
        out.w12[idx] = I * (k[2] * z[1][idx] - k[1] * z[2][idx]);
    });
    return out;
}

/// Classical vector curl, nabla x z.
inline SpectralVector curl(const SpectralVector& z, const SpectralGrid& grid)
{
    SpectralVector out{grid.spectral_zeros(), grid.spectral_zeros(), grid.spectral_zeros()};
    for (auto const& c : z)
        grid.check_spectral(c);
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto    k = grid.kvec(i, j, l);
        const Complex I{0.0, 1.0};
        out[0][idx] = I * (k[1] * z[2][idx] - k[2] * z[1][idx]);
        out[1][idx] = I * (k[2] * z[0][idx] - k[0] * z[2][idx]);
        out[2][idx] = I * (k[0] * z[1][idx] - k[1] * z[0][idx]);
    });
    return out;
}

/// True when the mode survives the 2/3 rule (|m| < N/3 on every axis).
inline bool dealias_keep(const SpectralGrid& grid, int i, int j, int l)
{
    const int n = grid.n();
    auto      ok = [&](int idx) { return 3 * std::abs(grid.signed_index(idx)) < n; };
    return ok(i) && ok(j) && ok(l);
}

inline void apply_dealias(SpectralField& field, const SpectralGrid& grid)
{
    grid.check_spectral(field);
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        if (!dealias_keep(grid, i, j, l))
            field[idx] = Complex{};
    });
}

// -- physical-space helpers ----------------------------------------------------

inline SpectralVector forward(const VectorField& u, const SpectralGrid& grid)
{
    return {grid.forward(u[0]), grid.forward(u[1]), grid.forward(u[2])};
}

inline VectorField inverse(const SpectralVector& u, const SpectralGrid& grid)
{
    return {grid.inverse(u[0]), grid.inverse(u[1]), grid.inverse(u[2])};
}

/// Spectral gradient of a physical field.
inline VectorField gradient(const RealField& f, const SpectralGrid& grid)
{
    return inverse(gradient(grid.forward(f), grid), grid);
}

inline RealField divergence(const VectorField& u, const SpectralGrid& grid)
{
    return grid.inverse(divergence(forward(u, grid), grid));
}

// -- norms -------------------------------------------------------------------

enum class NormKind
{
    L1,
    L2,
    Linf,
    H
};

/// Sum over multi-indices |alpha| <= order of k^{2 alpha}; each alpha counted once.
inline double sobolev_weight(const std::array<double, 3>& k, int order)
{
    if (order < 0 || order > 3)
        throw DomainError("Sobolev order must be in [0, 3], got " + std::to_string(order));
    const double k2[3] = {k[0] * k[0], k[1] * k[1], k[2] * k[2]};
    double       w     = 0.0;
    for (int a0 = 0; a0 <= order; ++a0)
        for (int a1 = 0; a0 + a1 <= order; ++a1)
            for (int a2 = 0; a0 + a1 + a2 <= order; ++a2)
                w += std::pow(k2[0], a0) * std::pow(k2[1], a1) * std::pow(k2[2], a2);
    return w;
}

/// Sum over multi-indices with lo <= |alpha| <= hi of k^{2 alpha}.
inline double sobolev_weight_band(const std::array<double, 3>& k, int lo, int hi)
{
    return sobolev_weight(k, hi) - (lo > 0 ? sobolev_weight(k, lo - 1) : 0.0);
}

/// Squared H^order norm from the spectrum (Parseval with the 1/N^3 forward scaling).
inline double sobolev_norm_squared(std::span<const Complex> spectrum, int order, const SpectralGrid& grid)
{
    grid.check_spectral(spectrum);
    double sum = 0.0;
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        sum += grid.mode_weight(l) * sobolev_weight(grid.kvec(i, j, l), order) * std::norm(spectrum[idx]);
    });
    return grid.volume() * sum;
}

inline double lq_norm(std::span<const double> field, double q, const SpectralGrid& grid)
{
    grid.check_real(field);
    if (!(q >= 1.0))
        throw DomainError("L^q norm needs q >= 1");
    double sum = 0.0;
    for (double v : field)
        sum += std::pow(std::abs(v), q);
    return std::pow(sum * grid.cell_volume(), 1.0 / q);
}

/// Norm of a scalar field. L1 and Linf use grid sums, L2 and H^k use Parseval.
inline double norm(std::span<const double> field, NormKind kind, const SpectralGrid& grid, int order = 0)
{
    grid.check_real(field);
    switch (kind)
    {
    case NormKind::L1:
    {
        double sum = 0.0;
        for (double v : field)
            sum += std::abs(v);
        return sum * grid.cell_volume();
    }
    case NormKind::Linf:
    {
        double m = 0.0;
        for (double v : field)
            m = std::max(m, std::abs(v));
        return m;
    }
    case NormKind::L2:
        return std::sqrt(sobolev_norm_squared(grid.forward(field), 0, grid));
    case NormKind::H:
        return std::sqrt(sobolev_norm_squared(grid.forward(field), order, grid));
    }
    throw DomainError("unsupported norm kind");
}

/// Norm of a vector field; L1 and Linf use the pointwise Euclidean magnitude.
inline double norm(const VectorField& u, NormKind kind, const SpectralGrid& grid, int order = 0)
{
    if (kind == NormKind::L2 || kind == NormKind::H)
    {
        double sq = 0.0;
        for (auto const& c : u)
        {
            const double n = norm(c, kind, grid, order);
            sq += n * n;
        }
        return std::sqrt(sq);
    }
    for (auto const& c : u)
        grid.check_real(c);
    RealField mag(grid.real_size());
    for (std::size_t i = 0; i < mag.size(); ++i)
        mag[i] = std::sqrt(u[0][i] * u[0][i] + u[1][i] * u[1][i] + u[2][i] * u[2][i]);
    return norm(mag, kind, grid);
}

/// L^2 inner product <f, g> computed from spectra.
inline double inner_product(std::span<const Complex> f, std::span<const Complex> g, const SpectralGrid& grid)
{
    grid.check_spectral(f);
    grid.check_spectral(g);
    double sum = 0.0;
    grid.for_each_mode([&](std::size_t idx, int, int, int l) {
        sum += grid.mode_weight(l) * (std::conj(f[idx]) * g[idx]).real();
    });
    return grid.volume() * sum;
}

} // namespace deuler

#endif // DEULER_SPECTRAL_OPS_HPP
