#ifndef DEULER_INITIAL_DATA_HPP
#define DEULER_INITIAL_DATA_HPP

#include "deuler/spectral_ops.hpp"
#include "deuler/state.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace deuler
{

enum class InitialKind
{
    gaussian_bump,
    random_smooth,
    single_mode
};

inline InitialKind parse_initial_kind(const std::string& name)
{
    if (name == "gaussian_bump")
        return InitialKind::gaussian_bump;
    if (name == "random_smooth")
        return InitialKind::random_smooth;
    if (name == "single_mode")
        return InitialKind::single_mode;
    throw DomainError("unknown initial data kind '" + name + "'");
}

inline std::string to_string(InitialKind kind)
{
    switch (kind)
    {
    case InitialKind::gaussian_bump: return "gaussian_bump";
    case InitialKind::random_smooth: return "random_smooth";
    case InitialKind::single_mode: return "single_mode";
    }
    return "unknown";
}

namespace detail
{

inline RealField centered_gaussian(const SpectralGrid& grid, double width)
{
    RealField    g(grid.real_size());
    const int    n  = grid.n();
    const double L  = grid.length();
    auto         d2 = [&](int i) {
        // minimum-image offset from the box centre
        double x = grid.coordinate(i) - 0.5 * L;
        x -= L * std::round(x / L);
        return x * x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                g[grid.real_index(i, j, l)] = std::exp(-(d2(i) + d2(j) + d2(l)) / (2.0 * width * width));
    return g;
}

/// Band-limited random field: Gaussian coefficients on |m_i| < N/3 with an
/// exp(-(|k| width)^2 / 2) envelope, zero mean, scaled to max |f| = 1.
inline RealField random_smooth_field(const SpectralGrid& grid, double width, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    SpectralField                    spec = grid.spectral_zeros();
    grid.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const double re = normal(rng);
        const double im = normal(rng);
        if (!dealias_keep(grid, i, j, l) || (i == 0 && j == 0 && l == 0))
            return;
        const auto   k    = grid.kvec(i, j, l);
        const double kmag = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        spec[idx]         = Complex(re, im) * std::exp(-0.5 * kmag * kmag * width * width);
    });
    // round trip through physical space enforces Hermitian symmetry
    RealField f = grid.inverse(spec);
    spec        = grid.forward(f);
    spec[0]     = Complex{};
    f           = grid.inverse(spec);
    double peak = 0.0;
    for (double v : f)
        peak = std::max(peak, std::abs(v));
    if (peak > 0.0)
        for (auto& v : f)
            v /= peak;
    return f;
}

} // namespace detail

/// Initial perturbations for box runs. The velocity is always mean-zero.
///
/// gaussian_bump: p = s = A g, u = A w (grad g + (d2 g, -d1 g, 0)) with g a unit
/// Gaussian of standard width w at the box centre, so u has both a compressible
/// and an incompressible part.
/// random_smooth: independent band-limited random fields, each with max |f| = A.
/// single_mode: p = A sin(k x1), u = (A cos(k x1), 0, 0), s = A cos(k x1), k = 2 pi / L.
inline StateField make_initial(InitialKind kind, double amplitude, double width, std::uint64_t seed, GridPtr grid,
                               const PhysicalParams& params)
{
    (void)params;
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw DomainError("make_initial: amplitude must be non-negative");
    const auto& g = *grid;
    if (kind != InitialKind::single_mode && !(width > 0.0 && width < g.length() / 8.0))
        throw DomainError("make_initial: width must lie in (0, L/8) = (0, " + std::to_string(g.length() / 8.0) +
                          "), got " + std::to_string(width));
    StateField state = StateField::zeros(grid);
    if (amplitude == 0.0)
        return state;

    switch (kind)
    {
    case InitialKind::gaussian_bump:
    {
        const RealField bump = detail::centered_gaussian(g, width);
        const auto      grad = gradient(g.forward(bump), g);
        const auto      dg   = inverse(grad, g);
        for (std::size_t n = 0; n < bump.size(); ++n)
        {
            state.p[n]    = amplitude * bump[n];
            state.s[n]    = amplitude * bump[n];
            state.u[0][n] = amplitude * width * (dg[0][n] + dg[1][n]);
            state.u[1][n] = amplitude * width * (dg[1][n] - dg[0][n]);
            state.u[2][n] = amplitude * width * dg[2][n];
        }
        break;
    }
    case InitialKind::random_smooth:
    {
        std::mt19937_64 rng(seed);
        state.p = detail::random_smooth_field(g, width, rng);
        for (auto& c : state.u)
            c = detail::random_smooth_field(g, width, rng);
        state.s = detail::random_smooth_field(g, width, rng);
        for (auto* f : {&state.p, &state.u[0], &state.u[1], &state.u[2], &state.s})
            for (auto& v : *f)
                v *= amplitude;
        break;
    }
    case InitialKind::single_mode:
    {
        const double k = g.fundamental();
        const int    n = g.n();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l)
                {
                    const auto   idx = g.real_index(i, j, l);
                    const double x   = g.coordinate(i);
                    state.p[idx]     = amplitude * std::sin(k * x);
                    state.u[0][idx]  = amplitude * std::cos(k * x);
                    state.s[idx]     = amplitude * std::cos(k * x);
                }
        break;
    }
    }
    return state;
}

} // namespace deuler

#endif // DEULER_INITIAL_DATA_HPP
