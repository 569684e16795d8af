#ifndef DEULER_STATE_HPP
#define DEULER_STATE_HPP

#include "deuler/hodge.hpp"
#include "deuler/params.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace deuler
{

/// Raised when p + p_inf stops being strictly positive (blow-up or data too large).
class PositivityError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Perturbation fields (p, u, s) of the reformulated system on a periodic grid.
/// u is the scaled velocity; the physical velocity is kappa1 * u.
struct StateField
{
    RealField   p;
    VectorField u;
    RealField   s;
    GridPtr     grid;

    static StateField zeros(GridPtr grid)
    {
        auto z = grid->zeros();
        return {z, {z, z, z}, z, std::move(grid)};
    }

    void check_shape() const
    {
        if (!grid)
            throw ShapeError("state has no grid");
        grid->check_real(p);
        grid->check_real(s);
        for (auto const& c : u)
            grid->check_real(c);
    }

    [[nodiscard]] double min_total_pressure(const PhysicalParams& params) const
    {
        double m = std::numeric_limits<double>::infinity();
        for (double v : p)
            m = std::min(m, v + params.p_inf);
        return m;
    }

    [[nodiscard]] bool all_finite() const
    {
        auto finite = [](const RealField& f) {
            return std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); });
        };
        return finite(p) && finite(s) && finite(u[0]) && finite(u[1]) && finite(u[2]);
    }
};

/// Original variables (p + p_inf, kappa1 u, s + s_inf).
struct PhysicalFields
{
    RealField   p;
    VectorField u;
    RealField   s;
};

inline PhysicalFields to_physical(const StateField& state, const PhysicalParams& params)
{
    state.check_shape();
    PhysicalFields out{state.p, state.u, state.s};
    const double   k1 = params.kappa1();
    for (auto& v : out.p)
        v += params.p_inf;
    for (auto& c : out.u)
        for (auto& v : c)
            v *= k1;
    for (auto& v : out.s)
        v += params.s_inf;
    return out;
}

inline StateField from_physical(const PhysicalFields& fields, GridPtr grid, const PhysicalParams& params)
{
    StateField out{fields.p, fields.u, fields.s, std::move(grid)};
    out.check_shape();
    const double k1 = params.kappa1();
    for (auto& v : out.p)
        v -= params.p_inf;
    for (auto& c : out.u)
        for (auto& v : c)
            v /= k1;
    for (auto& v : out.s)
        v -= params.s_inf;
    return out;
}

/// Spectral (p, v, omega, s) view of a state. The velocity mean is not
/// representable and raises `mean_dropped` on the returned split.
inline FourierState to_fourier(const StateField& state, bool* mean_dropped = nullptr)
{
    state.check_shape();
    const auto& g     = *state.grid;
    auto        split = hodge_decompose(state.u, g);
    if (mean_dropped != nullptr)
        *mean_dropped = split.mean_dropped;
    return {g.forward(state.p), std::move(split.v_hat), std::move(split.omega_hat), g.forward(state.s), state.grid};
}

inline StateField from_fourier(const FourierState& fs)
{
    const auto& g = *fs.grid;
    return {g.inverse(fs.p_hat), inverse(hodge_reconstruct(fs.v_hat, fs.omega_hat, g), g), g.inverse(fs.s_hat),
            fs.grid};
}

} // namespace deuler

#endif // DEULER_STATE_HPP
