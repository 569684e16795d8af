#ifndef DEULER_NONLINEAR_TERMS_HPP
#define DEULER_NONLINEAR_TERMS_HPP

#include "deuler/state.hpp"
#include "deuler/thermo.hpp"

#include <string>

namespace deuler
{

/// Point values and first derivatives needed by F, G and the entropy transport.
struct FieldJet
{
    RealField                  p;
    VectorField                u;
    RealField                  s;
    VectorField                grad_p;
    std::array<VectorField, 3> grad_u;  ///< grad_u[i][j] = d_j u^i
    VectorField                grad_s;
};

/// Builds the jet from spectra with exact spectral derivatives.
inline FieldJet make_jet(const SpectralField& p_hat, const SpectralVector& u_hat, const SpectralField& s_hat,
                         const SpectralGrid& grid)
{
    FieldJet jet;
    jet.p      = grid.inverse(p_hat);
    jet.u      = inverse(u_hat, grid);
    jet.s      = grid.inverse(s_hat);
    jet.grad_p = inverse(gradient(p_hat, grid), grid);
    jet.grad_s = inverse(gradient(s_hat, grid), grid);
    for (int i = 0; i < 3; ++i)
        jet.grad_u[i] = inverse(gradient(u_hat[i], grid), grid);
    return jet;
}

inline FieldJet make_jet(const StateField& state)
{
    state.check_shape();
    const auto& g = *state.grid;
    return make_jet(g.forward(state.p), forward(state.u, g), g.forward(state.s), g);
}

/// F, G and the entropy right-hand side of the reformulated system.
struct NonlinearTerms
{
    RealField   F;
    VectorField G;
    RealField   ds;
};

/// F = -((R+cv) kappa1 / cv) p div u - kappa1 u . grad p, pointwise.
inline RealField compute_F(const FieldJet& jet, const PhysicalParams& params)
{
    const double k1   = params.kappa1();
    const double coef = (params.R + params.cv) * k1 / params.cv;
    RealField    out(jet.p.size());
    for (std::size_t n = 0; n < out.size(); ++n)
    {
        const double div_u = jet.grad_u[0][0][n] + jet.grad_u[1][1][n] + jet.grad_u[2][2][n];
        const double adv   = jet.u[0][n] * jet.grad_p[0][n] + jet.u[1][n] * jet.grad_p[1][n] +
                           jet.u[2][n] * jet.grad_p[2][n];
        out[n] = -coef * jet.p[n] * div_u - k1 * adv;
    }
    return out;
}

/// G = -kappa1 (u . grad) u - (1/kappa1)(1/rho - 1/rho_inf) grad p, with rho from the exact EOS.
inline VectorField compute_G(const FieldJet& jet, const PhysicalParams& params)
{
    const double k1      = params.kappa1();
    const double inv_rho_inf = 1.0 / params.rho_inf();
    const std::size_t size = jet.p.size();
    VectorField out{RealField(size), RealField(size), RealField(size)};
    for (std::size_t n = 0; n < size; ++n)
    {
        const double p_total = jet.p[n] + params.p_inf;
        if (!(p_total > 0.0))
            throw PositivityError("total pressure p + p_inf = " + std::to_string(p_total) + " is not positive");
        const double rho      = eos_density(p_total, jet.s[n] + params.s_inf, params);
        const double pressure_coef = (1.0 / rho - inv_rho_inf) / k1;
        for (int i = 0; i < 3; ++i)
        {
            const double adv = jet.u[0][n] * jet.grad_u[i][0][n] + jet.u[1][n] * jet.grad_u[i][1][n] +
                               jet.u[2][n] * jet.grad_u[i][2][n];
            out[i][n] = -k1 * adv - pressure_coef * jet.grad_p[i][n];
        }
    }
    return out;
}

/// -kappa1 u . grad s.
inline RealField compute_entropy_rhs(const FieldJet& jet, const PhysicalParams& params)
{
    const double k1 = params.kappa1();
    RealField    out(jet.s.size());
    for (std::size_t n = 0; n < out.size(); ++n)
        out[n] = -k1 * (jet.u[0][n] * jet.grad_s[0][n] + jet.u[1][n] * jet.grad_s[1][n] +
                        jet.u[2][n] * jet.grad_s[2][n]);
    return out;
}

inline RealField   compute_F(const StateField& state, const PhysicalParams& params) { return compute_F(make_jet(state), params); }
inline VectorField compute_G(const StateField& state, const PhysicalParams& params) { return compute_G(make_jet(state), params); }

inline NonlinearTerms rhs_nonlinear(const FieldJet& jet, const PhysicalParams& params)
{
    return {compute_F(jet, params), compute_G(jet, params), compute_entropy_rhs(jet, params)};
}

/// Everything in the reformulated system except the linear part
/// (-kappa2 div u, -kappa2 grad p - a u, 0).
inline NonlinearTerms rhs_nonlinear(const StateField& state, const PhysicalParams& params)
{
    return rhs_nonlinear(make_jet(state), params);
}

} // namespace deuler

#endif // DEULER_NONLINEAR_TERMS_HPP
