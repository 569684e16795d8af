#ifndef DEULER_DIAGNOSTICS_HPP
#define DEULER_DIAGNOSTICS_HPP

#include "deuler/nonlinear_terms.hpp"
#include "deuler/whole_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace deuler
{

/// Weights of the explicit energy surrogates E_low and E_high.
inline constexpr double energy_weight_low  = 10.0;
inline constexpr double energy_weight_high = 10.0;

/// One time sample of norms, energy surrogates and cross terms.
struct DiagnosticsRecord
{
    double t           = 0.0;
    double l2_p        = 0.0;
    double l2_u        = 0.0;
    double l2_s        = 0.0;
    double h3_p        = 0.0;
    double h3_u        = 0.0;
    double h3_s        = 0.0;
    double h2_grad_p   = 0.0;
    double l2_dt       = 0.0;
    double min_total_p = 0.0;
    double cross_low   = 0.0;  ///< <grad p, u>
    double cross_high  = 0.0;  ///< sum_{1<=|alpha|<=2} <d^alpha grad p, d^alpha u>
    double h3fun       = 0.0;  ///< ||grad p||_2^2 + ||u||_3^2
    double m_of_t      = 0.0;  ///< running sup of (1+t)^{5/2} h3fun

    // not part of series.csv
    double max_abs_s   = 0.0;
    double energy_low  = 0.0;  ///< D1 ||(p,u)||^2 + <grad p, u>
    double energy_high = 0.0;  ///< D2 sum_{1<=|alpha|<=3} ||d^alpha (p,u)||^2 + cross_high
    bool   valid       = true; ///< false when p + p_inf <= 0 somewhere
};

/// CSV columns of series.csv, in file order.
struct SeriesColumn
{
    std::string_view name;
    double DiagnosticsRecord::*member;
};

inline constexpr SeriesColumn series_columns[] = {
    {"t", &DiagnosticsRecord::t},
    {"l2_p", &DiagnosticsRecord::l2_p},
    {"l2_u", &DiagnosticsRecord::l2_u},
    {"l2_s", &DiagnosticsRecord::l2_s},
    {"h3_p", &DiagnosticsRecord::h3_p},
    {"h3_u", &DiagnosticsRecord::h3_u},
    {"h3_s", &DiagnosticsRecord::h3_s},
    {"h2_grad_p", &DiagnosticsRecord::h2_grad_p},
    {"l2_dt", &DiagnosticsRecord::l2_dt},
    {"min_total_p", &DiagnosticsRecord::min_total_p},
    {"cross_low", &DiagnosticsRecord::cross_low},
    {"cross_high", &DiagnosticsRecord::cross_high},
    {"h3fun", &DiagnosticsRecord::h3fun},
    {"m_of_t", &DiagnosticsRecord::m_of_t},
};

inline std::optional<double DiagnosticsRecord::*> series_member(std::string_view name)
{
    for (auto const& col : series_columns)
        if (col.name == name)
            return col.member;
    return std::nullopt;
}

inline double running_sup(double previous, double t, double h3fun)
{
    return std::max(previous, std::pow(1.0 + t, 2.5) * h3fun);
}

/// Diagnostics of a box state. `previous_m` carries the running sup forward.
inline DiagnosticsRecord record(const StateField& state, double t, const PhysicalParams& params,
                                double previous_m = 0.0)
{
    state.check_shape();
    const auto&  g  = *state.grid;
    const auto   ph = g.forward(state.p);
    const auto   uh = forward(state.u, g);
    const auto   sh = g.forward(state.s);
    const double k2 = params.kappa2();

    DiagnosticsRecord rec;
    rec.t = t;
    double l2p = 0, l2u = 0, l2s = 0, h3p = 0, h3u = 0, h3s = 0, grad_p = 0, high_pu = 0, cross_lo = 0,
           cross_hi = 0;
    g.for_each_mode([&](std::size_t idx, int i, int j, int l) {
        const auto   k     = g.kvec(i, j, l);
        const double w     = g.mode_weight(l);
        const double kk    = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const double w2    = sobolev_weight(k, 2);
        const double w3    = sobolev_weight(k, 3);
        const double band12 = w2 - 1.0;
        const double band13 = w3 - 1.0;
        const double pp    = std::norm(ph[idx]);
        const double uu    = std::norm(uh[0][idx]) + std::norm(uh[1][idx]) + std::norm(uh[2][idx]);
        const double ss    = std::norm(sh[idx]);
        l2p += w * pp;
        l2u += w * uu;
        l2s += w * ss;
        h3p += w * w3 * pp;
        h3u += w * w3 * uu;
        h3s += w * w3 * ss;
        grad_p += w * kk * w2 * pp;
        high_pu += w * band13 * (pp + uu);
        // <i k p, u> per mode
        const Complex kdotu = k[0] * uh[0][idx] + k[1] * uh[1][idx] + k[2] * uh[2][idx];
        const double  c     = (std::conj(Complex(0.0, 1.0) * ph[idx]) * kdotu).real();
        cross_lo += w * c;
        cross_hi += w * band12 * c;
    });
    const double V = g.volume();
    rec.l2_p       = std::sqrt(V * l2p);
    rec.l2_u       = std::sqrt(V * l2u);
    rec.l2_s       = std::sqrt(V * l2s);
    rec.h3_p       = std::sqrt(V * h3p);
    rec.h3_u       = std::sqrt(V * h3u);
    rec.h3_s       = std::sqrt(V * h3s);
    rec.h2_grad_p  = std::sqrt(V * grad_p);
    rec.cross_low  = V * cross_lo;
    rec.cross_high = V * cross_hi;
    rec.h3fun      = rec.h2_grad_p * rec.h2_grad_p + rec.h3_u * rec.h3_u;
    rec.m_of_t     = running_sup(previous_m, t, rec.h3fun);
    rec.min_total_p = state.min_total_pressure(params);
    rec.valid       = rec.min_total_p > 0.0;
    rec.energy_low  = energy_weight_low * (rec.l2_p * rec.l2_p + rec.l2_u * rec.l2_u) + rec.cross_low;
    rec.energy_high = energy_weight_high * V * high_pu + rec.cross_high;
    for (double v : state.s)
        rec.max_abs_s = std::max(rec.max_abs_s, std::abs(v));

    if (!rec.valid)
    {
        rec.l2_dt = std::numeric_limits<double>::quiet_NaN();
        return rec;
    }
    // time derivative from the full right-hand side
    const auto   jet = make_jet(ph, uh, sh, g);
    const auto   nl  = rhs_nonlinear(jet, params);
    const double a   = params.a;
    double       dt_sq = 0.0;
    {
        RealField dp(g.real_size());
        for (std::size_t n = 0; n < dp.size(); ++n)
        {
            const double div_u = jet.grad_u[0][0][n] + jet.grad_u[1][1][n] + jet.grad_u[2][2][n];
            dp[n]              = -k2 * div_u + nl.F[n];
        }
        const double np = norm(dp, NormKind::L2, g);
        dt_sq += np * np;
        for (int i = 0; i < 3; ++i)
        {
            RealField du(g.real_size());
            for (std::size_t n = 0; n < du.size(); ++n)
                du[n] = -k2 * jet.grad_p[i][n] - a * jet.u[i][n] + nl.G[i][n];
            const double nu = norm(du, NormKind::L2, g);
            dt_sq += nu * nu;
        }
        const double ns = norm(nl.ds, NormKind::L2, g);
        dt_sq += ns * ns;
    }
    rec.l2_dt = std::sqrt(dt_sq);
    return rec;
}

/// ||(p, u)||_{L^1} + ||(p, u)||_{H^3}, the data size entering the decay constants.
inline double data_size_k0(const StateField& state)
{
    const auto&  g  = *state.grid;
    const double l1 = norm(state.p, NormKind::L1, g) + norm(state.u, NormKind::L1, g);
    const double hp = norm(state.p, NormKind::H, g, 3);
    const double hu = norm(state.u, NormKind::H, g, 3);
    return l1 + std::sqrt(hp * hp + hu * hu);
}

/// Fourier-side norms of the linear whole-space solution at one time.
struct WholeSpaceSample
{
    double t = 0.0;
    double p = 0.0, v = 0.0, u = 0.0, omega = 0.0;
    double grad1_p = 0.0, grad2_p = 0.0, grad3_p = 0.0;  ///< || |xi|^k p_hat ||
    double grad1_v = 0.0, grad2_v = 0.0;
    double grad1_u = 0.0, grad2_u = 0.0;
    double dt_p = 0.0, dt_u = 0.0, dt_total = 0.0;
    double max_rel_quadrature_error = 0.0;
};

inline constexpr std::string_view whole_space_columns[] = {
    "t", "p", "v", "u", "omega", "grad1_p", "grad2_p", "grad3_p", "grad1_v", "grad2_v", "grad1_u", "grad2_u",
    "dt_p", "dt_u", "dt_total"};

inline std::vector<double> whole_space_row(const WholeSpaceSample& s)
{
    return {s.t,       s.p,       s.v,       s.u,       s.omega, s.grad1_p, s.grad2_p, s.grad3_p,
            s.grad1_v, s.grad2_v, s.grad1_u, s.grad2_u, s.dt_p,  s.dt_u,    s.dt_total};
}

inline WholeSpaceSample whole_space_sample(const RadialProfile& profile, double t, const LinearCoefficients& c)
{
    WholeSpaceSample s;
    s.t      = t;
    double worst = 0.0;
    auto   eval = [&](int kk, WholeSpaceComponent comp) {
        const auto q = whole_space_norm(profile, t, kk, comp, c);
        worst        = std::max(worst, q.relative_error());
        return q.norm();
    };
    using C    = WholeSpaceComponent;
    s.p        = eval(0, C::pressure);
    s.v        = eval(0, C::compressible);
    s.u        = eval(0, C::velocity);
    s.omega    = eval(0, C::omega);
    s.grad1_p  = eval(1, C::pressure);
    s.grad2_p  = eval(2, C::pressure);
    s.grad3_p  = eval(3, C::pressure);
    s.grad1_v  = eval(1, C::compressible);
    s.grad2_v  = eval(2, C::compressible);
    s.grad1_u  = eval(1, C::velocity);
    s.grad2_u  = eval(2, C::velocity);
    s.dt_p     = eval(0, C::dt_pressure);
    s.dt_u     = eval(0, C::dt_velocity);
    s.dt_total = eval(0, C::dt_total);
    s.max_rel_quadrature_error = worst;
    return s;
}

/// DiagnosticsRecord of the linear whole-space solution, every field from radial quadrature.
/// Sobolev sums use the sphere average of the multi-index weights; the entropy is
/// frozen at zero; min_total_p is the lower bound p_inf - (2 pi)^{-3} ||p_hat||_{L^1}.
inline DiagnosticsRecord whole_space_record(const RadialProfile& profile, double t, const PhysicalParams& params,
                                            double previous_m = 0.0)
{
    const LinearCoefficients c(params);
    auto pv = [&](double r) {
        const GreenMatrix g = green_hat(r, t, c);
        return g.apply(profile.p0(r), profile.v0(r));
    };
    const double decay = std::exp(-c.a * t);
    auto u_sq = [&](double r) {
        const auto   x  = pv(r);
        const double tr = profile.transverse0(r) * decay;
        return x[1] * x[1] + tr * tr;
    };
    auto integrate = [&](auto&& f) { return radial_integral(f, profile.r_cut, t, c).integral; };
    auto integrate_signed = [&](auto&& f) {
        return radial_integral(f, profile.r_cut, t, c, whole_space_rel_tol, true).integral;
    };

    DiagnosticsRecord rec;
    rec.t    = t;
    rec.l2_p = std::sqrt(integrate([&](double r) { const auto x = pv(r); return x[0] * x[0]; }));
    rec.l2_u = std::sqrt(integrate(u_sq));
    rec.h3_p = std::sqrt(integrate([&](double r) {
        const auto x = pv(r);
        return averaged_sobolev_weight(r, 0, 3) * x[0] * x[0];
    }));
    rec.h3_u      = std::sqrt(integrate([&](double r) { return averaged_sobolev_weight(r, 0, 3) * u_sq(r); }));
    rec.h2_grad_p = std::sqrt(integrate([&](double r) {
        const auto x = pv(r);
        return r * r * averaged_sobolev_weight(r, 0, 2) * x[0] * x[0];
    }));
    rec.l2_dt     = whole_space_norm(profile, t, 0, WholeSpaceComponent::dt_total, c).norm();
    rec.cross_low = integrate_signed([&](double r) { const auto x = pv(r); return -r * x[0] * x[1]; });
    rec.cross_high = integrate_signed([&](double r) {
        const auto x = pv(r);
        return -r * averaged_sobolev_weight(r, 1, 2) * x[0] * x[1];
    });
    const double p_l1 = integrate_signed([&](double r) { return std::abs(pv(r)[0]); });
    rec.min_total_p   = params.p_inf - p_l1 / std::pow(2.0 * std::numbers::pi, 3);
    rec.valid         = rec.min_total_p > 0.0;
    rec.h3fun         = rec.h2_grad_p * rec.h2_grad_p + rec.h3_u * rec.h3_u;
    rec.m_of_t        = running_sup(previous_m, t, rec.h3fun);
    rec.energy_low    = energy_weight_low * (rec.l2_p * rec.l2_p + rec.l2_u * rec.l2_u) + rec.cross_low;
    return rec;
}

} // namespace deuler

#endif // DEULER_DIAGNOSTICS_HPP
