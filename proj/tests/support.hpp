#ifndef DEULER_TESTS_SUPPORT_HPP
#define DEULER_TESTS_SUPPORT_HPP

// Reference implementations used only by the tests. They share no code with
// the library beyond the grid transforms and spectral derivatives.

#include "deuler/deuler.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <random>

namespace oracle
{

using Mat2 = std::array<std::array<long double, 2>, 2>;

inline Mat2 mul(const Mat2& x, const Mat2& y)
{
    Mat2 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
    return out;
}

/// exp(M) by scaling and squaring with a 30-term Taylor series in long double.
inline Mat2 expm(const Mat2& m)
{
    long double norm = 0.0L;
    for (const auto& row : m)
        norm = std::max(norm, std::fabs(row[0]) + std::fabs(row[1]));
    int squarings = 0;
    while (norm > 0.25L)
    {
        norm /= 2.0L;
        ++squarings;
    }
    const long double scale = std::ldexp(1.0L, -squarings);
    Mat2              a{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            a[i][j] = m[i][j] * scale;
    Mat2 term{{{1.0L, 0.0L}, {0.0L, 1.0L}}};
    Mat2 sum = term;
    for (int k = 1; k <= 30; ++k)
    {
        term = mul(term, a);
        for (auto& row : term)
            for (auto& v : row)
                v /= k;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                sum[i][j] += term[i][j];
    }
    for (int s = 0; s < squarings; ++s)
        sum = mul(sum, sum);
    return sum;
}

/// exp(t A(xi)) with A = [[0, -kappa2 xi], [kappa2 xi, -a]].
inline deuler::GreenMatrix green(double xi, double t, double a, double kappa2)
{
    const long double kx = static_cast<long double>(kappa2) * xi;
    const Mat2        m{{{0.0L, -kx * t}, {kx * t, -static_cast<long double>(a) * t}}};
    const Mat2        e = expm(m);
    return {static_cast<double>(e[0][0]), static_cast<double>(e[0][1]), static_cast<double>(e[1][0]),
            static_cast<double>(e[1][1])};
}

/// phi_j(tau A) = sum_k (tau A)^k / (k + j)!, series in long double (small tau |A| only).
inline deuler::GreenMatrix phi(int j, double xi, double tau, double a, double kappa2)
{
    const long double kx = static_cast<long double>(kappa2) * xi;
    const Mat2        m{{{0.0L, -kx * tau}, {kx * tau, -static_cast<long double>(a) * tau}}};
    Mat2              power{{{1.0L, 0.0L}, {0.0L, 1.0L}}};
    Mat2              sum{};
    long double       fact = 1.0L;
    for (int k = 1; k <= j; ++k)
        fact *= k;
    for (int k = 0; k < 60; ++k)
    {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                sum[r][c] += power[r][c] / fact;
        power = mul(power, m);
        fact *= (k + j + 1);
    }
    return {static_cast<double>(sum[0][0]), static_cast<double>(sum[0][1]), static_cast<double>(sum[1][0]),
            static_cast<double>(sum[1][1])};
}

inline double rel_diff(const deuler::GreenMatrix& x, const deuler::GreenMatrix& y)
{
    const double scale = std::max(y.frobenius(), 1e-300);
    return (x - y).frobenius() / scale;
}

/// Composite Simpson rule on n (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n)
{
    const double h   = (hi - lo) / n;
    double       sum = f(lo) + f(hi);
    for (int i = 1; i < n; ++i)
        sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return sum * h / 3.0;
}

/// Full right-hand side of the damped system evaluated directly from its definition,
/// with the same 2/3 truncation applied to the nonlinear products.
struct DirectRhs
{
    deuler::GridPtr        grid;
    deuler::PhysicalParams params;
    bool                   nonlinear = true;

    deuler::SpectralState operator()(const deuler::SpectralState& x) const
    {
        using namespace deuler;
        const auto&  g   = *grid;
        const double k1  = params.kappa1();
        const double k2  = params.kappa2();
        const double a   = params.a;
        const double cvr = (params.R + params.cv) / params.cv;

        const RealField p   = g.inverse(x.p);
        const auto      u   = inverse(x.u, g);
        const RealField s   = g.inverse(x.s);
        const auto      gp  = inverse(gradient(x.p, g), g);
        const auto      gs  = inverse(gradient(x.s, g), g);
        const RealField div = g.inverse(divergence(x.u, g));
        std::array<VectorField, 3> gu;
        for (int i = 0; i < 3; ++i)
            gu[i] = inverse(gradient(x.u[i], g), g);

        RealField   F(p.size(), 0.0), ds(p.size(), 0.0);
        VectorField G{F, F, F};
        if (nonlinear)
            for (std::size_t n = 0; n < p.size(); ++n)
            {
                const double udp = u[0][n] * gp[0][n] + u[1][n] * gp[1][n] + u[2][n] * gp[2][n];
                F[n]             = -cvr * k1 * p[n] * div[n] - k1 * udp;
                const double rho = params.k *
                                   std::pow(p[n] + params.p_inf, params.cv / (params.cv + params.R)) *
                                   std::exp(-(s[n] + params.s_inf) / (params.cv + params.R));
                const double rho_inf = params.rho_inf();
                for (int i = 0; i < 3; ++i)
                {
                    const double adv = u[0][n] * gu[i][0][n] + u[1][n] * gu[i][1][n] + u[2][n] * gu[i][2][n];
                    G[i][n]          = -k1 * adv - (1.0 / k1) * (1.0 / rho - 1.0 / rho_inf) * gp[i][n];
                }
                ds[n] = -k1 * (u[0][n] * gs[0][n] + u[1][n] * gs[1][n] + u[2][n] * gs[2][n]);
            }
        SpectralState nl{g.forward(F), forward(G, g), g.forward(ds)};
        nl.for_each_field([&](SpectralField& f) { apply_dealias(f, g); });

        const auto    grad_p = gradient(x.p, g);
        const auto    div_u  = divergence(x.u, g);
        SpectralState out    = nl;
        for (std::size_t n = 0; n < out.p.size(); ++n)
        {
            out.p[n] += -k2 * div_u[n];
            for (int i = 0; i < 3; ++i)
                out.u[i][n] += -k2 * grad_p[i][n] - a * x.u[i][n];
        }
        return out;
    }
};

/// Classical fourth-order Runge-Kutta on the full system with a uniform step.
inline deuler::SpectralState rk4(const DirectRhs& rhs, deuler::SpectralState x, double t_end, long steps)
{
    const double h = t_end / static_cast<double>(steps);
    const auto&  g = *rhs.grid;
    for (long n = 0; n < steps; ++n)
    {
        const auto k1 = rhs(x);
        auto       y  = x;
        y.axpy(0.5 * h, k1);
        const auto k2 = rhs(y);
        y = x;
        y.axpy(0.5 * h, k2);
        const auto k3 = rhs(y);
        y = x;
        y.axpy(h, k3);
        const auto k4 = rhs(y);
        x.axpy(h / 6.0, k1).axpy(h / 3.0, k2).axpy(h / 3.0, k3).axpy(h / 6.0, k4);
    }
    (void)g;
    return x;
}

/// sqrt(sum |x - y|^2) / sqrt(sum |y|^2) over every spectral coefficient.
inline double rel_error(const deuler::SpectralState& x, const deuler::SpectralState& y)
{
    double num = 0.0, den = 0.0;
    auto   acc = [&](const deuler::SpectralField& a, const deuler::SpectralField& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            num += std::norm(a[i] - b[i]);
            den += std::norm(b[i]);
        }
    };
    acc(x.p, y.p);
    for (int c = 0; c < 3; ++c)
        acc(x.u[c], y.u[c]);
    acc(x.s, y.s);
    return std::sqrt(num / den);
}

/// Random mean-zero smooth vector field on a grid.
inline deuler::VectorField random_vector(const deuler::SpectralGrid& g, std::uint64_t seed, double width = 0.5)
{
    std::mt19937_64 rng(seed);
    return {deuler::detail::random_smooth_field(g, width, rng), deuler::detail::random_smooth_field(g, width, rng),
            deuler::detail::random_smooth_field(g, width, rng)};
}

} // namespace oracle

#endif // DEULER_TESTS_SUPPORT_HPP
