#ifndef DEULER_GREEN_HPP
#define DEULER_GREEN_HPP

#include "deuler/params.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace deuler
{

/// Real 2x2 matrix acting on (p_hat, v_hat) of one Fourier mode.
struct GreenMatrix
{
    double g11 = 1.0, g12 = 0.0, g21 = 0.0, g22 = 1.0;

    static GreenMatrix identity() { return {}; }

    [[nodiscard]] double determinant() const { return g11 * g22 - g12 * g21; }

    /// Spectral (operator 2-) norm.
    [[nodiscard]] double norm() const
    {
        const double fro2 = g11 * g11 + g12 * g12 + g21 * g21 + g22 * g22;
        const double det  = determinant();
        const double disc = std::max(0.0, fro2 * fro2 - 4.0 * det * det);
        return std::sqrt(0.5 * (fro2 + std::sqrt(disc)));
    }

    [[nodiscard]] double frobenius() const { return std::sqrt(g11 * g11 + g12 * g12 + g21 * g21 + g22 * g22); }

    template < typename T >
    [[nodiscard]] std::array<T, 2> apply(const T& p, const T& v) const
    {
        return {g11 * p + g12 * v, g21 * p + g22 * v};
    }

    friend GreenMatrix operator*(const GreenMatrix& x, const GreenMatrix& y)
    {
        return {x.g11 * y.g11 + x.g12 * y.g21, x.g11 * y.g12 + x.g12 * y.g22, x.g21 * y.g11 + x.g22 * y.g21,
                x.g21 * y.g12 + x.g22 * y.g22};
    }
    friend GreenMatrix operator-(const GreenMatrix& x, const GreenMatrix& y)
    {
        return {x.g11 - y.g11, x.g12 - y.g12, x.g21 - y.g21, x.g22 - y.g22};
    }
};

enum class DampingRegime
{
    overdamped,
    critical,
    underdamped
};

/// Roots of lambda^2 + a lambda + kappa2^2 |xi|^2.
struct EigenPair
{
    std::complex<double> lambda_plus;
    std::complex<double> lambda_minus;
    DampingRegime        regime;
};

/// Relative width of the discriminant band classified as critical.
inline constexpr double critical_tolerance = 1e-10;

/// Switch to the Taylor form of the divided difference when |lambda+ - lambda-| t is below this.
inline constexpr double series_switch = 1e-6;

namespace detail
{
/// (a/2)^2 - kappa2^2 |xi|^2, factored to stay accurate near the double root.
inline double half_discriminant(double xi, const LinearCoefficients& c)
{
    const double half_a = 0.5 * c.a;
    const double kx     = c.kappa2 * xi;
    return (half_a - kx) * (half_a + kx);
}
} // namespace detail

inline EigenPair eigenvalues(double xi_mag, const LinearCoefficients& c)
{
    if (!(xi_mag >= 0.0))
        throw DomainError("eigenvalues: |xi| must be non-negative");
    const double h2     = detail::half_discriminant(xi_mag, c);
    const double half_a = 0.5 * c.a;
    const double scale  = half_a * half_a;
    DampingRegime regime = std::abs(h2) <= critical_tolerance * scale
                               ? DampingRegime::critical
                               : (h2 > 0.0 ? DampingRegime::overdamped : DampingRegime::underdamped);
    if (h2 >= 0.0)
    {
        const double s      = std::sqrt(h2);
        const double lplus  = -half_a - s;
        // Vieta keeps the small root accurate when |xi| -> 0
        const double kx     = c.kappa2 * xi_mag;
        const double lminus = kx * kx / lplus;
        return {lplus, lminus, regime};
    }
    const double b = std::sqrt(-h2);
    return {{-half_a, -b}, {-half_a, b}, regime};
}

inline EigenPair eigenvalues(double xi_mag, const PhysicalParams& params)
{
    return eigenvalues(xi_mag, LinearCoefficients(params));
}

/// Exact mode propagator exp(t A(xi)), A = [[0, -kappa2 |xi|], [kappa2 |xi|, -a]].
///
/// With phi = (e^{lambda+ t} - e^{lambda- t}) / (lambda+ - lambda-):
///   g11 = (lambda+ e^{lambda- t} - lambda- e^{lambda+ t}) / (lambda+ - lambda-),
///   g12 = -kappa2 |xi| phi, g21 = -g12, g22 = g11 - a phi.
/// Each regime uses a cancellation-free form; all arithmetic is real.
inline GreenMatrix green_hat(double xi_mag, double t, const LinearCoefficients& c)
{
    if (!(t >= 0.0))
        throw DomainError("green_hat: t must be non-negative");
    if (!(xi_mag >= 0.0))
        throw DomainError("green_hat: |xi| must be non-negative");
    const double mu = -0.5 * c.a;
    const double h2 = detail::half_discriminant(xi_mag, c);
    double       phi = 0.0, g11 = 1.0;

    if (2.0 * std::sqrt(std::abs(h2)) * t < series_switch)
    {
        // expansion in (h t)^2 about the mean eigenvalue, h = (lambda+ - lambda-)/2
        const double x      = h2 * t * t;
        const double sinhc  = 1.0 + x / 6.0 + x * x / 120.0 + x * x * x / 5040.0;
        const double coshx  = 1.0 + x / 2.0 + x * x / 24.0 + x * x * x / 720.0;
        const double em     = std::exp(mu * t);
        phi                 = em * t * sinhc;
        g11                 = em * (coshx - mu * t * sinhc);
    }
    else if (h2 > 0.0)
    {
        const double s       = std::sqrt(h2);
        const double lplus   = mu - s;
        const double kx      = c.kappa2 * xi_mag;
        const double lminus  = kx * kx / lplus;
        const double delta   = -2.0 * s;
        const double e_minus = std::exp(lminus * t);
        phi                  = e_minus * std::expm1(delta * t) / delta;
        g11                  = e_minus - lminus * phi;
    }
    else
    {
        const double b  = std::sqrt(-h2);
        const double em = std::exp(mu * t);
        const double sn = std::sin(b * t) / b;
        phi             = em * sn;
        g11             = em * (std::cos(b * t) - mu * sn);
    }
    const double off = c.kappa2 * xi_mag * phi;
    return {g11, -off, off, g11 - c.a * phi};
}

inline GreenMatrix green_hat(double xi_mag, double t, const PhysicalParams& params)
{
    return green_hat(xi_mag, t, LinearCoefficients(params));
}

/// Which diffusive rate the low-frequency surrogate uses.
enum class DiffusionVariant
{
    exact,          ///< kappa2^2 |xi|^2 / a, the leading term of -lambda_-
    squared_damping ///< kappa2^2 |xi|^2 / a^2
};

/// Low-frequency surrogate of green_hat: diffusive heat-kernel factor plus e^{-a t} corrections.
inline GreenMatrix low_freq_approx(double xi_mag, double t, const LinearCoefficients& c,
                                   DiffusionVariant variant = DiffusionVariant::exact)
{
    const double a      = c.a;
    const double kx2    = c.kappa2 * c.kappa2 * xi_mag * xi_mag;
    const double rate   = variant == DiffusionVariant::exact ? kx2 / a : kx2 / (a * a);
    const double heat   = std::exp(-rate * t);
    const double damp   = std::exp(-a * t);
    const double g11    = heat - (kx2 / (a * a * a)) * damp;
    const double phi    = (heat - damp) / a;
    const double g22    = (1.0 - kx2 / (a * a * a)) * damp;
    const double off    = c.kappa2 * xi_mag * phi;
    return {g11, -off, off, g22};
}

struct HighFrequencyBound
{
    double C_emp          = 0.0;  ///< max over samples of |||G||| e^{R0 t}
    double R0_emp         = 0.0;  ///< uniform exponential rate used for C_emp
    double min_decay_rate = 0.0;  ///< min over sampled |xi| of -max Re lambda
    bool   violation      = false; ///< true when no positive uniform rate exists on the sample
    std::size_t n_samples = 0;
};

/// Empirical constants for |||G(xi, t)||| <= C exp(-R0 t) on |xi| >= eta.
/// Samples below eta are ignored.
inline HighFrequencyBound high_freq_bound(double eta, const LinearCoefficients& c, std::span<const double> xi_samples,
                                          std::span<const double> t_samples)
{
    if (!(eta > 0.0))
        throw DomainError("high_freq_bound: eta must be positive");
    std::vector<double> xs;
    for (double x : xi_samples)
        if (x >= eta)
            xs.push_back(x);
    if (xs.empty() || t_samples.empty())
        throw DomainError("high_freq_bound: empty sample set");

    HighFrequencyBound out;
    out.min_decay_rate = std::numeric_limits<double>::infinity();
    for (double x : xs)
    {
        const auto ev   = eigenvalues(x, c);
        const double re = std::max(ev.lambda_plus.real(), ev.lambda_minus.real());
        out.min_decay_rate = std::min(out.min_decay_rate, -re);
    }
    out.R0_emp    = (1.0 - 1e-3) * out.min_decay_rate;
    out.violation = !(out.min_decay_rate > 64.0 * std::numeric_limits<double>::epsilon() * c.a);
    if (out.violation)
        out.R0_emp = 0.0;
    for (double x : xs)
        for (double t : t_samples)
            out.C_emp = std::max(out.C_emp, green_hat(x, t, c).norm() * std::exp(out.R0_emp * t));
    out.n_samples = xs.size() * t_samples.size();
    return out;
}

} // namespace deuler

#endif // DEULER_GREEN_HPP
