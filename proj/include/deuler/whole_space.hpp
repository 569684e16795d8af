#ifndef DEULER_WHOLE_SPACE_HPP
#define DEULER_WHOLE_SPACE_HPP

#include "deuler/green.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace deuler
{

class QuadratureError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Radially symmetric Fourier-side initial data on R^3.
/// `transverse0` is |u_hat_T|, the magnitude of the divergence-free part of u_hat.
struct RadialProfile
{
    std::function<double(double)> p0          = [](double) { return 0.0; };
    std::function<double(double)> v0          = [](double) { return 0.0; };
    std::function<double(double)> transverse0 = [](double) { return 0.0; };
    double                        r_cut       = 10.0;  ///< integrand negligible beyond this |xi|

    /// p_hat = Ap e^{-(w r)^2}; v_hat and |u_hat_T| = A (w r) e^{-(w r)^2}, the spectra of
    /// a Gaussian pressure bump and of Gaussian-gradient velocities.
    static RadialProfile gaussian(double amp_p, double amp_v = 0.0, double amp_t = 0.0, double width = 1.0)
    {
        RadialProfile out;
        out.p0          = [=](double r) { return amp_p * std::exp(-width * width * r * r); };
        out.v0          = [=](double r) { return amp_v * width * r * std::exp(-width * width * r * r); };
        out.transverse0 = [=](double r) { return amp_t * width * r * std::exp(-width * width * r * r); };
        // e^{-2 (w r)^2} < 1e-70 beyond 9/w, far below any polynomial weight we apply
        out.r_cut = 9.0 / width;
        return out;
    }
};

enum class WholeSpaceComponent
{
    pressure,      ///< p
    compressible,  ///< v = Lambda^{-1} div u
    omega,         ///< omega = Lambda^{-1} curl u, all nine entries
    velocity,      ///< u (|u|^2 = |v|^2 + |u_T|^2)
    dt_pressure,   ///< -kappa2 div u
    dt_velocity,   ///< -kappa2 grad p - a u
    dt_total       ///< (dt p, dt u, dt s) with dt s = 0 in the linear problem
};

/// |component|^2 at wavenumber r and time t (Fourier side, before radial weights).
inline double whole_space_density(const RadialProfile& profile, double r, double t, WholeSpaceComponent component,
                                  const LinearCoefficients& c)
{
    const GreenMatrix g     = green_hat(r, t, c);
    const double      p0    = profile.p0(r);
    const double      v0    = profile.v0(r);
    const double      p     = g.g11 * p0 + g.g12 * v0;
    const double      v     = g.g21 * p0 + g.g22 * v0;
    const double      decay = std::exp(-c.a * t);
    const double      tr    = profile.transverse0(r) * decay;
    switch (component)
    {
    case WholeSpaceComponent::pressure: return p * p;
    case WholeSpaceComponent::compressible: return v * v;
    case WholeSpaceComponent::omega: return 2.0 * tr * tr;
    case WholeSpaceComponent::velocity: return v * v + tr * tr;
    case WholeSpaceComponent::dt_pressure:
    {
        const double dp = -c.kappa2 * r * v;
        return dp * dp;
    }
    case WholeSpaceComponent::dt_velocity:
    case WholeSpaceComponent::dt_total:
    {
        const double dv  = c.kappa2 * r * p - c.a * v;
        const double dtr = -c.a * tr;
        double       out = dv * dv + dtr * dtr;
        if (component == WholeSpaceComponent::dt_total)
            out += (c.kappa2 * r * v) * (c.kappa2 * r * v);
        return out;
    }
    }
    return 0.0;
}

/// Radial average over the unit sphere of sum_{lo <= |alpha| <= hi} xi^{2 alpha}.
inline double averaged_sobolev_weight(double r, int lo, int hi)
{
    auto dfact = [](int n) {
        double f = 1.0;
        for (int m = n; m > 1; m -= 2)
            f *= m;
        return f;
    };
    double w = 0.0;
    for (int a0 = 0; a0 <= hi; ++a0)
        for (int a1 = 0; a0 + a1 <= hi; ++a1)
            for (int a2 = 0; a0 + a1 + a2 <= hi; ++a2)
            {
                const int order = a0 + a1 + a2;
                if (order < lo)
                    continue;
                w += std::pow(r, 2 * order) * dfact(2 * a0 - 1) * dfact(2 * a1 - 1) * dfact(2 * a2 - 1) /
                     dfact(2 * order + 1);
            }
    return w;
}

struct QuadratureResult
{
    double      integral       = 0.0;  ///< int_{R^3} weight(|xi|) f(|xi|) d xi
    double      error_estimate = 0.0;  ///< absolute, summed over sub-intervals
    double      l1             = 0.0;  ///< integral of |integrand|
    std::size_t intervals      = 0;

    [[nodiscard]] double norm() const { return std::sqrt(std::max(0.0, integral)); }
    [[nodiscard]] double relative_error() const
    {
        return integral == 0.0 ? error_estimate : error_estimate / std::abs(integral);
    }
};

inline constexpr double whole_space_rel_tol = 1e-8;

/// Integrates 4 pi r^2 f(r) over [0, r_cut] with adaptive 15-point Gauss-Kronrod.
/// The range is pre-split at multiples of the diffusive scale sqrt(a / (kappa2^2 (1+t)))
/// and at the critical wavenumber so each piece is smooth and well scaled.
/// With `relative_to_l1` the tolerance is measured against the integral of |f|, which is the
/// meaningful scale for sign-changing integrands such as cross terms.
inline QuadratureResult radial_integral(const std::function<double(double)>& f, double r_cut, double t,
                                        const LinearCoefficients& c, double rel_tol = whole_space_rel_tol,
                                        bool relative_to_l1 = false)
{
    using boost::math::quadrature::gauss_kronrod;
    std::vector<double> cuts{0.0, r_cut};
    const double        diffusive = std::sqrt(c.a / (c.kappa2 * c.kappa2 * (1.0 + t)));
    for (double m : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0})
        cuts.push_back(m * diffusive);
    cuts.push_back(c.critical_wavenumber());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double x) { return x < 0.0 || x > r_cut; }), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Globally adaptive: always bisect the piece with the largest error estimate. A per-piece
    // relative criterion never terminates on tail pieces whose integral is at rounding level.
    struct Piece
    {
        double a, b, value, err, l1;
        bool   operator<(const Piece& o) const { return err < o.err; }
    };
    auto integrand = [&](double r) { return 4.0 * std::numbers::pi * r * r * f(r); };
    auto eval      = [&](double a, double b) {
        Piece p{a, b, 0.0, 0.0, 0.0};
        p.value = gauss_kronrod<double, 15>::integrate(integrand, a, b, 0, 0.0, &p.err, &p.l1);
        return p;
    };
    std::priority_queue<Piece> heap;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        heap.push(eval(cuts[i], cuts[i + 1]));

    constexpr std::size_t max_pieces = 4000;
    QuadratureResult      out;
    auto                  totals = [&] {
        std::priority_queue<Piece> copy = heap;
        out.integral = out.error_estimate = out.l1 = 0.0;
        while (!copy.empty())
        {
            out.integral += copy.top().value;
            out.error_estimate += copy.top().err;
            out.l1 += copy.top().l1;
            copy.pop();
        }
        out.intervals = heap.size();
    };
    totals();
    auto scale_of = [&] { return relative_to_l1 ? out.l1 : std::abs(out.integral); };
    while (heap.size() < max_pieces && out.error_estimate > 0.01 * rel_tol * scale_of())
    {
        const Piece worst = heap.top();
        heap.pop();
        const double mid   = 0.5 * (worst.a + worst.b);
        const Piece  left  = eval(worst.a, mid);
        const Piece  right = eval(mid, worst.b);
        heap.push(left);
        heap.push(right);
        out.integral += left.value + right.value - worst.value;
        out.error_estimate += left.err + right.err - worst.err;
        out.l1 += left.l1 + right.l1 - worst.l1;
        out.intervals = heap.size();
        // running sums drift; refresh them now and then
        if (heap.size() % 256 == 0)
            totals();
    }
    totals();
    const double scale = scale_of();
    if (!std::isfinite(out.integral) || (scale > 0.0 && out.error_estimate > rel_tol * scale))
    {
        std::ostringstream msg;
        msg << "radial quadrature did not converge: integral=" << out.integral
            << " error_estimate=" << out.error_estimate << " t=" << t << " pieces=" << out.intervals;
        throw QuadratureError(msg.str());
    }
    return out;
}

/// sqrt( int_{R^3} |xi|^{2 kk} |component(xi, t)|^2 d xi ) for radial initial data.
inline QuadratureResult whole_space_norm(const RadialProfile& profile, double t, int kk,
                                         WholeSpaceComponent component, const LinearCoefficients& c)
{
    if (kk < 0 || kk > 3)
        throw DomainError("whole_space_norm: derivative order must be in [0, 3]");
    if (!(t >= 0.0))
        throw DomainError("whole_space_norm: t must be non-negative");
    auto f = [&](double r) { return std::pow(r, 2 * kk) * whole_space_density(profile, r, t, component, c); };
    return radial_integral(f, profile.r_cut, t, c);
}

inline QuadratureResult whole_space_norm(const RadialProfile& profile, double t, int kk,
                                         WholeSpaceComponent component, const PhysicalParams& params)
{
    return whole_space_norm(profile, t, kk, component, LinearCoefficients(params));
}

} // namespace deuler

#endif // DEULER_WHOLE_SPACE_HPP
