#ifndef DEULER_DECAY_FIT_HPP
#define DEULER_DECAY_FIT_HPP

#include "deuler/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace deuler
{

class FitError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double reference_exponent_p = -0.75;
inline constexpr double reference_exponent_u = -1.25;

/// Least-squares slope of log(value) against log(1 + t).
struct DecayFit
{
    std::string quantity;
    double      t_lo      = 0.0;
    double      t_hi      = 0.0;
    double      exponent  = 0.0;
    double      intercept = 0.0;
    double      r_squared = 0.0;
    int         n_points  = 0;
};

inline DecayFit fit_power_law(std::span<const double> t, std::span<const double> values, double t_lo, double t_hi,
                              const std::string& quantity = "")
{
    if (t.size() != values.size())
        throw FitError("fit: time and value columns differ in length");
    if (!(t_lo < t_hi))
        throw FitError("fit: window must satisfy t_lo < t_hi");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        if (t[i] < t_lo || t[i] > t_hi)
            continue;
        if (!(values[i] > 0.0) || !std::isfinite(values[i]))
            throw FitError("fit: " + (quantity.empty() ? std::string("value") : quantity) + " = " +
                           std::to_string(values[i]) + " at t = " + std::to_string(t[i]) +
                           " is not positive; shrink the window");
        xs.push_back(std::log1p(t[i]));
        ys.push_back(std::log(values[i]));
    }
    if (xs.size() < 5)
        throw FitError("fit: need at least 5 points in [" + std::to_string(t_lo) + ", " + std::to_string(t_hi) +
                       "], found " + std::to_string(xs.size()));

    const double n  = static_cast<double>(xs.size());
    double       mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0)
        throw FitError("fit: all window times coincide");

    DecayFit fit;
    fit.quantity  = quantity;
    fit.t_lo      = t_lo;
    fit.t_hi      = t_hi;
    fit.n_points  = static_cast<int>(xs.size());
    fit.exponent  = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    // a constant series is fitted exactly by slope 0
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return fit;
}

inline DecayFit fit_decay(std::span<const DiagnosticsRecord> series, const std::string& quantity, double t_lo,
                          double t_hi)
{
    const auto member = series_member(quantity);
    if (!member)
        throw FitError("fit: unknown quantity '" + quantity + "'");
    std::vector<double> t, v;
    t.reserve(series.size());
    v.reserve(series.size());
    for (const auto& r : series)
    {
        t.push_back(r.t);
        v.push_back(r.*(*member));
    }
    return fit_power_law(t, v, t_lo, t_hi, quantity);
}

} // namespace deuler

#endif // DEULER_DECAY_FIT_HPP
