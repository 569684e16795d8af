#ifndef DEULER_CHECKS_HPP
#define DEULER_CHECKS_HPP

#include "deuler/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace deuler
{

/// Trapezoid rule of values over the recorded times.
inline double trapezoid(std::span<const double> t, std::span<const double> values)
{
    double sum = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
        sum += 0.5 * (t[i] - t[i - 1]) * (values[i] + values[i - 1]);
    return sum;
}

/// Cumulative trapezoid, out[0] = 0.
inline std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> values)
{
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (values[i] + values[i - 1]);
    return out;
}

struct AprioriReport
{
    double sup_term       = 0.0;  ///< sup_t ||(p,u)||_3^2
    double integral_term  = 0.0;  ///< int (||grad p||_2^2 + ||u||_3^2) dt
    double lhs            = 0.0;
    double initial_norm_sq = 0.0;
    double sup_ratio      = 0.0;  ///< sup_term / initial_norm_sq
    double c_emp          = 0.0;  ///< lhs / initial_norm_sq
    bool   passed         = false;
};

inline AprioriReport apriori_check(std::span<const DiagnosticsRecord> series, const DiagnosticsRecord& initial)
{
    AprioriReport rep;
    std::vector<double> t, integrand;
    for (const auto& r : series)
    {
        rep.sup_term = std::max(rep.sup_term, r.h3_p * r.h3_p + r.h3_u * r.h3_u);
        t.push_back(r.t);
        integrand.push_back(r.h2_grad_p * r.h2_grad_p + r.h3_u * r.h3_u);
    }
    rep.integral_term   = trapezoid(t, integrand);
    rep.lhs             = rep.sup_term + rep.integral_term;
    rep.initial_norm_sq = initial.h3_p * initial.h3_p + initial.h3_u * initial.h3_u;
    if (rep.initial_norm_sq == 0.0)
    {
        rep.c_emp     = rep.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        rep.sup_ratio = rep.sup_term == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    else
    {
        rep.c_emp     = rep.lhs / rep.initial_norm_sq;
        rep.sup_ratio = rep.sup_term / rep.initial_norm_sq;
    }
    rep.passed = std::isfinite(rep.c_emp) && !series.empty();
    return rep;
}

inline AprioriReport apriori_check(std::span<const DiagnosticsRecord> series)
{
    return series.empty() ? AprioriReport{} : apriori_check(series, series.front());
}

inline constexpr double max_principle_tolerance = 1e-3;

struct EntropyReport
{
    double h3_s0            = 0.0;
    double c_fit            = 0.0;  ///< smallest c with h3_s(t) <= h3_s0 exp(c int_0^t ||u||_3)
    double worst_bound_ratio = 0.0; ///< max_t h3_s(t) / bound(t)
    double max_abs_s0       = 0.0;
    double max_abs_s        = 0.0;
    bool   gronwall_ok      = false;
    bool   max_principle_ok = false;
    bool   passed           = false;
};

/// Needs max_abs_s on every record for the maximum principle.
inline EntropyReport entropy_bound_check(std::span<const DiagnosticsRecord> series, double tol = 1e-9)
{
    EntropyReport rep;
    if (series.empty())
        return rep;
    std::vector<double> t, hu;
    for (const auto& r : series)
    {
        t.push_back(r.t);
        hu.push_back(r.h3_u);
    }
    const auto integral = cumulative_trapezoid(t, hu);
    rep.h3_s0           = series.front().h3_s;
    rep.max_abs_s0      = series.front().max_abs_s;

    if (rep.h3_s0 == 0.0)
    {
        // zero entropy stays zero under transport
        double worst = 0.0;
        for (const auto& r : series)
            worst = std::max(worst, r.h3_s);
        rep.gronwall_ok       = worst <= 1e-12;
        rep.worst_bound_ratio = worst;
    }
    else
    {
        for (std::size_t i = 1; i < series.size(); ++i)
        {
            const double growth = std::log(series[i].h3_s / rep.h3_s0);
            if (growth <= 0.0)
                continue;
            rep.c_fit = integral[i] > 0.0 ? std::max(rep.c_fit, growth / integral[i])
                                          : std::numeric_limits<double>::infinity();
        }
        for (std::size_t i = 0; i < series.size(); ++i)
        {
            const double bound = rep.h3_s0 * std::exp(rep.c_fit * integral[i]);
            rep.worst_bound_ratio = std::max(rep.worst_bound_ratio, series[i].h3_s / bound);
        }
        rep.gronwall_ok = std::isfinite(rep.c_fit) && rep.worst_bound_ratio <= 1.0 + tol;
    }

    for (const auto& r : series)
        rep.max_abs_s = std::max(rep.max_abs_s, r.max_abs_s);
    rep.max_principle_ok = rep.max_abs_s <= rep.max_abs_s0 + max_principle_tolerance;
    rep.passed           = rep.gronwall_ok && rep.max_principle_ok;
    return rep;
}

inline constexpr std::array<double, 4> sobolev_q_values{2.0, 3.0, 4.0, 6.0};

/// Empirical ratios LHS / RHS (without the unknown constant) of
///   ||f||_inf <= C ||grad f||^{1/2} ||grad f||_1^{1/2},
///   ||f||_6   <= C ||grad f||,
///   ||f||_q   <= C ||f||_1,  q in {2, 3, 4, 6}.
struct SobolevRatios
{
    double                linf = 0.0;
    double                l6   = 0.0;
    std::array<double, 4> lq{};
};

/// The field's mean is removed first; a constant field has no ratio.
inline SobolevRatios sobolev_ratios(std::span<const double> field, const SpectralGrid& grid)
{
    grid.check_real(field);
    double mean = 0.0;
    for (double v : field)
        mean += v;
    mean /= static_cast<double>(field.size());
    RealField f(field.begin(), field.end());
    for (auto& v : f)
        v -= mean;

    const auto   grad    = gradient(f, grid);
    const double grad_l2 = norm(grad, NormKind::L2, grid);
    const double grad_h1 = norm(grad, NormKind::H, grid, 1);
    const double f_h1    = norm(f, NormKind::H, grid, 1);
    if (!(grad_l2 > 0.0))
        throw DomainError("sobolev_ratios: field is constant");

    SobolevRatios out;
    out.linf = norm(f, NormKind::Linf, grid) / std::sqrt(grad_l2 * grad_h1);
    out.l6   = lq_norm(f, 6.0, grid) / grad_l2;
    for (std::size_t i = 0; i < sobolev_q_values.size(); ++i)
        out.lq[i] = lq_norm(f, sobolev_q_values[i], grid) / f_h1;
    return out;
}

struct SobolevReport
{
    std::vector<SobolevRatios> samples;
    SobolevRatios              max;
};

inline SobolevReport sobolev_ratio_report(std::span<const RealField> fields, const SpectralGrid& grid)
{
    SobolevReport rep;
    for (const auto& f : fields)
    {
        const auto r = sobolev_ratios(f, grid);
        rep.max.linf = std::max(rep.max.linf, r.linf);
        rep.max.l6   = std::max(rep.max.l6, r.l6);
        for (std::size_t i = 0; i < r.lq.size(); ++i)
            rep.max.lq[i] = std::max(rep.max.lq[i], r.lq[i]);
        rep.samples.push_back(r);
    }
    return rep;
}

} // namespace deuler

#endif // DEULER_CHECKS_HPP
