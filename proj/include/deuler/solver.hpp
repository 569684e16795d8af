#ifndef DEULER_SOLVER_HPP
#define DEULER_SOLVER_HPP

#include "deuler/diagnostics.hpp"
#include "deuler/nonlinear_terms.hpp"
#include "deuler/phi_functions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace deuler
{

class NonFiniteError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Scheme
{
    etd2,          ///< second-order exponential Runge-Kutta (Cox-Matthews ETD2RK)
    etd_rk4,       ///< fourth-order exponential Runge-Kutta (Cox-Matthews ETDRK4)
    strang_split   ///< exact linear half steps around a classical RK4 nonlinear step
};

inline Scheme parse_scheme(const std::string& name)
{
    if (name == "etd2")
        return Scheme::etd2;
    if (name == "etd_rk4")
        return Scheme::etd_rk4;
    if (name == "strang_split")
        return Scheme::strang_split;
    throw DomainError("unknown scheme '" + name + "'");
}

inline std::string to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::etd2: return "etd2";
    case Scheme::etd_rk4: return "etd_rk4";
    case Scheme::strang_split: return "strang_split";
    }
    return "unknown";
}

struct SolverConfig
{
    double dt           = 0.05;
    double t_end        = 1.0;
    Scheme scheme       = Scheme::etd_rk4;
    bool   dealias      = true;
    double cfl_safety   = 0.5;
    int    output_every = 1;
    /// ||(p, u, s)||_3 above which the run is flagged as outside the small-data regime
    double smallness_threshold = 0.1;
    /// false drops F, G and the entropy transport; the run is then the linear semigroup
    bool nonlinear = true;

    void validate() const
    {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw DomainError("time.dt must be positive");
        if (!(t_end >= 0.0) || !std::isfinite(t_end))
            throw DomainError("time.t_end must be non-negative");
        if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
            throw DomainError("solver.cfl_safety must lie in (0, 1]");
        if (output_every < 1)
            throw DomainError("time.output_every must be at least 1");
    }
};

enum class RunStatus
{
    completed,
    positivity_violation,
    nan_detected
};

inline std::string to_string(RunStatus s)
{
    switch (s)
    {
    case RunStatus::completed: return "completed";
    case RunStatus::positivity_violation: return "positivity_violation";
    case RunStatus::nan_detected: return "nan_detected";
    }
    return "unknown";
}

struct RunResult
{
    StateField                     final_state;
    std::vector<DiagnosticsRecord> series;
    RunStatus                      status = RunStatus::completed;
    std::vector<std::string>       warnings;
    double                         final_time = 0.0;
    long                           steps      = 0;
};

/// Spectral (p_hat, u_hat, s_hat) in Cartesian velocity components.
struct SpectralState
{
    SpectralField  p;
    SpectralVector u;
    SpectralField  s;

    static SpectralState zeros(const SpectralGrid& g)
    {
        auto z = g.spectral_zeros();
        return {z, {z, z, z}, z};
    }
    static SpectralState from(const StateField& st)
    {
        const auto& g = *st.grid;
        return {g.forward(st.p), forward(st.u, g), g.forward(st.s)};
    }
    [[nodiscard]] StateField to_state(GridPtr grid) const
    {
        const auto& g = *grid;
        return {g.inverse(p), inverse(u, g), g.inverse(s), std::move(grid)};
    }

    template < typename Fn >
    void for_each_field(Fn&& fn)
    {
        fn(p);
        fn(u[0]);
        fn(u[1]);
        fn(u[2]);
        fn(s);
    }

    /// this += alpha * x
    SpectralState& axpy(double alpha, const SpectralState& x)
    {
        auto add = [alpha](SpectralField& y, const SpectralField& xf) {
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] += alpha * xf[i];
        };
        add(p, x.p);
        for (int c = 0; c < 3; ++c)
            add(u[c], x.u[c]);
        add(s, x.s);
        return *this;
    }

    [[nodiscard]] bool all_finite() const
    {
        auto finite = [](const SpectralField& f) {
            return std::all_of(f.begin(), f.end(),
                               [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
        };
        return finite(p) && finite(u[0]) && finite(u[1]) && finite(u[2]) && finite(s);
    }
};

/// sum of coefficient * state; null entries are skipped.
inline SpectralState linear_combination(const SpectralGrid& g,
                                        std::initializer_list<std::pair<double, const SpectralState*>> terms)
{
    SpectralState out = SpectralState::zeros(g);
    for (auto [coef, x] : terms)
        if (x != nullptr && coef != 0.0)
            out.axpy(coef, *x);
    return out;
}

/// cfl_safety * dx / (kappa2 + kappa1 max |u|).
inline double cfl_limit(const StateField& state, const PhysicalParams& params, double cfl_safety)
{
    state.check_shape();
    double umax = 0.0;
    for (std::size_t n = 0; n < state.p.size(); ++n)
        umax = std::max(umax, std::sqrt(state.u[0][n] * state.u[0][n] + state.u[1][n] * state.u[1][n] +
                                        state.u[2][n] * state.u[2][n]));
    return cfl_safety * state.grid->dx() / (params.kappa2() + params.kappa1() * umax);
}

inline double cfl_limit(const StateField& state, const PhysicalParams& params, const SolverConfig& config)
{
    return cfl_limit(state, params, config.cfl_safety);
}

/// Exponential integrators for u' = L u + N(u) where L is the exact linear
/// operator (advanced through green_hat and its phi-functions) and N collects
/// F, G and the entropy transport.
class ExponentialStepper
{
public:
    ExponentialStepper(GridPtr grid, PhysicalParams params, Scheme scheme, bool dealias, bool nonlinear = true)
        : grid_(std::move(grid)), params_(params), coeffs_(params), scheme_(scheme), dealias_(dealias),
          nonlinear_(nonlinear)
    {
    }

    [[nodiscard]] const SpectralGrid& grid() const { return *grid_; }

    /// Dealiased nonlinear right-hand side in spectral space.
    [[nodiscard]] SpectralState nonlinear_rhs(const SpectralState& x) const
    {
        const auto& g = *grid_;
        if (!nonlinear_)
            return SpectralState::zeros(g);
        const auto    jet = make_jet(x.p, x.u, x.s, g);
        const auto    nl  = rhs_nonlinear(jet, params_);
        SpectralState out{g.forward(nl.F), forward(nl.G, g), g.forward(nl.ds)};
        if (dealias_)
            out.for_each_field([&](SpectralField& f) { apply_dealias(f, g); });
        return out;
    }

    /// sum_j phi_j(tau L) ys[j], one pass over the modes.
    [[nodiscard]] SpectralState apply_phi(const PhiTable& table, std::array<const SpectralState*, 4> ys) const
    {
        const auto&   g   = *grid_;
        SpectralState out = SpectralState::zeros(g);
        const Complex I{0.0, 1.0};
        g.for_each_mode([&](std::size_t idx, int i, int j, int l) {
            const auto   k    = g.kvec(i, j, l);
            const double kmag = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
            const auto&  row  = table.longitudinal[static_cast<std::size_t>(g.kindex(i, j, l))];
            Complex      p{}, v{}, s{};
            Complex      ut[3]{};
            const double nhat[3] = {kmag > 0 ? k[0] / kmag : 0.0, kmag > 0 ? k[1] / kmag : 0.0,
                                    kmag > 0 ? k[2] / kmag : 0.0};
            for (int m = 0; m < PhiTable::order; ++m)
            {
                const SpectralState* y = ys[m];
                if (y == nullptr)
                    continue;
                const Complex yu[3] = {y->u[0][idx], y->u[1][idx], y->u[2][idx]};
                s += table.entropy[m] * y->s[idx];
                if (kmag == 0.0)
                {
                    // A(0) = diag(0, -a): pressure mean is phi_m(0), velocity mean decays like -a
                    p += row[m].g11 * y->p[idx];
                    for (int c = 0; c < 3; ++c)
                        ut[c] += table.transverse[m] * yu[c];
                    continue;
                }
                const Complex ndotu = nhat[0] * yu[0] + nhat[1] * yu[1] + nhat[2] * yu[2];
                const Complex yv    = I * ndotu;
                const auto    pv    = row[m].apply(y->p[idx], yv);
                p += pv[0];
                v += pv[1];
                for (int c = 0; c < 3; ++c)
                    ut[c] += table.transverse[m] * (yu[c] - nhat[c] * ndotu);
            }
            out.p[idx] = p;
            out.s[idx] = s;
            for (int c = 0; c < 3; ++c)
                out.u[c][idx] = -I * nhat[c] * v + ut[c];
        });
        return out;
    }

    /// Advances x by h. Throws PositivityError or NonFiniteError on failure.
    [[nodiscard]] SpectralState step(const SpectralState& x, double h)
    {
        const auto& g = *grid_;
        SpectralState out;
        switch (scheme_)
        {
        case Scheme::etd2:
        {
            const PhiTable& full = table(h);
            const auto      nu   = nonlinear_rhs(x);
            const auto      hnu  = linear_combination(g, {{h, &nu}});
            const auto      a    = apply_phi(full, {&x, &hnu, nullptr, nullptr});
            const auto      na   = nonlinear_rhs(a);
            const auto      corr = linear_combination(g, {{h, &na}, {-h, &nu}});
            out                  = apply_phi(full, {nullptr, nullptr, &corr, nullptr});
            out.axpy(1.0, a);
            break;
        }
        case Scheme::etd_rk4:
        {
            const PhiTable& half = table(0.5 * h);
            const PhiTable& full = table(h);
            const auto      nu   = nonlinear_rhs(x);
            const auto      f_a  = linear_combination(g, {{0.5 * h, &nu}});
            const auto      a    = apply_phi(half, {&x, &f_a, nullptr, nullptr});
            const auto      na   = nonlinear_rhs(a);
            const auto      f_b  = linear_combination(g, {{0.5 * h, &na}});
            const auto      b    = apply_phi(half, {&x, &f_b, nullptr, nullptr});
            const auto      nb   = nonlinear_rhs(b);
            const auto      f_c  = linear_combination(g, {{h, &nb}, {-0.5 * h, &nu}});
            const auto      c    = apply_phi(half, {&a, &f_c, nullptr, nullptr});
            const auto      nc   = nonlinear_rhs(c);
            const auto      w1   = linear_combination(g, {{h, &nu}});
            const auto w2 = linear_combination(g, {{-3.0 * h, &nu}, {2.0 * h, &na}, {2.0 * h, &nb}, {-h, &nc}});
            const auto w3 =
                linear_combination(g, {{4.0 * h, &nu}, {-4.0 * h, &na}, {-4.0 * h, &nb}, {4.0 * h, &nc}});
            out = apply_phi(full, {&x, &w1, &w2, &w3});
            break;
        }
        case Scheme::strang_split:
        {
            const PhiTable& half = table(0.5 * h);
            auto            y    = apply_phi(half, {&x, nullptr, nullptr, nullptr});
            const auto      k1   = nonlinear_rhs(y);
            const auto      y2   = linear_combination(g, {{1.0, &y}, {0.5 * h, &k1}});
            const auto      k2   = nonlinear_rhs(y2);
            const auto      y3   = linear_combination(g, {{1.0, &y}, {0.5 * h, &k2}});
            const auto      k3   = nonlinear_rhs(y3);
            const auto      y4   = linear_combination(g, {{1.0, &y}, {h, &k3}});
            const auto      k4   = nonlinear_rhs(y4);
            y.axpy(h / 6.0, k1).axpy(h / 3.0, k2).axpy(h / 3.0, k3).axpy(h / 6.0, k4);
            out = apply_phi(half, {&y, nullptr, nullptr, nullptr});
            break;
        }
        }
        if (!out.all_finite())
            throw NonFiniteError("non-finite value after step of size " + std::to_string(h));
        return out;
    }

    /// phi-table for step size tau, cached.
    const PhiTable& table(double tau)
    {
        auto it = tables_.find(tau);
        if (it == tables_.end())
            it = tables_.emplace(tau, make_phi_table(*grid_, tau, coeffs_)).first;
        return it->second;
    }

private:
    GridPtr                    grid_;
    PhysicalParams             params_;
    LinearCoefficients         coeffs_;
    Scheme                     scheme_;
    bool                       dealias_;
    bool                       nonlinear_;
    std::map<double, PhiTable> tables_;
};

/// One step of the configured scheme on a physical state.
inline StateField step(const StateField& state, double dt, Scheme scheme, const PhysicalParams& params,
                       bool dealias = true, bool nonlinear = true)
{
    state.check_shape();
    if (!(dt > 0.0))
        throw DomainError("step: dt must be positive");
    ExponentialStepper stepper(state.grid, params, scheme, dealias, nonlinear);
    const auto         next = stepper.step(SpectralState::from(state), dt);
    StateField         out  = next.to_state(state.grid);
    if (!(out.min_total_pressure(params) > 0.0))
        throw PositivityError("total pressure lost positivity during step");
    return out;
}

/// ||(p, u, s)||_{H^3}.
inline double state_h3_norm(const StateField& state)
{
    const auto&  g  = *state.grid;
    const double hp = norm(state.p, NormKind::H, g, 3);
    const double hu = norm(state.u, NormKind::H, g, 3);
    const double hs = norm(state.s, NormKind::H, g, 3);
    return std::sqrt(hp * hp + hu * hu + hs * hs);
}

/// Integrates from t = 0 to config.t_end with a uniform step no larger than config.dt.
/// A step that would exceed the CFL limit is split into equal sub-steps.
inline RunResult run(const StateField& initial, const SolverConfig& config, const PhysicalParams& params)
{
    config.validate();
    params.validate();
    initial.check_shape();
    const auto& g = *initial.grid;

    RunResult result;
    result.final_state = initial;
    {
        const auto uh = forward(initial.u, g);
        double     mean = 0.0;
        for (auto const& c : uh)
            mean = std::max(mean, std::abs(c[0]));
        if (mean > 1e-12)
            result.warnings.push_back("initial velocity is not mean-zero (max |mean| = " + std::to_string(mean) +
                                      "); the mean is carried as a damped uniform flow");
        const double size = state_h3_norm(initial);
        if (size > config.smallness_threshold)
            result.warnings.push_back("||(p,u,s)||_3 = " + std::to_string(size) + " exceeds the small-data threshold " +
                                      std::to_string(config.smallness_threshold));
    }
    if (!(initial.min_total_pressure(params) > 0.0))
    {
        result.status = RunStatus::positivity_violation;
        result.series.push_back(record(initial, 0.0, params));
        return result;
    }

    result.series.push_back(record(initial, 0.0, params));
    const long   nsteps = config.t_end == 0.0 ? 0 : static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));
    const double h      = nsteps == 0 ? 0.0 : config.t_end / static_cast<double>(nsteps);

    ExponentialStepper stepper(initial.grid, params, config.scheme, config.dealias, config.nonlinear);
    SpectralState      x       = SpectralState::from(initial);
    StateField         current = initial;
    bool               warned_cfl = false;
    for (long n = 1; n <= nsteps; ++n)
    {
        try
        {
            const double limit = cfl_limit(current, params, config);
            const long   subs  = h > limit ? static_cast<long>(std::ceil(h / limit)) : 1;
            if (subs > 1 && !warned_cfl)
            {
                result.warnings.push_back("CFL guard split steps into " + std::to_string(subs) + " sub-steps");
                warned_cfl = true;
            }
            for (long s = 0; s < subs; ++s)
                x = stepper.step(x, h / static_cast<double>(subs));
            current = x.to_state(initial.grid);
            if (!(current.min_total_pressure(params) > 0.0))
                throw PositivityError("total pressure lost positivity");
        }
        catch (const PositivityError& e)
        {
            result.status = RunStatus::positivity_violation;
            result.warnings.push_back(e.what());
            break;
        }
        catch (const NonFiniteError& e)
        {
            result.status = RunStatus::nan_detected;
            result.warnings.push_back(e.what());
            break;
        }
        result.steps      = n;
        result.final_time = n == nsteps ? config.t_end : h * static_cast<double>(n);
        if (n % config.output_every == 0 || n == nsteps)
            result.series.push_back(record(current, result.final_time, params, result.series.back().m_of_t));
    }
    result.final_state = current;
    return result;
}

} // namespace deuler

#endif // DEULER_SOLVER_HPP
