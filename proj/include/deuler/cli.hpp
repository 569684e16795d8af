#ifndef DEULER_CLI_HPP
#define DEULER_CLI_HPP

#include "deuler/checks.hpp"
#include "deuler/decay_fit.hpp"
#include "deuler/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace deuler
{

inline constexpr const char* code_version = "0.1.0";

enum ExitCode : int
{
    exit_ok            = 0,
    exit_failed_checks = 1,
    exit_usage         = 2
};

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace cli
{

using json = nlohmann::json;
namespace fs = std::filesystem;

inline void write_json(const fs::path& path, const json& j)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

inline json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open '" + path.string() + "'");
    return json::parse(in);
}

/// `lo:hi` window.
inline std::pair<double, double> parse_window(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("window '" + text + "' must be lo:hi");
    try
    {
        const double lo = std::stod(text.substr(0, colon));
        const double hi = std::stod(text.substr(colon + 1));
        if (!(lo < hi))
            throw UsageError("window '" + text + "' needs lo < hi");
        return {lo, hi};
    }
    catch (const std::logic_error&)
    {
        throw UsageError("window '" + text + "' must be lo:hi");
    }
}

/// `log:lo:hi:n`, `lin:lo:hi:n` or a comma list.
inline std::vector<double> parse_time_grid(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream        ss(text);
    std::string              part;
    try
    {
        if (text.rfind("log:", 0) == 0 || text.rfind("lin:", 0) == 0)
        {
            while (std::getline(ss, part, ':'))
                parts.push_back(part);
            if (parts.size() != 4)
                throw UsageError("time grid '" + text + "' must be log:lo:hi:n or lin:lo:hi:n");
            const double lo = std::stod(parts[1]);
            const double hi = std::stod(parts[2]);
            const int    n  = std::stoi(parts[3]);
            if (n < 2 || !(lo < hi) || (parts[0] == "log" && !(lo > 0.0)) || lo < 0.0)
                throw UsageError("time grid '" + text + "' needs 0 <= lo < hi (lo > 0 for log) and n >= 2");
            std::vector<double> out(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
            {
                const double f = static_cast<double>(i) / (n - 1);
                out[i] = parts[0] == "log" ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                                           : lo + f * (hi - lo);
            }
            out.back() = hi;
            return out;
        }
        std::vector<double> out;
        while (std::getline(ss, part, ','))
            out.push_back(std::stod(part));
        if (out.empty())
            throw UsageError("empty time grid");
        for (std::size_t i = 0; i < out.size(); ++i)
            if (out[i] < 0.0 || (i > 0 && !(out[i] > out[i - 1])))
                throw UsageError("time grid '" + text + "' must be non-negative and increasing");
        return out;
    }
    catch (const std::logic_error&)
    {
        throw UsageError("malformed time grid '" + text + "'");
    }
}

inline std::vector<double> parse_list(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::stringstream   ss(text);
    std::string         part;
    try
    {
        while (std::getline(ss, part, ','))
            out.push_back(std::stod(part));
    }
    catch (const std::logic_error&)
    {
        throw UsageError("malformed " + what + " list '" + text + "'");
    }
    if (out.empty())
        throw UsageError("empty " + what + " list");
    return out;
}

inline json params_json(const PhysicalParams& p)
{
    return {{"R", p.R},         {"cv", p.cv},   {"a", p.a},
            {"p_inf", p.p_inf}, {"s_inf", p.s_inf}, {"k", p.k},
            {"rho_inf", p.rho_inf()}, {"kappa1", p.kappa1()}, {"kappa2", p.kappa2()}};
}

inline json config_json(const RunConfig& cfg)
{
    return {{"physics.R", cfg.physics.R},
            {"physics.cv", cfg.physics.cv},
            {"physics.a", cfg.physics.a},
            {"physics.p_inf", cfg.physics.p_inf},
            {"physics.s_inf", cfg.physics.s_inf},
            {"physics.k", cfg.physics.k},
            {"grid.N", cfg.N},
            {"grid.L", cfg.L},
            {"time.dt", cfg.solver.dt},
            {"time.t_end", cfg.solver.t_end},
            {"time.output_every", cfg.solver.output_every},
            {"init.kind", to_string(cfg.init_kind)},
            {"init.amplitude", cfg.amplitude},
            {"init.width", cfg.width},
            {"init.seed", cfg.seed},
            {"solver.scheme", to_string(cfg.solver.scheme)},
            {"solver.dealias", cfg.solver.dealias},
            {"solver.cfl_safety", cfg.solver.cfl_safety},
            {"run.label", cfg.label}};
}

/// Inverse of config_json, so `check` can rebuild the run's initial data.
inline RunConfig config_from_json(const json& j)
{
    RunConfig cfg;
    for (const auto& [key, value] : j.items())
    {
        std::string text;
        if (value.is_string())
            text = value.get<std::string>();
        else if (value.is_boolean())
            text = value.get<bool>() ? "true" : "false";
        else if (value.is_number_integer() || value.is_number_unsigned())
            text = std::to_string(value.get<long long>());
        else
            text = format_number(value.get<double>());
        apply_config_value(cfg, key, text);
    }
    return cfg;
}

inline json fit_json(const DecayFit& f)
{
    return {{"quantity", f.quantity}, {"t_lo", f.t_lo},           {"t_hi", f.t_hi},
            {"exponent", f.exponent}, {"r_squared", f.r_squared}, {"n_points", f.n_points}};
}

/// Fits every named column of `table` on [lo, hi]; failures become {"error": ...}.
inline json fit_columns(const CsvTable& table, const std::vector<std::string>& names, double lo, double hi,
                        const std::string& prefix = "")
{
    json       out  = json::object();
    const auto tcol = table.column("t");
    if (!tcol)
        throw UsageError("CSV has no 't' column");
    const auto t = table.values(*tcol);
    for (const auto& name : names)
    {
        const auto col = table.column(name);
        if (!col)
            throw UsageError("CSV has no column '" + name + "'");
        try
        {
            out[prefix + name] = fit_json(fit_power_law(t, table.values(*col), lo, hi, prefix + name));
        }
        catch (const FitError& e)
        {
            out[prefix + name] = {{"quantity", prefix + name}, {"error", e.what()}};
        }
    }
    return out;
}

inline CsvTable series_table(const std::vector<DiagnosticsRecord>& series)
{
    CsvTable table;
    table.header = series_header();
    for (const auto& r : series)
        table.rows.push_back(series_row(r));
    return table;
}

inline json sobolev_json(const SobolevReport& rep)
{
    json samples = json::array();
    for (const auto& s : rep.samples)
        samples.push_back({{"linf", s.linf}, {"l6", s.l6}, {"lq", s.lq}});
    return {{"q", sobolev_q_values},
            {"max", {{"linf", rep.max.linf}, {"l6", rep.max.l6}, {"lq", rep.max.lq}}},
            {"samples", samples}};
}

/// Non-constant scalar fields of a state (p, u components, s).
inline std::vector<RealField> sobolev_fields(const StateField& state)
{
    std::vector<RealField> out;
    for (const RealField* f : {&state.p, &state.u[0], &state.u[1], &state.u[2], &state.s})
    {
        const auto [lo, hi] = std::minmax_element(f->begin(), f->end());
        if (*hi - *lo > 0.0)
            out.push_back(*f);
    }
    return out;
}

/// checks.json contents; `passed` is false when any pass/fail check fails.
inline json checks_json(const std::vector<DiagnosticsRecord>& series, const StateField* initial, bool completed)
{
    json         out;
    const auto   ap = apriori_check(series);
    const auto   en = entropy_bound_check(series);
    double       min_p = std::numeric_limits<double>::infinity();
    for (const auto& r : series)
        min_p = std::min(min_p, r.min_total_p);
    const bool positivity = min_p > 0.0;

    out["apriori"] = {{"sup_term", ap.sup_term},           {"integral_term", ap.integral_term},
                      {"lhs", ap.lhs},                     {"initial_norm_sq", ap.initial_norm_sq},
                      {"sup_ratio", ap.sup_ratio},         {"c_emp", ap.c_emp},
                      {"passed", ap.passed}};
    out["entropy"] = {{"h3_s0", en.h3_s0},
                      {"c_fit", en.c_fit},
                      {"worst_bound_ratio", en.worst_bound_ratio},
                      {"max_abs_s0", en.max_abs_s0},
                      {"max_abs_s", en.max_abs_s},
                      {"max_principle_tolerance", max_principle_tolerance},
                      {"gronwall_ok", en.gronwall_ok},
                      {"max_principle_ok", en.max_principle_ok},
                      {"passed", en.passed}};
    out["positivity"] = {{"min_total_p", min_p}, {"passed", positivity}};
    if (initial != nullptr)
    {
        const auto fields = sobolev_fields(*initial);
        out["sobolev"]    = fields.empty() ? json(nullptr) : sobolev_json(sobolev_ratio_report(fields, *initial->grid));
    }
    out["completed"] = completed;
    out["passed"]    = completed && ap.passed && en.passed && positivity;
    return out;
}

inline StateField initial_state(const RunConfig& cfg)
{
    return make_initial(cfg.init_kind, cfg.amplitude, cfg.width, cfg.seed, make_grid(cfg.N, cfg.L), cfg.physics);
}

inline double wrap_time(const RunConfig& cfg) { return cfg.L / (2.0 * cfg.physics.kappa2()); }

inline int simulate(const RunConfig& cfg, const fs::path& out_dir, std::optional<std::pair<double, double>> window)
{
    cfg.physics.validate();
    cfg.solver.validate();
    RunDirectoryLock lock(out_dir);
    const StateField initial = initial_state(cfg);
    const RunResult  result  = run(initial, cfg.solver, cfg.physics);

    write_csv(out_dir / "series.csv", series_header(), series_table(result.series).rows);
    std::vector<std::vector<double>> extrema;
    for (const auto& r : result.series)
        extrema.push_back({r.t, r.max_abs_s});
    write_csv(out_dir / "extrema.csv", {"t", "max_abs_s"}, extrema);

    const double t_end = result.final_time;
    const auto [lo, hi] = window.value_or(std::pair{cfg.solver.t_end / 10.0, cfg.solver.t_end});
    json fits;
    fits["window"]    = {{"t_lo", lo}, {"t_hi", hi}};
    fits["trend_only"] = true;
    fits["wrap_time"]  = wrap_time(cfg);
    fits["fits"]       = fit_columns(series_table(result.series), {"l2_p", "l2_u", "h3fun", "l2_dt"}, lo, hi);
    write_json(out_dir / "fits.json", fits);

    const bool completed = result.status == RunStatus::completed;
    json       checks    = checks_json(result.series, &initial, completed);
    write_json(out_dir / "checks.json", checks);

    json meta;
    meta["label"]        = cfg.label;
    meta["subcommand"]   = "simulate";
    meta["code_version"] = code_version;
    meta["config"]       = config_json(cfg);
    meta["derived"]      = params_json(cfg.physics);
    meta["status"]       = to_string(result.status);
    meta["final_time"]   = t_end;
    meta["steps"]        = result.steps;
    meta["data_size_k0"] = data_size_k0(initial);
    meta["wrap_time"]    = wrap_time(cfg);
    meta["warnings"]     = result.warnings;
    write_json(out_dir / "meta.json", meta);

    for (const auto& w : result.warnings)
        std::cerr << "warning: " << w << '\n';
    std::cout << "status " << to_string(result.status) << " t=" << format_number(t_end) << " steps=" << result.steps
              << " wrap_time=" << format_number(wrap_time(cfg)) << '\n';
    return checks["passed"].get<bool>() ? exit_ok : exit_failed_checks;
}

struct LinearDecayOptions
{
    std::vector<double>                      times;
    double                                   amp_p = 1.0;
    double                                   amp_v = 1.0;
    double                                   amp_t = 1.0;
    double                                   width = 1.0;
    std::optional<std::pair<double, double>> window;
};

inline const std::vector<std::string> whole_space_fit_columns{
    "p", "v", "u", "omega", "grad1_p", "grad2_p", "grad3_p", "grad1_v", "grad2_v", "grad1_u", "grad2_u",
    "dt_p", "dt_u", "dt_total"};

inline int linear_decay(const RunConfig& cfg, const LinearDecayOptions& opt, const fs::path& out_dir)
{
    cfg.physics.validate();
    if (!(opt.width > 0.0))
        throw UsageError("--width must be positive");
    RunDirectoryLock         lock(out_dir);
    const auto               profile = RadialProfile::gaussian(opt.amp_p, opt.amp_v, opt.amp_t, opt.width);
    const LinearCoefficients c(cfg.physics);

    std::vector<DiagnosticsRecord>   series;
    std::vector<std::vector<double>> ws_rows;
    double                           worst = 0.0;
    for (double t : opt.times)
    {
        series.push_back(whole_space_record(profile, t, cfg.physics, series.empty() ? 0.0 : series.back().m_of_t));
        const auto s = whole_space_sample(profile, t, c);
        worst        = std::max(worst, s.max_rel_quadrature_error);
        ws_rows.push_back(whole_space_row(s));
    }
    std::vector<std::string> ws_header(std::begin(whole_space_columns), std::end(whole_space_columns));
    write_csv(out_dir / "series.csv", series_header(), series_table(series).rows);
    write_csv(out_dir / "whole_space.csv", ws_header, ws_rows);

    const double t_end  = opt.times.back();
    const auto [lo, hi] = opt.window.value_or(std::pair{t_end / 10.0, t_end});
    json fits;
    fits["window"] = {{"t_lo", lo}, {"t_hi", hi}};
    fits["fits"]   = fit_columns(series_table(series), {"l2_p", "l2_u", "h3fun", "l2_dt"}, lo, hi);
    CsvTable ws{ws_header, ws_rows};
    fits["fits"].update(fit_columns(ws, whole_space_fit_columns, lo, hi, "whole_space."));
    fits["reference"] = {{"p", reference_exponent_p}, {"u", reference_exponent_u}, {"per_derivative", -0.5}};
    write_json(out_dir / "fits.json", fits);

    json meta;
    meta["label"]        = cfg.label;
    meta["subcommand"]   = "linear-decay";
    meta["code_version"] = code_version;
    meta["config"]       = config_json(cfg);
    meta["derived"]      = params_json(cfg.physics);
    meta["profile"]      = {{"kind", "gaussian"}, {"amp_p", opt.amp_p}, {"amp_v", opt.amp_v},
                            {"amp_t", opt.amp_t}, {"width", opt.width}, {"r_cut", profile.r_cut}};
    meta["times"]        = opt.times;
    meta["max_rel_quadrature_error"] = worst;
    write_json(out_dir / "meta.json", meta);

    std::cout << "linear-decay " << opt.times.size() << " times, max relative quadrature error "
              << format_number(worst) << '\n';
    return exit_ok;
}

inline int green_table_command(double a, double kappa2, const std::vector<double>& xi, const std::vector<double>& t,
                               std::ostream& out)
{
    if (!(a > 0.0) || !(kappa2 > 0.0))
        throw UsageError("--a and --kappa2 must be positive");
    const LinearCoefficients         c(a, kappa2);
    std::vector<std::vector<double>> rows;
    for (double x : xi)
        for (double s : t)
        {
            if (x < 0.0 || s < 0.0)
                throw UsageError("xi and t must be non-negative");
            const auto g = green_hat(x, s, c);
            rows.push_back({x, s, g.g11, g.g12, g.g21, g.g22});
        }
    write_csv(out, {"xi", "t", "g11", "g12", "g21", "g22"}, rows);
    return exit_ok;
}

inline int fit_command(const fs::path& csv, const std::vector<std::string>& quantities,
                       std::optional<std::pair<double, double>> window, const std::optional<fs::path>& out_path)
{
    const CsvTable table = read_csv(csv);
    const auto     tcol  = table.column("t");
    if (!tcol || table.rows.empty())
        throw UsageError("'" + csv.string() + "' has no 't' column or no rows");
    const auto t = table.values(*tcol);
    const auto [lo, hi] = window.value_or(std::pair{t.back() / 10.0, t.back()});
    json fits;
    fits["window"] = {{"t_lo", lo}, {"t_hi", hi}};
    fits["fits"]   = fit_columns(table, quantities, lo, hi);
    bool ok        = true;
    for (const auto& [name, f] : fits["fits"].items())
    {
        if (f.contains("error"))
        {
            ok = false;
            std::cerr << name << ": " << f["error"].get<std::string>() << '\n';
            continue;
        }
        std::cout << name << " exponent " << format_number(f["exponent"].get<double>()) << " r2 "
                  << format_number(f["r_squared"].get<double>()) << '\n';
    }
    if (out_path)
        write_json(*out_path, fits);
    return ok ? exit_ok : exit_failed_checks;
}

inline int check_command(const fs::path& dir)
{
    RunDirectoryLock lock(dir);
    const auto       table  = read_csv(dir / "series.csv");
    auto             series = records_from_table(table);
    if (fs::exists(dir / "extrema.csv"))
    {
        const auto ext = read_csv(dir / "extrema.csv");
        const auto col = ext.column("max_abs_s");
        if (col && ext.rows.size() == series.size())
            for (std::size_t i = 0; i < series.size(); ++i)
                series[i].max_abs_s = ext.rows[i][*col];
    }
    std::optional<StateField> initial;
    bool                      completed = true;
    if (fs::exists(dir / "meta.json"))
    {
        const json meta = read_json(dir / "meta.json");
        if (meta.value("subcommand", "") == "simulate")
        {
            initial   = initial_state(config_from_json(meta.at("config")));
            completed = meta.value("status", "") == "completed";
        }
    }
    json checks = checks_json(series, initial ? &*initial : nullptr, completed);
    write_json(dir / "checks.json", checks);
    const bool passed = checks["passed"].get<bool>();
    std::cout << "apriori c_emp " << format_number(checks["apriori"]["c_emp"].get<double>()) << ", entropy "
              << (checks["entropy"]["passed"].get<bool>() ? "ok" : "FAILED") << ", positivity "
              << (checks["positivity"]["passed"].get<bool>() ? "ok" : "FAILED") << '\n';
    return passed ? exit_ok : exit_failed_checks;
}

inline RunConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides)
{
    RunConfig cfg;
    if (!path.empty())
        cfg = load_config(path);
    for (const auto& o : overrides)
        apply_override(cfg, o);
    return cfg;
}

} // namespace cli

/// Entry point of the deuler tool.
inline int cli_main(int argc, char** argv)
{
    using namespace cli;
    CLI::App app{"Damped compressible Euler: spectral solver and decay diagnostics"};
    app.require_subcommand(1);

    std::string              config_path, out_dir, window_text;
    std::vector<std::string> overrides;

    auto* sim = app.add_subcommand("simulate", "nonlinear periodic-box run");
    sim->add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
    sim->add_option("--set", overrides, "override a config key, key=value");
    sim->add_option("--out", out_dir, "run directory")->required();
    sim->add_option("--window", window_text, "fit window lo:hi");

    LinearDecayOptions lin;
    std::string        t_grid = "log:1:1000:40";
    auto*              ld     = app.add_subcommand("linear-decay", "whole-space linear decay by radial quadrature");
    ld->add_option("--config", config_path, "config file (physics keys are used)")->check(CLI::ExistingFile);
    ld->add_option("--set", overrides, "override a config key, key=value");
    ld->add_option("--out", out_dir, "run directory")->required();
    ld->add_option("--t-grid", t_grid, "log:lo:hi:n, lin:lo:hi:n or a comma list");
    ld->add_option("--amp-p", lin.amp_p, "pressure amplitude");
    ld->add_option("--amp-v", lin.amp_v, "compressible velocity amplitude");
    ld->add_option("--amp-t", lin.amp_t, "divergence-free velocity amplitude");
    ld->add_option("--width", lin.width, "Gaussian width in Fourier units");
    ld->add_option("--window", window_text, "fit window lo:hi");

    double      a = 1.0, kappa2 = 1.0;
    std::string xi_text, t_text;
    auto*       gt = app.add_subcommand("green-table", "dump the Green matrix as CSV");
    gt->add_option("--a", a, "damping")->required();
    gt->add_option("--kappa2", kappa2, "sound speed scale")->required();
    gt->add_option("--xi", xi_text, "comma list of |xi|")->required();
    gt->add_option("--t", t_text, "comma list of times")->required();
    gt->add_option("--out", out_dir, "CSV file (stdout when absent)");

    std::string csv_path, quantity_text;
    auto*       ft = app.add_subcommand("fit", "fit decay exponents on a CSV with a t column");
    ft->add_option("--csv", csv_path, "input CSV")->required()->check(CLI::ExistingFile);
    ft->add_option("--quantity", quantity_text, "comma list of columns")->required();
    ft->add_option("--window", window_text, "fit window lo:hi");
    ft->add_option("--out", out_dir, "write fits JSON here");

    auto* ck = app.add_subcommand("check", "recompute checks.json of a run directory");
    ck->add_option("--run", out_dir, "run directory")->required()->check(CLI::ExistingDirectory);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        std::optional<std::pair<double, double>> window;
        if (!window_text.empty())
            window = parse_window(window_text);
        if (*sim)
            return simulate(resolve_config(config_path, overrides), out_dir, window);
        if (*ld)
        {
            lin.times  = parse_time_grid(t_grid);
            lin.window = window;
            return linear_decay(resolve_config(config_path, overrides), lin, out_dir);
        }
        if (*gt)
        {
            const auto xi = parse_list(xi_text, "xi");
            const auto ts = parse_list(t_text, "t");
            if (out_dir.empty())
                return green_table_command(a, kappa2, xi, ts, std::cout);
            std::ofstream out(out_dir, std::ios::binary);
            if (!out)
                throw UsageError("cannot write '" + out_dir + "'");
            return green_table_command(a, kappa2, xi, ts, out);
        }
        if (*ft)
        {
            std::vector<std::string> quantities;
            std::stringstream        ss(quantity_text);
            for (std::string q; std::getline(ss, q, ',');)
                quantities.push_back(detail::trim(q));
            std::optional<fs::path> out;
            if (!out_dir.empty())
                out = out_dir;
            return fit_command(csv_path, quantities, window, out);
        }
        if (*ck)
            return check_command(out_dir);
    }
    catch (const ConfigError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const UsageError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const DomainError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failed_checks;
    }
    return exit_usage;
}

} // namespace deuler

#endif // DEULER_CLI_HPP
