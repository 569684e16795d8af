#ifndef DEULER_IO_HPP
#define DEULER_IO_HPP

#include "deuler/initial_data.hpp"
#include "deuler/solver.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace deuler
{

class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string key, const std::string& what) : std::runtime_error(what), key_(std::move(key)) {}
    [[nodiscard]] const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Everything a box run needs, resolved from defaults, a config file and overrides.
struct RunConfig
{
    PhysicalParams physics = PhysicalParams::defaults();
    int            N       = 32;
    double         L       = 40.0;
    SolverConfig   solver{};
    InitialKind    init_kind = InitialKind::gaussian_bump;
    double         amplitude = 1e-2;
    double         width     = 1.0;
    std::uint64_t  seed      = 1;
    std::string    label     = "run";

    RunConfig()
    {
        solver.dt    = 0.05;
        solver.t_end = 5.0;
    }
};

inline constexpr std::string_view config_keys[] = {
    "physics.R",     "physics.cv",     "physics.a",         "physics.p_inf",     "physics.s_inf",
    "physics.k",     "grid.N",         "grid.L",            "time.dt",           "time.t_end",
    "time.output_every", "init.kind",  "init.amplitude",    "init.width",        "init.seed",
    "solver.scheme", "solver.dealias", "solver.cfl_safety", "run.label"};

namespace detail
{

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string unquote(const std::string& s)
{
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

inline double parse_double(const std::string& key, const std::string& value)
{
    double v = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec]  = std::from_chars(value.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ConfigError(key, "config key '" + key + "': expected a finite number, got '" + value + "'");
    return v;
}

inline long long parse_integer(const std::string& key, const std::string& value)
{
    long long v = 0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec]  = std::from_chars(value.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(key, "config key '" + key + "': expected an integer, got '" + value + "'");
    return v;
}

inline bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw ConfigError(key, "config key '" + key + "': expected true or false, got '" + value + "'");
}

} // namespace detail

/// Applies one key = value pair.
inline void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& raw)
{
    using namespace detail;
    const std::string value = unquote(trim(raw));
    auto positive = [&](double v) {
        if (!(v > 0.0))
            throw ConfigError(key, "config key '" + key + "': must be positive, got '" + value + "'");
        return v;
    };
    try
    {
        if (key == "physics.R")
            cfg.physics.R = positive(parse_double(key, value));
        else if (key == "physics.cv")
            cfg.physics.cv = positive(parse_double(key, value));
        else if (key == "physics.a")
            cfg.physics.a = positive(parse_double(key, value));
        else if (key == "physics.p_inf")
            cfg.physics.p_inf = positive(parse_double(key, value));
        else if (key == "physics.s_inf")
            cfg.physics.s_inf = parse_double(key, value);
        else if (key == "physics.k")
            cfg.physics.k = positive(parse_double(key, value));
        else if (key == "grid.N")
        {
            const auto n = parse_integer(key, value);
            if (n < 4 || n > 1024 || (n & (n - 1)) != 0)
                throw ConfigError(key, "config key 'grid.N': must be a power of two in [4, 1024], got '" + value + "'");
            cfg.N = static_cast<int>(n);
        }
        else if (key == "grid.L")
            cfg.L = positive(parse_double(key, value));
        else if (key == "time.dt")
            cfg.solver.dt = positive(parse_double(key, value));
        else if (key == "time.t_end")
        {
            cfg.solver.t_end = parse_double(key, value);
            if (cfg.solver.t_end < 0.0)
                throw ConfigError(key, "config key 'time.t_end': must be non-negative");
        }
        else if (key == "time.output_every")
        {
            const auto n = parse_integer(key, value);
            if (n < 1)
                throw ConfigError(key, "config key 'time.output_every': must be at least 1");
            cfg.solver.output_every = static_cast<int>(n);
        }
        else if (key == "init.kind")
            cfg.init_kind = parse_initial_kind(value);
        else if (key == "init.amplitude")
        {
            cfg.amplitude = parse_double(key, value);
            if (cfg.amplitude < 0.0)
                throw ConfigError(key, "config key 'init.amplitude': must be non-negative");
        }
        else if (key == "init.width")
            cfg.width = positive(parse_double(key, value));
        else if (key == "init.seed")
        {
            const auto n = parse_integer(key, value);
            if (n < 0)
                throw ConfigError(key, "config key 'init.seed': must be non-negative");
            cfg.seed = static_cast<std::uint64_t>(n);
        }
        else if (key == "solver.scheme")
            cfg.solver.scheme = parse_scheme(value);
        else if (key == "solver.dealias")
            cfg.solver.dealias = parse_bool(key, value);
        else if (key == "solver.cfl_safety")
        {
            const double c = parse_double(key, value);
            if (!(c > 0.0 && c <= 1.0))
                throw ConfigError(key, "config key 'solver.cfl_safety': must lie in (0, 1]");
            cfg.solver.cfl_safety = c;
        }
        else if (key == "run.label")
            cfg.label = value;
        else
            throw ConfigError(key, "unknown config key '" + key + "'");
    }
    catch (const DomainError& e)
    {
        throw ConfigError(key, "config key '" + key + "': " + e.what());
    }
}

/// Flat `key = value` text; `#` starts a comment; blank lines are ignored.
inline RunConfig parse_config(std::istream& in, RunConfig cfg = {})
{
    std::string line;
    int         lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(body, "config line " + std::to_string(lineno) + ": expected 'key = value' for key '" +
                                        body + "'");
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        if (key.empty())
            throw ConfigError("", "config line " + std::to_string(lineno) + ": missing key");
        apply_config_value(cfg, key, body.substr(eq + 1));
    }
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path, RunConfig cfg = {})
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot open config file '" + path.string() + "'");
    return parse_config(in, std::move(cfg));
}

/// `key=value` override as given on the command line.
inline void apply_override(RunConfig& cfg, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError(assignment, "override '" + assignment + "' is not of the form key=value");
    apply_config_value(cfg, detail::trim(std::string_view(assignment).substr(0, eq)), assignment.substr(eq + 1));
}

/// %.17g, which round-trips every double.
inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows)
{
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    write_csv(out, header, rows);
}

struct CsvTable
{
    std::vector<std::string>         header;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        return std::nullopt;
    }
    [[nodiscard]] std::vector<double> values(std::size_t col) const
    {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows)
            out.push_back(r[col]);
        return out;
    }
};

inline CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    CsvTable    table;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream        ss(s);
        std::string              cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(detail::trim(cell));
        return cells;
    };
    if (!std::getline(in, line))
        throw std::runtime_error("'" + path.string() + "' is empty");
    table.header = split(line);
    int lineno   = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (detail::trim(line).empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(table.header.size()) + " cells");
        std::vector<double> row;
        for (const auto& c : cells)
        {
            char*        end = nullptr;
            const double v   = std::strtod(c.c_str(), &end);
            if (c.empty() || *end != '\0')
                throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad number '" + c + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline std::vector<std::string> series_header()
{
    std::vector<std::string> out;
    for (const auto& c : series_columns)
        out.emplace_back(c.name);
    return out;
}

inline std::vector<double> series_row(const DiagnosticsRecord& r)
{
    std::vector<double> out;
    for (const auto& c : series_columns)
        out.push_back(r.*(c.member));
    return out;
}

/// Rebuilds records from a series table; columns absent from the table stay at their defaults.
inline std::vector<DiagnosticsRecord> records_from_table(const CsvTable& table)
{
    std::vector<DiagnosticsRecord> out(table.rows.size());
    for (const auto& c : series_columns)
    {
        const auto col = table.column(c.name);
        if (!col)
            continue;
        for (std::size_t i = 0; i < table.rows.size(); ++i)
            out[i].*(c.member) = table.rows[i][*col];
    }
    return out;
}

/// Exclusive advisory lock on <dir>/.lock, released on destruction.
class RunDirectoryLock
{
public:
    explicit RunDirectoryLock(const std::filesystem::path& dir)
    {
        std::filesystem::create_directories(dir);
        const auto path = dir / ".lock";
        fd_             = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0)
            throw std::runtime_error("cannot open lock file '" + path.string() + "'");
        if (::flock(fd_, LOCK_EX | LOCK_NB) != 0)
        {
            ::close(fd_);
            throw std::runtime_error("run directory '" + dir.string() + "' is locked by another process");
        }
    }
    ~RunDirectoryLock()
    {
        if (fd_ >= 0)
        {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    RunDirectoryLock(const RunDirectoryLock&)            = delete;
    RunDirectoryLock& operator=(const RunDirectoryLock&) = delete;

private:
    int fd_ = -1;
};

} // namespace deuler

#endif // DEULER_IO_HPP
