#include "spinvalve/sweep.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "spinvalve/analytic.hpp"
#include "spinvalve/chain_oracle.hpp"
#include "spinvalve/liouvillian.hpp"

namespace spinvalve {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& value, int line) {
    const char* begin = value.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + value.size() || value.empty() || !std::isfinite(v))
        fail(line, "invalid number '" + value + "'");
    return v;
}

long parse_long(const std::string& value, int line) {
    const char* begin = value.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    if (end != begin + value.size() || value.empty()) fail(line, "invalid integer '" + value + "'");
    return v;
}

SweepMode parse_mode(const std::string& value, int line) {
    if (value == "current") return SweepMode::Current;
    if (value == "contrast-vs-b") return SweepMode::ContrastVsB;
    if (value == "contrast-vs-p") return SweepMode::ContrastVsP;
    if (value == "oracle") return SweepMode::Oracle;
    if (value == "perturbative") return SweepMode::Perturbative;
    fail(line, "unknown mode '" + value + "'");
}

// Swept base parameters, addressed by their config key
using Setter = void (*)(ValveParams&, double);

Setter setter_for(const std::string& var) {
    static const std::map<std::string, Setter> table = {
        {"t", [](ValveParams& p, double v) { p.t = v; }},
        {"omega", [](ValveParams& p, double v) { p.omega = v; }},
        {"B", [](ValveParams& p, double v) { p.big_b = v; }},
        {"alpha", [](ValveParams& p, double v) { p.alpha = v; }},
        {"b", [](ValveParams& p, double v) { p.bandwidth = v; }},
        {"nL", [](ValveParams& p, double v) { p.n_left = v; }},
        {"nR", [](ValveParams& p, double v) { p.n_right = v; }},
        {"pL", [](ValveParams& p, double v) { p.p_left = v; }},
        {"pR", [](ValveParams& p, double v) { p.p_right = v; }},
    };
    auto it = table.find(var);
    return it == table.end() ? nullptr : it->second;
}

std::string effective_var(const SweepSpec& spec) {
    if (!spec.axis.var.empty()) return spec.axis.var;
    return spec.mode == SweepMode::ContrastVsP ? "P" : "B";
}

std::vector<double> make_grid(double min, double max, int points, bool log_scale) {
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        double f = double(i) / double(points - 1);
        grid[i] = log_scale ? min * std::pow(max / min, f) : min + (max - min) * f;
    }
    return grid;
}

struct ResolvedWindow {
    double start, end, t_max;
};

ResolvedWindow resolve_window(const OracleSettings& o, double bandwidth) {
    ResolvedWindow w;
    w.start = (o.window_start != 0.0) ? o.window_start : 2.0 / bandwidth;
    w.end = (o.window_end != 0.0) ? o.window_end : double(o.n_per_side) / bandwidth;
    w.t_max = (o.t_max != 0.0) ? o.t_max : w.end;
    return w;
}

void check_base(const ValveParams& p) {
    if (!(p.bandwidth > 0.0)) throw ConfigError("b out of range (must be > 0)");
    if (!(p.alpha >= 0.0 && p.alpha < 1.0))
        throw ConfigError("alpha out of range [0, 1): got " + format_value(p.alpha));
    if (!(p.t >= 0.0)) throw ConfigError("t out of range (must be >= 0)");
    if (!(p.n_left >= 0.0 && p.n_left <= 1.0)) throw ConfigError("nL out of range [0, 1]");
    if (!(p.n_right >= 0.0 && p.n_right <= 1.0)) throw ConfigError("nR out of range [0, 1]");
}

}  // namespace

void validate_spec(const SweepSpec& spec) {
    check_base(spec.base);

    const std::string var = effective_var(spec);
    if (spec.mode == SweepMode::ContrastVsB) {
        if (var != "B") throw ConfigError("axis.var must be B for contrast-vs-b");
    } else if (spec.mode == SweepMode::ContrastVsP) {
        if (var != "P") throw ConfigError("axis.var must be P for contrast-vs-p");
    } else if (setter_for(var) == nullptr) {
        throw ConfigError("axis.var '" + var + "' is not a sweepable parameter");
    }

    if (spec.axis.present) {
        if (spec.axis.points < 2) throw ConfigError("axis.points must be at least 2");
        if (!(spec.axis.min < spec.axis.max)) throw ConfigError("axis.min must be below axis.max");
        if (spec.axis.log && !(spec.axis.min > 0.0))
            throw ConfigError("axis.min must be positive on a log axis");

        if (Setter set = setter_for(var)) {
            // interval constraints: checking the endpoints covers the grid
            for (double edge : {spec.axis.min, spec.axis.max}) {
                ValveParams probe = spec.base;
                set(probe, edge);
                try {
                    validate(probe);
                } catch (const Error& e) {
                    throw ConfigError("axis range invalid for " + var + ": " + e.what());
                }
            }
        } else if (spec.mode == SweepMode::ContrastVsP) {
            if (!(spec.axis.min > 0.0 && spec.axis.max < 1.0))
                throw ConfigError("axis range invalid for P: must lie inside (0, 1)");
        }
    }

    if (spec.mode == SweepMode::Oracle) {
        const OracleSettings& o = spec.oracle;
        if (o.n_per_side < 2 || o.n_per_side > 6)
            throw ConfigError("n_per_side out of range [2, 6]");
        if (!(o.dt > 0.0)) throw ConfigError("dt must be positive");
        if (o.samples < 1) throw ConfigError("samples must be at least 1");
        ResolvedWindow w = resolve_window(o, spec.base.bandwidth);
        if (!(w.end > w.start)) throw ConfigError("window end must exceed window start");
        if (w.end > w.t_max * (1.0 + 1e-12)) throw ConfigError("window extends past t_max");
    }
}

SweepSpec parse_config(const std::string& text) {
    SweepSpec spec;
    bool have_mode = false;
    bool axis_min = false, axis_max = false, axis_points = false, axis_any = false;

    std::istringstream stream(text);
    std::string raw;
    for (int line = 1; std::getline(stream, raw); ++line) {
        std::string content = raw.substr(0, raw.find('#'));
        content = trim(content);
        if (content.empty()) continue;

        std::size_t eq = content.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        std::string key = trim(content.substr(0, eq));
        std::string value = trim(content.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (value.empty()) fail(line, "empty value for key '" + key + "'");

        if (key == "mode") {
            spec.mode = parse_mode(value, line);
            have_mode = true;
        } else if (setter_for(key) != nullptr) {
            setter_for(key)(spec.base, parse_double(value, line));
        } else if (key == "xi") {
            if (value == "spin")
                spec.base.statistics = Statistics::Spin;
            else if (value == "fermion")
                spec.base.statistics = Statistics::FreeFermion;
            else
                fail(line, "xi must be 'spin' or 'fermion'");
        } else if (key == "qubit" || key == "aux") {
            SpinState s;
            if (value == "up")
                s = SpinState::Up;
            else if (value == "down")
                s = SpinState::Down;
            else
                fail(line, key + " must be 'up' or 'down'");
            (key == "qubit" ? spec.base.qubit : spec.base.aux) = s;
        } else if (key == "axis.var") {
            spec.axis.var = value;
            axis_any = true;
        } else if (key == "axis.min") {
            spec.axis.min = parse_double(value, line);
            axis_min = axis_any = true;
        } else if (key == "axis.max") {
            spec.axis.max = parse_double(value, line);
            axis_max = axis_any = true;
        } else if (key == "axis.points") {
            long v = parse_long(value, line);
            if (v < 0 || v > 10'000'000) fail(line, "axis.points out of range");
            spec.axis.points = int(v);
            axis_points = axis_any = true;
        } else if (key == "axis.scale") {
            if (value == "linear")
                spec.axis.log = false;
            else if (value == "log")
                spec.axis.log = true;
            else
                fail(line, "axis.scale must be 'linear' or 'log'");
            axis_any = true;
        } else if (key == "output.path") {
            spec.output_path = value;
        } else if (key == "output.format") {
            if (value == "csv")
                spec.format = OutputFormat::Csv;
            else if (value == "json")
                spec.format = OutputFormat::Json;
            else
                fail(line, "output.format must be 'csv' or 'json'");
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    if (!have_mode) throw ConfigError("mode missing");
    if (axis_any) {
        if (!(axis_min && axis_max && axis_points))
            throw ConfigError("axis incomplete: axis.min, axis.max and axis.points are required");
        spec.axis.present = true;
    }
    validate_spec(spec);
    return spec;
}

namespace {

// Wraps a per-point evaluation so failures name the offending grid point.
template <typename F>
auto guarded(const std::string& var, double x, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw NumericalFailure("at " + var + " = " + format_value(x) + ": " + e.what());
    }
}

}  // namespace

SweepTable evaluate_sweep(const SweepSpec& spec) {
    validate_spec(spec);
    const std::string var = effective_var(spec);
    SweepTable table;

    switch (spec.mode) {
        case SweepMode::Current: {
            table.columns = {var, "j_signed", "j_magnitude"};
            auto eval = [&](const ValveParams& p, double x) {
                double j = guarded(var, x,
                                   [&] { return spin_current(p, Lead::Right).signed_current; });
                table.rows.push_back({x, j, std::abs(j)});
            };
            if (!spec.axis.present) {
                eval(spec.base, spec.base.big_b);
            } else {
                Setter set = setter_for(var);
                for (double x :
                     make_grid(spec.axis.min, spec.axis.max, spec.axis.points, spec.axis.log)) {
                    ValveParams p = spec.base;
                    set(p, x);
                    eval(p, x);
                }
            }
            break;
        }

        case SweepMode::ContrastVsB: {
            table.columns = {"B_over_B0", "C_spin", "C_fermion"};
            const double b0 = proton_coupling(spec.base.bandwidth);
            std::vector<double> grid =
                spec.axis.present
                    ? make_grid(spec.axis.min, spec.axis.max, spec.axis.points, spec.axis.log)
                    : make_grid(0.05, 3.0, 200, false);
            for (double x : grid) {
                ValveParams p = spec.base;
                p.big_b = x * b0;
                p.statistics = Statistics::Spin;
                double cs = guarded("B_over_B0", x, [&] { return contrast(p); });
                p.statistics = Statistics::FreeFermion;
                double cf = guarded("B_over_B0", x, [&] { return contrast(p); });
                table.rows.push_back({x, cs, cf});
            }
            break;
        }

        case SweepMode::ContrastVsP: {
            table.columns = {"P", "B_max", "C_max"};
            std::vector<double> grid =
                spec.axis.present
                    ? make_grid(spec.axis.min, spec.axis.max, spec.axis.points, spec.axis.log)
                    : make_grid(0.1, 0.999, 25, false);
            for (double x : grid) {
                ContrastOptimum opt = guarded("P", x, [&] { return optimize_contrast(spec.base, x); });
                table.rows.push_back({x, opt.b_max, opt.c_max});
            }
            break;
        }

        case SweepMode::Perturbative: {
            table.columns = {var, "rate_spin", "rate_fermion"};
            auto eval = [&](ValveParams p, double x) {
                p.statistics = Statistics::Spin;
                double rs = guarded(var, x, [&] { return perturbative_rate(p); });
                p.statistics = Statistics::FreeFermion;
                double rf = guarded(var, x, [&] { return perturbative_rate(p); });
                table.rows.push_back({x, rs, rf});
            };
            if (!spec.axis.present) {
                eval(spec.base, spec.base.big_b);
            } else {
                Setter set = setter_for(var);
                for (double x :
                     make_grid(spec.axis.min, spec.axis.max, spec.axis.points, spec.axis.log)) {
                    ValveParams p = spec.base;
                    set(p, x);
                    eval(p, x);
                }
            }
            break;
        }

        case SweepMode::Oracle: {
            table.columns = {var, "j_oracle", "j_master"};
            ResolvedWindow w = resolve_window(spec.oracle, spec.base.bandwidth);
            auto eval = [&](const ValveParams& p, double x) {
                ChainConfig cfg;
                cfg.n_per_side = spec.oracle.n_per_side;
                cfg.params = p;
                cfg.dt = spec.oracle.dt;
                cfg.t_max = w.t_max;
                cfg.samples = spec.oracle.samples;
                cfg.seed = spec.oracle.seed;
                double jo =
                    guarded(var, x, [&] { return oracle_current(cfg, w.start, w.end).current; });
                double jm =
                    guarded(var, x, [&] { return spin_current(p, Lead::Right).signed_current; });
                table.rows.push_back({x, jo, jm});
            };
            if (!spec.axis.present) {
                eval(spec.base, spec.base.big_b);
            } else {
                Setter set = setter_for(var);
                for (double x :
                     make_grid(spec.axis.min, spec.axis.max, spec.axis.points, spec.axis.log)) {
                    ValveParams p = spec.base;
                    set(p, x);
                    eval(p, x);
                }
            }
            break;
        }
    }
    return table;
}

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string to_csv(const SweepTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_value(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const SweepTable& table) {
    auto json_value = [](double v) -> std::string {
        if (std::isinf(v) || std::isnan(v)) return "\"" + format_value(v) + "\"";
        return format_value(v);
    };
    std::string out = "[\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out += "  {";
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out += ", ";
            out += "\"" + table.columns[c] + "\": " + json_value(table.rows[r][c]);
        }
        out += (r + 1 < table.rows.size()) ? "},\n" : "}\n";
    }
    out += "]\n";
    return out;
}

int run_sweep(const SweepSpec& spec, std::ostream& diagnostics) {
    SweepTable table;
    try {
        table = evaluate_sweep(spec);
    } catch (const ConfigError& e) {
        diagnostics << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        diagnostics << "numerical failure: " << e.what() << '\n';
        return 3;
    }

    std::string text = (spec.format == OutputFormat::Csv) ? to_csv(table) : to_json(table);
    if (spec.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(spec.output_path, std::ios::binary);
        if (!file) {
            diagnostics << "config error: cannot open output path '" << spec.output_path << "'\n";
            return 2;
        }
        file << text;
    }
    return 0;
}

}  // namespace spinvalve
