#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spinvalve/sweep.hpp"

namespace {

using spinvalve::OutputFormat;
using spinvalve::SpinState;
using spinvalve::Statistics;
using spinvalve::SweepMode;
using spinvalve::SweepSpec;

// Every flag is optional; only flags the user actually passed override the
// config file (or the defaults when there is no config).
struct Options {
    std::string config_path;
    std::string output_path;
    std::string format;

    double t = 0, omega = 0, big_b = 0, alpha = 0, bandwidth = 0;
    double n_left = 0, n_right = 0, p_left = 0, p_right = 0;
    std::string xi, qubit, aux;

    std::string axis_var;
    double axis_min = 0, axis_max = 0;
    int axis_points = 0;
    std::string axis_scale;

    int n_per_side = 0;
    double dt = 0, t_max = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    double window_start = 0, window_end = 0;
};

void add_flags(CLI::App* cmd, Options& opt, bool oracle_flags) {
    cmd->add_option("--config", opt.config_path, "Config file (key = value lines)");
    cmd->add_option("--output", opt.output_path, "Output file (default stdout)");
    cmd->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    cmd->add_option("--t", opt.t, "Lead-valve hopping");
    cmd->add_option("--omega", opt.omega, "Intra-valve coupling");
    cmd->add_option("--B", opt.big_b, "Spectator coupling");
    cmd->add_option("--alpha", opt.alpha, "Cross-hopping ratio");
    cmd->add_option("--b", opt.bandwidth, "Lead bandwidth");
    cmd->add_option("--nL", opt.n_left, "Left lead occupation");
    cmd->add_option("--nR", opt.n_right, "Right lead occupation");
    cmd->add_option("--pL", opt.p_left, "Left lead principal-value weight");
    cmd->add_option("--pR", opt.p_right, "Right lead principal-value weight");
    cmd->add_option("--xi", opt.xi, "spin or fermion")
        ->check(CLI::IsMember({"spin", "fermion"}));
    cmd->add_option("--qubit", opt.qubit, "Qubit spin: up or down")
        ->check(CLI::IsMember({"up", "down"}));
    cmd->add_option("--aux", opt.aux, "Auxiliary spin: up or down")
        ->check(CLI::IsMember({"up", "down"}));

    cmd->add_option("--axis-var", opt.axis_var, "Swept parameter");
    cmd->add_option("--axis-min", opt.axis_min, "Axis start");
    cmd->add_option("--axis-max", opt.axis_max, "Axis end");
    cmd->add_option("--axis-points", opt.axis_points, "Axis point count");
    cmd->add_option("--axis-scale", opt.axis_scale, "linear or log")
        ->check(CLI::IsMember({"linear", "log"}));

    if (oracle_flags) {
        cmd->add_option("--n-per-side", opt.n_per_side, "Chain sites per lead (2..6)");
        cmd->add_option("--dt", opt.dt, "Integrator output step");
        cmd->add_option("--t-max", opt.t_max, "Evolution time (0: derive from window)");
        cmd->add_option("--samples", opt.samples, "Lead-configuration draws");
        cmd->add_option("--seed", opt.seed, "RNG seed");
        cmd->add_option("--window-start", opt.window_start, "Fit window start (0: 2/b)");
        cmd->add_option("--window-end", opt.window_end, "Fit window end (0: n_per_side/b)");
    }
}

// passed("--t") etc.: CLI11 counts each flag's occurrences on this subcommand.
// Oracle-only flags are absent on the other subcommands, hence the no-throw lookup.
int apply_overrides(const CLI::App& cmd, const Options& opt, SweepSpec& spec,
                    std::ostream& diag) {
    auto passed = [&](const std::string& name) {
        const CLI::Option* o = cmd.get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    };

    if (passed("--output")) spec.output_path = opt.output_path;
    if (passed("--format"))
        spec.format = (opt.format == "json") ? OutputFormat::Json : OutputFormat::Csv;

    if (passed("--t")) spec.base.t = opt.t;
    if (passed("--omega")) spec.base.omega = opt.omega;
    if (passed("--B")) spec.base.big_b = opt.big_b;
    if (passed("--alpha")) spec.base.alpha = opt.alpha;
    if (passed("--b")) spec.base.bandwidth = opt.bandwidth;
    if (passed("--nL")) spec.base.n_left = opt.n_left;
    if (passed("--nR")) spec.base.n_right = opt.n_right;
    if (passed("--pL")) spec.base.p_left = opt.p_left;
    if (passed("--pR")) spec.base.p_right = opt.p_right;
    if (passed("--xi"))
        spec.base.statistics =
            (opt.xi == "fermion") ? Statistics::FreeFermion : Statistics::Spin;
    if (passed("--qubit"))
        spec.base.qubit = (opt.qubit == "up") ? SpinState::Up : SpinState::Down;
    if (passed("--aux")) spec.base.aux = (opt.aux == "up") ? SpinState::Up : SpinState::Down;

    if (passed("--axis-var")) spec.axis.var = opt.axis_var;
    if (passed("--axis-min")) spec.axis.min = opt.axis_min;
    if (passed("--axis-max")) spec.axis.max = opt.axis_max;
    if (passed("--axis-points")) spec.axis.points = opt.axis_points;
    if (passed("--axis-scale")) spec.axis.log = (opt.axis_scale == "log");
    bool axis_core = passed("--axis-min") || passed("--axis-max") || passed("--axis-points");
    if (axis_core) {
        if (!(passed("--axis-min") && passed("--axis-max") && passed("--axis-points")) &&
            !spec.axis.present) {
            diag << "config error: --axis-min, --axis-max and --axis-points "
                    "are required together\n";
            return 2;
        }
        spec.axis.present = true;
    }

    if (passed("--n-per-side")) spec.oracle.n_per_side = opt.n_per_side;
    if (passed("--dt")) spec.oracle.dt = opt.dt;
    if (passed("--t-max")) spec.oracle.t_max = opt.t_max;
    if (passed("--samples")) spec.oracle.samples = opt.samples;
    if (passed("--seed")) spec.oracle.seed = opt.seed;
    if (passed("--window-start")) spec.oracle.window_start = opt.window_start;
    if (passed("--window-end")) spec.oracle.window_end = opt.window_end;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary spin transport through a two-site spin valve"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        SweepMode mode;
        bool oracle;
    };
    const Sub subs[] = {
        {"current", "Stationary current into the right lead", SweepMode::Current, false},
        {"contrast-vs-b", "Readout contrast against spectator coupling",
         SweepMode::ContrastVsB, false},
        {"contrast-vs-p", "Optimal contrast against lead polarization",
         SweepMode::ContrastVsP, false},
        {"oracle", "Closed-chain check of the stationary current", SweepMode::Oracle, true},
        {"perturbative", "Lowest-order transport rates", SweepMode::Perturbative, false},
    };

    Options opt;
    CLI::App* cmds[5];
    for (int i = 0; i < 5; ++i) {
        cmds[i] = app.add_subcommand(subs[i].name, subs[i].help);
        add_flags(cmds[i], opt, subs[i].oracle);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    int which = 0;
    while (which < 5 && !cmds[which]->parsed()) ++which;
    const CLI::App& cmd = *cmds[which];

    SweepSpec spec;
    if (!opt.config_path.empty()) {
        std::ifstream file(opt.config_path, std::ios::binary);
        if (!file) {
            std::cerr << "config error: cannot read '" << opt.config_path << "'\n";
            return 2;
        }
        std::ostringstream text;
        text << file.rdbuf();
        try {
            spec = spinvalve::parse_config(text.str());
        } catch (const spinvalve::Error& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return 2;
        }
    }
    spec.mode = subs[which].mode;  // the subcommand decides, config cannot override

    if (int rc = apply_overrides(cmd, opt, spec, std::cerr)) return rc;
    return spinvalve::run_sweep(spec, std::cerr);
}
