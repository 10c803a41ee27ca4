// phasedir: command-line driver for runs, sweeps, analytic reports and coupling dumps.
//
// Exit codes: 0 success, 2 config/input error, 3 numerical failure.

#include "phasedir/phasedir.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace phasedir;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
    std::string config;
    std::string preset;
    std::string out_dir{"."};
    unsigned jobs{1};

    std::optional<std::size_t> n_sites;
    std::optional<std::string> theta;
    std::optional<double> gamma;
    std::optional<double> coherence;
    std::optional<double> t_max;
    std::optional<double> dt;
};

double parse_real_or_throw(const std::string& text, const std::string& flag) {
    const auto v = parse_real(text);
    if (!v) throw ConfigError(flag + ": expected a real number, got '" + text + "'");
    return *v;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real_or_throw(item, flag));
    if (out.empty()) throw ConfigError(flag + ": empty list");
    return out;
}

// preset -> config file -> flag overrides
ParsedConfig resolve(const GlobalOptions& g) {
    ParsedConfig parsed;
    if (!g.preset.empty()) {
        Preset p = make_preset(g.preset);
        parsed.run = p.run;
        parsed.sweep = p.sweep;
    }
    if (!g.config.empty()) {
        ParsedConfig file = load_config(g.config, parsed.run);
        parsed.run = file.run;
        if (file.sweep) parsed.sweep = file.sweep;
        else if (parsed.sweep) parsed.sweep->base = parsed.run;
    }
    auto apply = [&](RunConfig& r) {
        if (g.n_sites) r.chain.n_sites = *g.n_sites;
        if (g.theta) r.initial.theta = wrap_phase(parse_real_or_throw(*g.theta, "--theta"));
        if (g.gamma) r.chain.dephasing_rate = *g.gamma;
        if (g.coherence) r.initial.coherence = *g.coherence;
        if (g.t_max) r.propagation.t_max = *g.t_max;
        if (g.dt) r.propagation.dt = *g.dt;
    };
    apply(parsed.run);
    if (parsed.sweep) apply(parsed.sweep->base);
    return parsed;
}

fs::path output_path(const GlobalOptions& g, const std::string& name) {
    fs::path p(name);
    if (p.is_relative()) p = fs::path(g.out_dir) / p;
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        if (ec) throw ConfigError(p.parent_path().string() + ": cannot create directory: " + ec.message());
    }
    return p;
}

template <class Write>
void write_file(const fs::path& path, Write&& write) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path.string() + ": cannot open for writing");
    write(out);
    out.flush();
    if (!out) throw ConfigError(path.string() + ": write failed");
}

int cmd_run(const GlobalOptions& g) {
    const RunConfig cfg = resolve(g).run;
    const RunResult result = execute(cfg);
    const fs::path traj = output_path(g, cfg.outputs.trajectory_csv);
    const fs::path summary = output_path(g, cfg.outputs.summary_csv);
    write_file(traj, [&](std::ostream& out) { write_trajectory_csv(out, result.trajectory); });
    write_file(summary, [&](std::ostream& out) { write_run_summary(out, result); });
    std::cerr << "wrote " << traj.string() << " and " << summary.string() << "\n";
    return 0;
}

struct SweepOptions {
    std::optional<std::string> parameter;
    std::optional<std::string> values;
    std::optional<std::string> range;
    std::optional<std::string> output;
};

int cmd_sweep(const GlobalOptions& g, const SweepOptions& s) {
    ParsedConfig parsed = resolve(g);
    SweepSpec sweep = parsed.sweep.value_or(SweepSpec{SweepParameter::Theta, {}, parsed.run});
    if (s.parameter) {
        if (*s.parameter == "theta") sweep.parameter = SweepParameter::Theta;
        else if (*s.parameter == "gamma") sweep.parameter = SweepParameter::Gamma;
        else throw ConfigError("--parameter: expected theta or gamma, got '" + *s.parameter + "'");
    }
    if (s.values && s.range) throw ConfigError("--values and --range are mutually exclusive");
    if (s.values) sweep.values = parse_real_list(*s.values, "--values");
    if (s.range) {
        const auto r = parse_real_list(*s.range, "--range");
        if (r.size() != 3 || r[2] < 1 || r[2] != static_cast<double>(static_cast<std::size_t>(r[2])))
            throw ConfigError("--range: expected start,stop,count with integer count >= 1");
        sweep.values = linear_grid(r[0], r[1], static_cast<std::size_t>(r[2]));
    }
    if (sweep.values.empty()) throw ConfigError("sweep: no grid (use a preset, a [sweep] section, --values or --range)");
    sweep.values = normalize_sweep_values(sweep.parameter, sweep.values);
    for (double v : sweep.values) sweep.point(v).validate();

    const auto rows = run_sweep(sweep, g.jobs);
    const fs::path out = output_path(g, s.output.value_or(sweep.base.outputs.summary_csv));
    write_file(out, [&](std::ostream& o) { write_sweep_csv(o, sweep.parameter, rows); });
    std::cerr << "wrote " << out.string() << " (" << rows.size() << " points)\n";
    return 0;
}

int cmd_analytic(const GlobalOptions& g, const std::optional<std::string>& mean_at,
                 const std::optional<std::string>& output) {
    const RunConfig cfg = resolve(g).run;
    const AnalyticReport report = analytic_report(cfg.chain, cfg.initial);
    if (!report.p_k_positive_finite)
        std::cerr << "warning: n_sites = " << cfg.chain.n_sites
                  << " is odd or < 4; k-space fields omitted, mean fields still reported\n";
    std::vector<double> times;
    if (mean_at) times = parse_real_list(*mean_at, "--mean-at");
    for (double t : times)
        if (t < 0.0) throw ConfigError("--mean-at: times must be >= 0");
    write_analytic_report(std::cout, report, times);
    if (output) {
        const fs::path path = output_path(g, *output);
        write_file(path, [&](std::ostream& out) { write_analytic_report(out, report, times); });
    }
    return 0;
}

struct CouplingOptions {
    bool focusing{false};
    double peak{1.0};
    double center_scale{1.0};
    std::optional<std::string> output;
};

int cmd_couplings(const GlobalOptions& g, const CouplingOptions& c) {
    const RunConfig cfg = resolve(g).run;
    std::vector<double> bonds;
    if (c.focusing) {
        bonds = focusing_profile(cfg.chain.n_sites, c.peak, c.center_scale).bonds;
    } else {
        cfg.chain.validate();
        bonds = bond_profile(cfg.chain.coupling, cfg.chain.n_sites);
    }
    if (c.output) {
        const fs::path path = output_path(g, *c.output);
        write_file(path, [&](std::ostream& out) { write_profile(out, bonds); });
    } else {
        write_profile(std::cout, bonds);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-directed exciton transport on dephasing chains"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    std::string preset_help = "Figure preset:";
    for (const auto& name : preset_names()) preset_help += " " + name;
    app.add_option("--config", g.config, "Config file ([section] key = value)")->check(CLI::ExistingFile);
    app.add_option("--preset", g.preset, preset_help);
    app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
    app.add_option("--jobs", g.jobs, "Worker threads for sweeps (0 = all cores)")->capture_default_str();
    app.add_option("--n-sites", g.n_sites, "Override chain length");
    app.add_option("--theta", g.theta, "Override initial phase (accepts pi/2 etc.)");
    app.add_option("--gamma", g.gamma, "Override dephasing rate");
    app.add_option("--coherence", g.coherence, "Override initial coherence a");
    app.add_option("--t-max", g.t_max, "Override final time");
    app.add_option("--dt", g.dt, "Override RK4 step");

    auto* run = app.add_subcommand("run", "Propagate one configuration, write trajectory and summary CSVs");

    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Run a theta or gamma sweep, one summary row per point");
    sweep->add_option("--parameter", sweep_opts.parameter, "theta or gamma");
    sweep->add_option("--values", sweep_opts.values, "Comma-separated grid values");
    sweep->add_option("--range", sweep_opts.range, "start,stop,count linear grid");
    sweep->add_option("--output", sweep_opts.output, "Output CSV (default: summary_csv of the config)");

    std::optional<std::string> mean_at, analytic_out;
    auto* analytic = app.add_subcommand("analytic", "Print closed-form predictions for the configuration");
    analytic->add_option("--mean-at", mean_at, "Comma-separated times for M(t)");
    analytic->add_option("--output", analytic_out, "Also write the report to this CSV");

    CouplingOptions coupling_opts;
    auto* couplings = app.add_subcommand("couplings", "Dump nearest-neighbour bonds V_{n,n+1}, one per line");
    couplings->add_flag("--focusing", coupling_opts.focusing, "Use the endpoint-focusing profile");
    couplings->add_option("--peak", coupling_opts.peak, "Largest bond of the focusing profile")->capture_default_str();
    couplings->add_option("--center-scale", coupling_opts.center_scale, "Centre bond relative to the arch edge bond")
        ->capture_default_str();
    couplings->add_option("--output", coupling_opts.output, "Write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) return cmd_run(g);
        if (*sweep) return cmd_sweep(g, sweep_opts);
        if (*analytic) return cmd_analytic(g, mean_at, analytic_out);
        if (*couplings) return cmd_couplings(g, coupling_opts);
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
