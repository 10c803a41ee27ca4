// config.hpp: run/sweep configuration, the [section] key = value file format, figure presets
//
//   [chain]       n_sites, epsilon, coupling (power_law | nearest_neighbor | custom | focusing),
//                 strength, exponent, profile (custom), peak_strength and center_scale (focusing),
//                 boundary (open | periodic), dephasing_rate
//   [initial]     left_site, rho_l, rho_r, coherence, theta
//   [propagation] t_max, dt, output_stride, split_after
//   [outputs]     trajectory_csv, summary_csv
//   [sweep]       parameter (theta | gamma), values = v1, v2, ...  or  start, stop, count
//
// Real values accept plain numbers and multiples of pi: "pi/2", "-pi/4", "3*pi/4", "0.5*pi".
// '#' and ';' start comments.

#pragma once

#include "phasedir/couplings.hpp"
#include "phasedir/csv.hpp"
#include "phasedir/dynamics.hpp"
#include "phasedir/errors.hpp"
#include "phasedir/model.hpp"

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace phasedir {

struct OutputPaths {
    std::string trajectory_csv{"trajectory.csv"};
    std::string summary_csv{"summary.csv"};
};

struct RunConfig {
    ChainSpec chain;
    InitialCondition initial;
    PropagationConfig propagation;
    OutputPaths outputs;
    std::optional<std::size_t> split_after;  // 1-based; default N/2

    std::size_t resolved_split() const { return split_after.value_or(chain.n_sites / 2); }

    void validate() const {
        chain.validate();
        initial.validate(chain.n_sites);
        step_count(propagation);
        const std::size_t split = resolved_split();
        if (split < 1 || split >= chain.n_sites)
            throw BoundsError("propagation: split_after " + std::to_string(split) + " outside [1, " +
                              std::to_string(chain.n_sites - 1) + "]");
        check_stability(build_hamiltonian(chain), chain.dephasing_rate, propagation);
    }
};

enum class SweepParameter { Theta, Gamma };

inline std::string parameter_name(SweepParameter p) { return p == SweepParameter::Theta ? "theta" : "gamma"; }

struct SweepSpec {
    SweepParameter parameter{SweepParameter::Theta};
    std::vector<double> values;
    RunConfig base;

    // Base config with the swept parameter set to `value`.
    RunConfig point(double value) const {
        RunConfig cfg = base;
        if (parameter == SweepParameter::Theta) cfg.initial.theta = value;
        else cfg.chain.dephasing_rate = value;
        return cfg;
    }
};

// count points from start to stop inclusive; count = 1 yields {start}.
inline std::vector<double> linear_grid(double start, double stop, std::size_t count) {
    if (count < 1) throw InvalidInput("sweep: count must be >= 1");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = count == 1 ? start
                            : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

// Folds theta values into (-pi, pi]; rejects negative rates.
inline std::vector<double> normalize_sweep_values(SweepParameter p, std::vector<double> values) {
    if (values.empty()) throw InvalidInput("sweep: no values");
    for (double& v : values) {
        if (!std::isfinite(v)) throw InvalidInput("sweep: values must be finite");
        if (p == SweepParameter::Theta) v = wrap_phase(v);
        else if (v < 0.0) throw InvalidInput("sweep: gamma values must be >= 0");
    }
    return values;
}

// ------------------------------------------------------------------ value parsing

// Number or multiple of pi; nullopt if the text is neither.
inline std::optional<double> parse_real(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    const auto pi_pos = text.find("pi");
    if (pi_pos == std::string_view::npos) return parse_double(text);

    double sign = 1.0;
    std::string_view head = trim(text.substr(0, pi_pos));
    std::string_view tail = trim(text.substr(pi_pos + 2));
    if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
        if (head.front() == '-') sign = -1.0;
        head = trim(head.substr(1));
    }
    double coef = 1.0;
    if (!head.empty()) {
        if (head.back() != '*') return std::nullopt;
        const auto c = parse_double(head.substr(0, head.size() - 1));
        if (!c) return std::nullopt;
        coef = *c;
    }
    double denom = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') return std::nullopt;
        const auto d = parse_double(tail.substr(1));
        if (!d || *d == 0.0) return std::nullopt;
        denom = *d;
    }
    return sign * coef * std::numbers::pi / denom;
}

// ------------------------------------------------------------------ file format

namespace detail {

struct Entry {
    std::string value;
    std::size_t line{0};
};

// section -> key -> entry, keys consumed as they are read so leftovers can be reported.
class ConfigTable {
public:
    ConfigTable(std::istream& in, std::string source) : source_(std::move(source)) {
        std::string line;
        std::string section;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto comment = line.find_first_of("#;");
            if (comment != std::string::npos) line.erase(comment);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            const auto last = line.find_last_not_of(" \t\r");
            std::string_view body(line.data() + first, last - first + 1);

            if (body.front() == '[') {
                if (body.back() != ']') fail(line_no, "malformed section header");
                section = std::string(body.substr(1, body.size() - 2));
                if (!known_sections().contains(section)) fail(line_no, "unknown section [" + section + "]");
                entries_[section];
                continue;
            }
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
            if (section.empty()) fail(line_no, "key outside of any [section]");
            std::string key(body.substr(0, eq));
            std::string value(body.substr(eq + 1));
            key.erase(key.find_last_not_of(" \t") + 1);
            value.erase(0, value.find_first_not_of(" \t"));
            if (key.empty()) fail(line_no, "empty key");
            auto& bucket = entries_[section];
            if (bucket.contains(key)) fail(line_no, "duplicate key '" + key + "' in [" + section + "]");
            bucket[key] = Entry{value, line_no};
        }
    }

    bool has(const std::string& section, const std::string& key) const {
        auto s = entries_.find(section);
        return s != entries_.end() && s->second.contains(key);
    }

    bool has_section(const std::string& section) const { return entries_.contains(section); }

    std::optional<Entry> take(const std::string& section, const std::string& key) {
        auto s = entries_.find(section);
        if (s == entries_.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        Entry e = k->second;
        s->second.erase(k);
        return e;
    }

    template <class Apply>
    void real(const std::string& section, const std::string& key, Apply&& apply) {
        if (auto e = take(section, key)) {
            const auto v = parse_real(e->value);
            if (!v) fail(e->line, "[" + section + "] " + key + ": expected a real number, got '" + e->value + "'");
            apply(*v);
        }
    }

    template <class Apply>
    void count(const std::string& section, const std::string& key, Apply&& apply) {
        if (auto e = take(section, key)) {
            const auto v = parse_double(e->value);
            if (!v || *v < 0.0 || std::floor(*v) != *v)
                fail(e->line, "[" + section + "] " + key + ": expected a non-negative integer, got '" + e->value + "'");
            apply(static_cast<std::size_t>(*v));
        }
    }

    template <class Apply>
    void text(const std::string& section, const std::string& key, Apply&& apply) {
        if (auto e = take(section, key)) apply(e->value, e->line);
    }

    // Throws on the first key nobody consumed.
    void reject_leftovers() const {
        std::optional<std::pair<std::size_t, std::string>> first;
        for (const auto& [section, keys] : entries_)
            for (const auto& [key, entry] : keys)
                if (!first || entry.line < first->first) first = {entry.line, "unknown key '" + key + "' in [" + section + "]"};
        if (first) fail(first->first, first->second);
    }

    [[noreturn]] void fail(std::size_t line, const std::string& what) const {
        throw ConfigError(source_ + ":" + std::to_string(line) + ": " + what);
    }

    const std::string& source() const { return source_; }

private:
    static const std::set<std::string>& known_sections() {
        static const std::set<std::string> names{"chain", "initial", "propagation", "outputs", "sweep"};
        return names;
    }

    std::string source_;
    std::map<std::string, std::map<std::string, Entry>> entries_;
};

inline std::vector<double> parse_list(ConfigTable& table, const Entry& e, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_real(item);
        if (!v) table.fail(e.line, what + ": bad list element '" + item + "'");
        out.push_back(*v);
    }
    if (out.empty()) table.fail(e.line, what + ": empty list");
    return out;
}

// Fills `cfg` from the table; relative profile paths resolve against `base_dir`.
inline void apply_run_sections(ConfigTable& t, RunConfig& cfg, const std::filesystem::path& base_dir) {
    auto& chain = cfg.chain;
    t.count("chain", "n_sites", [&](std::size_t v) { chain.n_sites = v; });
    t.real("chain", "epsilon", [&](double v) { chain.epsilon = v; });
    t.real("chain", "dephasing_rate", [&](double v) { chain.dephasing_rate = v; });
    t.text("chain", "boundary", [&](const std::string& v, std::size_t line) {
        if (v == "open") chain.boundary = Boundary::Open;
        else if (v == "periodic") chain.boundary = Boundary::Periodic;
        else t.fail(line, "[chain] boundary: expected open or periodic, got '" + v + "'");
    });

    std::optional<double> strength, exponent, peak, center_scale;
    std::optional<Entry> profile_path;
    t.real("chain", "strength", [&](double v) { strength = v; });
    t.real("chain", "exponent", [&](double v) { exponent = v; });
    t.real("chain", "peak_strength", [&](double v) { peak = v; });
    t.real("chain", "center_scale", [&](double v) { center_scale = v; });
    profile_path = t.take("chain", "profile");

    std::string kind = coupling_name(chain.coupling);
    std::size_t kind_line = 0;
    t.text("chain", "coupling", [&](const std::string& v, std::size_t line) {
        kind = v;
        kind_line = line;
    });
    try {
        if (kind == "power_law") {
            PowerLaw m = std::holds_alternative<PowerLaw>(chain.coupling) ? std::get<PowerLaw>(chain.coupling) : PowerLaw{};
            if (strength) m.strength = *strength;
            if (exponent) m.exponent = *exponent;
            chain.coupling = m;
        } else if (kind == "nearest_neighbor") {
            NearestNeighbor m = std::holds_alternative<NearestNeighbor>(chain.coupling)
                                    ? std::get<NearestNeighbor>(chain.coupling)
                                    : NearestNeighbor{};
            if (strength) m.strength = *strength;
            chain.coupling = m;
        } else if (kind == "custom") {
            if (profile_path) {
                std::filesystem::path p(profile_path->value);
                if (p.is_relative()) p = base_dir / p;
                chain.coupling = load_profile(p.string());
            } else if (!std::holds_alternative<Custom>(chain.coupling)) {
                t.fail(kind_line, "[chain] coupling = custom requires 'profile = <path>'");
            }
            profile_path.reset();
        } else if (kind == "focusing") {
            chain.coupling = focusing_profile(chain.n_sites, peak.value_or(1.0), center_scale.value_or(1.0));
            peak.reset();
            center_scale.reset();
        } else {
            t.fail(kind_line, "[chain] coupling: expected power_law, nearest_neighbor, custom or focusing, got '" + kind + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidInput& e) {
        t.fail(kind_line, std::string("[chain] coupling: ") + e.what());
    }
    if (profile_path) t.fail(profile_path->line, "[chain] profile is only valid with coupling = custom");
    if (peak || center_scale) t.fail(kind_line, "[chain] peak_strength/center_scale are only valid with coupling = focusing");
    if (strength && kind != "power_law" && kind != "nearest_neighbor")
        t.fail(kind_line, "[chain] strength is only valid with power_law or nearest_neighbor coupling");
    if (exponent && kind != "power_law") t.fail(kind_line, "[chain] exponent is only valid with coupling = power_law");

    auto& init = cfg.initial;
    t.count("initial", "left_site", [&](std::size_t v) { init.left_site = v; });
    t.real("initial", "rho_l", [&](double v) { init.rho_l = v; });
    t.real("initial", "rho_r", [&](double v) { init.rho_r = v; });
    t.real("initial", "coherence", [&](double v) { init.coherence = v; });
    t.real("initial", "theta", [&](double v) { init.theta = wrap_phase(v); });

    auto& prop = cfg.propagation;
    t.real("propagation", "t_max", [&](double v) { prop.t_max = v; });
    t.real("propagation", "dt", [&](double v) { prop.dt = v; });
    t.count("propagation", "output_stride", [&](std::size_t v) { prop.output_stride = v; });
    t.count("propagation", "split_after", [&](std::size_t v) { cfg.split_after = v; });

    t.text("outputs", "trajectory_csv", [&](const std::string& v, std::size_t) { cfg.outputs.trajectory_csv = v; });
    t.text("outputs", "summary_csv", [&](const std::string& v, std::size_t) { cfg.outputs.summary_csv = v; });
}

inline std::optional<SweepSpec> apply_sweep_section(ConfigTable& t, const RunConfig& base) {
    if (!t.has_section("sweep")) return std::nullopt;
    SweepSpec sweep;
    sweep.base = base;
    t.text("sweep", "parameter", [&](const std::string& v, std::size_t line) {
        if (v == "theta") sweep.parameter = SweepParameter::Theta;
        else if (v == "gamma") sweep.parameter = SweepParameter::Gamma;
        else t.fail(line, "[sweep] parameter: expected theta or gamma, got '" + v + "'");
    });
    std::optional<double> start, stop;
    std::optional<std::size_t> count;
    t.real("sweep", "start", [&](double v) { start = v; });
    t.real("sweep", "stop", [&](double v) { stop = v; });
    t.count("sweep", "count", [&](std::size_t v) { count = v; });
    std::optional<std::size_t> line;
    if (auto e = t.take("sweep", "values")) {
        if (start || stop || count) t.fail(e->line, "[sweep] give either values or start/stop/count, not both");
        sweep.values = parse_list(t, *e, "[sweep] values");
        line = e->line;
    } else if (start && stop && count) {
        if (*count < 1) throw ConfigError(t.source() + ": [sweep] count must be >= 1");
        sweep.values = linear_grid(*start, *stop, *count);
    } else {
        throw ConfigError(t.source() + ": [sweep] needs values or all of start, stop, count");
    }
    try {
        sweep.values = normalize_sweep_values(sweep.parameter, std::move(sweep.values));
    } catch (const InvalidInput& e) {
        throw ConfigError(t.source() + (line ? ":" + std::to_string(*line) : std::string()) + ": " + e.what());
    }
    return sweep;
}

}  // namespace detail

struct ParsedConfig {
    RunConfig run;
    std::optional<SweepSpec> sweep;
};

/// Parses a config on top of `defaults`. Keys absent from the file keep the
/// default. Throws ConfigError with "source:line: ..." diagnostics.
inline ParsedConfig parse_config(std::istream& in, const std::string& source = "<config>",
                                 const RunConfig& defaults = {}, const std::filesystem::path& base_dir = ".") {
    detail::ConfigTable table(in, source);
    ParsedConfig out;
    out.run = defaults;
    detail::apply_run_sections(table, out.run, base_dir);
    out.sweep = detail::apply_sweep_section(table, out.run);
    table.reject_leftovers();
    return out;
}

inline ParsedConfig load_config(const std::string& path, const RunConfig& defaults = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    return parse_config(in, path, defaults, std::filesystem::path(path).parent_path());
}

// ------------------------------------------------------------------ presets

struct Preset {
    RunConfig run;
    std::optional<SweepSpec> sweep;
};

inline std::vector<std::string> preset_names() {
    return {"fig1a", "fig1b", "fig1c", "fig1d", "fig1e", "fig1f", "fig1g",
            "fig1h", "fig1i", "fig1j", "fig2",  "fig2-inset", "fig3"};
}

/// Figure set-ups: N = 60, excited pair 30/31, pure initial state, t_max = 12,
/// open chain with 1/r^3 coupling. fig1a..e: theta = pi/2, pi/4, 0, -pi/4,
/// -pi/2 at gamma = 0; fig1f..j the same at gamma = 0.3. fig2 sweeps 19 theta
/// values over [-pi/2, pi/2]; fig2-inset sweeps gamma at theta = pi/2. fig3 uses
/// the focusing profile with theta = -pi/2.
inline Preset make_preset(const std::string& name) {
    using std::numbers::pi;
    Preset p;
    RunConfig& r = p.run;
    r.chain.n_sites = 60;
    r.chain.coupling = PowerLaw{1.0, 3.0};
    r.chain.boundary = Boundary::Open;
    r.initial = InitialCondition::pure(0.0);
    r.propagation = PropagationConfig{12.0, 0.005, 20};

    static const double fig1_theta[] = {pi / 2, pi / 4, 0.0, -pi / 4, -pi / 2};
    if (name.size() == 5 && name.starts_with("fig1") && name[4] >= 'a' && name[4] <= 'j') {
        const int panel = name[4] - 'a';
        r.initial.theta = fig1_theta[panel % 5];
        r.chain.dephasing_rate = panel < 5 ? 0.0 : 0.3;
        r.outputs = {name + "_trajectory.csv", name + "_summary.csv"};
        return p;
    }
    if (name == "fig2") {
        r.initial.theta = pi / 2;
        r.outputs = {"fig2_trajectory.csv", "fig2_summary.csv"};
        p.sweep = SweepSpec{SweepParameter::Theta, linear_grid(-pi / 2, pi / 2, 19), r};
        return p;
    }
    if (name == "fig2-inset") {
        r.initial.theta = pi / 2;
        r.outputs = {"fig2-inset_trajectory.csv", "fig2-inset_summary.csv"};
        p.sweep = SweepSpec{SweepParameter::Gamma, {0.0, 0.1, 0.2, 0.3, 0.5}, r};
        return p;
    }
    if (name == "fig3") {
        r.chain.coupling = focusing_profile(60, 1.0);
        r.initial.theta = -pi / 2;
        r.propagation = PropagationConfig{30.0, 0.005, 20};
        r.outputs = {"fig3_trajectory.csv", "fig3_summary.csv"};
        return p;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace phasedir
