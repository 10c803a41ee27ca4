// runner.hpp: single runs, order-preserving parallel sweeps, CSV emission

#pragma once

#include "phasedir/analytics.hpp"
#include "phasedir/config.hpp"
#include "phasedir/csv.hpp"
#include "phasedir/dynamics.hpp"
#include "phasedir/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace phasedir {

struct RunResult {
    Trajectory trajectory;
    AnalyticReport report;
};

inline RunResult execute(const RunConfig& cfg, const DensityObserver& observer = {}) {
    cfg.validate();
    RunResult out;
    out.report = analytic_report(cfg.chain, cfg.initial);
    const HamiltonianMatrix h = build_hamiltonian(cfg.chain);
    const DensityMatrix rho0 = build_initial_density(cfg.chain, cfg.initial);
    out.trajectory = propagate(h, cfg.chain.dephasing_rate, rho0, cfg.propagation, cfg.resolved_split(), observer);
    return out;
}

// t, M, P_L, P_R, phi, rho_1 .. rho_N
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    CsvWriter csv(out);
    std::vector<std::string> names{"t", "M", "P_L", "P_R", "phi"};
    for (std::size_t n = 1; n <= traj.n_sites; ++n) names.push_back("rho_" + std::to_string(n));
    csv.header(names);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        csv.cell(traj.times[i]).cell(traj.mean[i]).cell(traj.p_left[i]).cell(traj.p_right[i]).cell(traj.phi[i]);
        for (double p : traj.populations[i]) csv.cell(p);
        csv.end_row();
    }
}

namespace detail {

inline void optional_cell(CsvWriter& csv, const std::optional<double>& v, std::string_view missing = "") {
    if (v) csv.cell(*v);
    else csv.cell(missing);
}

}  // namespace detail

// Final-time observables next to the closed-form predictions. Empty cells mark
// k-space fields that do not exist for odd N; "unbounded" marks a long-time
// mean that drifts forever (gamma = 0).
inline void write_run_summary(std::ostream& out, const RunResult& r) {
    CsvWriter csv(out);
    csv.header({"t", "M", "P_L", "P_R", "phi", "M_closed_form", "phi_closed_form", "p_k_positive",
                "p_k_positive_limit", "v_initial", "phi0", "long_time_mean"});
    const Trajectory& tr = r.trajectory;
    const double t = tr.times.back();
    csv.cell(t).cell(tr.mean.back()).cell(tr.p_left.back()).cell(tr.p_right.back()).cell(tr.phi.back());
    csv.cell(r.report.mean(t)).cell(r.report.mean.phi(t));
    detail::optional_cell(csv, r.report.p_k_positive_finite);
    csv.cell(r.report.p_k_positive_limit).cell(r.report.v_initial).cell(r.report.phi0);
    detail::optional_cell(csv, r.report.long_time_mean, "unbounded");
    csv.end_row();
}

// ------------------------------------------------------------------ sweeps

struct SweepRow {
    double value{0.0};
    double p_left{0.0};
    double mean{0.0};
    double p_k_positive_limit{0.0};
    std::optional<double> long_time_mean;
};

inline SweepRow sweep_row(double value, const RunResult& r) {
    return SweepRow{value, r.trajectory.p_left.back(), r.trajectory.mean.back(), r.report.p_k_positive_limit,
                    r.report.long_time_mean};
}

/// Evaluates every grid point on `jobs` worker threads (0 = hardware
/// concurrency). Rows come back in grid order. If any point fails, all points
/// still run, then the failures are rethrown together: NumericalFailure if any
/// point failed numerically, otherwise InvalidInput.
inline std::vector<SweepRow> run_sweep(const SweepSpec& sweep, unsigned jobs = 1) {
    const std::vector<double> values = normalize_sweep_values(sweep.parameter, sweep.values);
    const std::size_t count = values.size();
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));

    std::vector<std::optional<SweepRow>> rows(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                rows[i] = sweep_row(values[i], execute(sweep.point(values[i])));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    std::string messages;
    bool numerical = false;
    for (std::size_t i = 0; i < count; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const NumericalFailure& e) {
            numerical = true;
            messages += "\n  " + parameter_name(sweep.parameter) + " = " + format_number(values[i]) + ": " + e.what();
        } catch (const std::exception& e) {
            messages += "\n  " + parameter_name(sweep.parameter) + " = " + format_number(values[i]) + ": " + e.what();
        }
    }
    if (!messages.empty()) {
        const std::string what = "sweep failed at:" + messages;
        if (numerical) throw NumericalFailure(what);
        throw InvalidInput(what);
    }

    std::vector<SweepRow> out;
    out.reserve(count);
    for (auto& r : rows) out.push_back(*r);
    return out;
}

inline void write_sweep_csv(std::ostream& out, SweepParameter parameter, const std::vector<SweepRow>& rows) {
    CsvWriter csv(out);
    csv.header({parameter_name(parameter), "P_L", "M", "p_k_positive_limit", "long_time_mean"});
    for (const auto& r : rows) {
        csv.cell(r.value).cell(r.p_left).cell(r.mean).cell(r.p_k_positive_limit);
        detail::optional_cell(csv, r.long_time_mean, "unbounded");
        csv.end_row();
    }
}

// ------------------------------------------------------------------ analytic report

// key,value lines; k-space rows only when present. `mean_at` adds M(t) rows.
inline void write_analytic_report(std::ostream& out, const AnalyticReport& r, const std::vector<double>& mean_at = {}) {
    CsvWriter csv(out);
    csv.header({"field", "value"});
    auto row = [&](std::string_view key, double v) { csv.cell(key).cell(v).end_row(); };
    row("n_sites", static_cast<double>(r.n_sites));
    row("theta", r.theta);
    row("coherence", r.coherence);
    if (r.p_k_positive_finite) row("p_k_positive_finite", *r.p_k_positive_finite);
    row("p_k_positive_limit", r.p_k_positive_limit);
    row("v_initial", r.v_initial);
    row("phi0", r.phi0);
    row("mean_m0", r.mean.m0);
    row("mean_v", r.mean.v);
    row("mean_gamma", r.mean.gamma);
    csv.cell("long_time_mean");
    detail::optional_cell(csv, r.long_time_mean, "unbounded");
    csv.end_row();
    if (r.k_values && r.p_k) {
        for (std::size_t i = 0; i < r.k_values->size(); ++i)
            csv.cell("p_k[" + format_number((*r.k_values)[i]) + "]").cell((*r.p_k)[i]).end_row();
    }
    for (double t : mean_at) csv.cell("M(" + format_number(t) + ")").cell(r.mean(t)).end_row();
}

}  // namespace phasedir
