// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "phasedir/phasedir.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace phasedir;
using std::numbers::pi;

namespace {

// Worst conservation figures over every propagation in the suite (criterion 9).
double g_trace_drift = 0.0;
double g_hermiticity = 0.0;

Trajectory run(const ChainSpec& s, const InitialCondition& init, const PropagationConfig& cfg,
               const DensityObserver& observer = {}) {
    Trajectory t = propagate(s, init, cfg, observer);
    g_trace_drift = std::max(g_trace_drift, t.max_trace_drift);
    g_hermiticity = std::max(g_hermiticity, t.max_hermiticity_residual);
    return t;
}

ChainSpec nn_chain(std::size_t n, double gamma = 0.0, double v = 1.0) {
    ChainSpec s;
    s.n_sites = n;
    s.coupling = NearestNeighbor{v};
    s.dephasing_rate = gamma;
    return s;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++g_failures;
    std::printf("%s  %2d  %-28s %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double final_p_left(const ChainSpec& s, double theta, double t_max = 12.0) {
    return run(s, InitialCondition::pure(theta), PropagationConfig{t_max, 0.005, 2400}).p_left.back();
}

Outcome directionality_optimum() {
    const auto start = std::chrono::steady_clock::now();
    const double pl = final_p_left(nn_chain(60), pi / 2);
    const double elapsed = seconds_since(start);
    const double target = p_k_positive_limit(pi / 2);
    const bool ok = pl >= 0.80 && pl <= 0.84 && std::abs(pl - target) <= 0.02 && elapsed < 5.0;
    return {ok, fmt("P_L(12) = %.6f, 1/2 + 1/pi = %.6f, %.2f s", pl, target, elapsed)};
}

Outcome phase_curve() {
    const auto start = std::chrono::steady_clock::now();
    RunConfig base;
    base.chain = nn_chain(60);
    base.propagation = PropagationConfig{12.0, 0.005, 2400};
    const auto rows = run_sweep(SweepSpec{SweepParameter::Theta, linear_grid(-pi / 2, pi / 2, 19), base}, 0);
    const double elapsed = seconds_since(start);
    double worst = 0.0;
    bool increasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        worst = std::max(worst, std::abs(rows[i].p_left - p_k_positive_limit(rows[i].value)));
        if (i > 0 && rows[i].p_left <= rows[i - 1].p_left) increasing = false;
    }
    return {worst <= 0.02 && increasing && elapsed < 60.0,
            fmt("max |P_L - (1/2 + sin(theta)/pi)| = %.4g, increasing = %s, %.2f s", worst, increasing ? "yes" : "no",
                elapsed)};
}

double mean_error(double gamma, double t_max) {
    const ChainSpec s = nn_chain(120, gamma);
    const InitialCondition init = InitialCondition::pure(pi / 2);
    const AnalyticReport r = analytic_report(s, init);
    const Trajectory tr = run(s, init, PropagationConfig{t_max, 0.005, 1});
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) worst = std::max(worst, std::abs(tr.mean[i] - r.mean(tr.times[i])));
    return worst;
}

Outcome mean_exactness() {
    const double free = mean_error(0.0, 12.0);
    const double damped = mean_error(0.3, 12.0);
    return {free <= 1e-6 && damped <= 1e-6, fmt("max error gamma=0: %.3g, gamma=0.3: %.3g", free, damped)};
}

Outcome long_time_limit() {
    const ChainSpec s = nn_chain(120, 0.3);
    const InitialCondition init = InitialCondition::pure(pi / 2);
    const Trajectory tr = run(s, init, PropagationConfig{30.0, 0.005, 6000});
    const double limit = *analytic_report(s, init).long_time_mean;
    const double err = std::abs(tr.mean.back() - limit);
    return {err <= 1e-3, fmt("M(30) = %.6f, limit = %.6f, |diff| = %.3g", tr.mean.back(), limit, err)};
}

Outcome phi_decay() {
    double worst = 0.0;
    for (double gamma : {0.0, 0.1, 0.5}) {
        const Trajectory tr = run(nn_chain(120, gamma), InitialCondition::pure(pi / 4), PropagationConfig{10.0, 0.005, 1});
        for (std::size_t i = 0; i < tr.size(); ++i)
            worst = std::max(worst, std::abs(tr.phi[i] + std::sin(pi / 4) * std::exp(-gamma * tr.times[i])));
    }
    return {worst <= 1e-6, fmt("max |phi - (-sin(theta) e^{-gamma t})| = %.3g", worst)};
}

Outcome gamma_monotone() {
    const double gammas[] = {0.0, 0.1, 0.2, 0.3, 0.5};
    std::string values;
    double prev = 2.0;
    bool ok = true;
    for (double g : gammas) {
        ChainSpec s = nn_chain(60, g);
        s.coupling = PowerLaw{1.0, 3.0};
        const double pl = final_p_left(s, pi / 2);
        ok = ok && pl < prev;
        prev = pl;
        values += fmt(" %.4f", pl);
    }
    return {ok, "P_L(12) for gamma = 0, 0.1, 0.2, 0.3, 0.5:" + values};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng{7};
    std::uniform_real_distribution<double> unit(0.05, 0.95), phase(-pi, pi);
    double worst = 0.0;
    for (std::size_t n : {2u, 8u, 30u}) {
        for (int trial = 0; trial < 3; ++trial) {
            ChainSpec s;
            s.n_sites = n;
            s.coupling = trial == 0 ? CouplingModel{NearestNeighbor{1.0}} : CouplingModel{PowerLaw{1.0, 3.0}};
            const std::size_t left = 1 + std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
            const double rho_l = unit(rng);
            const double theta = phase(rng);
            const InitialCondition init{left, rho_l, 1.0 - rho_l, std::sqrt(rho_l * (1.0 - rho_l)), theta};

            const verify::SpectralPropagator oracle(build_hamiltonian(s));
            const verify::StateVector psi0 = verify::two_site_state(n, left, rho_l, theta);
            run(s, init, PropagationConfig{20.0, 0.0025, 400}, [&](const DensityMatrix& d) {
                const Eigen::MatrixXcd exact = oracle.evolve(psi0, d.time).density();
                worst = std::max(worst, (d.rho - exact).cwiseAbs().maxCoeff());
            });
        }
    }
    return {worst <= 1e-8, fmt("max entrywise |rho - oracle| = %.3g (dt = 0.0025, t <= 20)", worst)};
}

Outcome analytic_consistency() {
    const double thetas[] = {-pi / 2, -pi / 4, 0.0, pi / 4, pi / 2, 1.0, -2.5, pi};
    double pk = 0.0, norm = 0.0, vel = 0.0;
    for (std::size_t n : {4u, 8u, 60u, 200u}) {
        const KSpectrum spec = k_spectrum(n, 0.0, 1.0);
        for (double theta : thetas) {
            const auto brute = verify::brute_force_pk(n, theta);
            double positive = 0.0, total = 0.0, current = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (spec.k[i] > 0.0) positive += brute[i];
                total += brute[i];
                current += brute[i] * spec.velocity[i];
            }
            pk = std::max(pk, std::abs(p_k_positive(n, theta) - positive));
            norm = std::max(norm, std::abs(total - 1.0));
            vel = std::max(vel, std::abs(current - initial_velocity(theta, 1.0)));
        }
    }
    return {pk <= 1e-12 && norm <= 1e-12 && vel <= 1e-12,
            fmt("P_k>0 %.2g, sum P_k %.2g, sum P_k v_k %.2g", pk, norm, vel)};
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Outcome symmetry_suite() {
    const PropagationConfig cfg{12.0, 0.005, 40};
    double mirror = 0.0, zero = 0.0, sign = 0.0;
    for (bool power_law : {false, true}) {
        for (double gamma : {0.0, 0.3}) {
            ChainSpec s = nn_chain(60, gamma);
            ChainSpec flipped = nn_chain(60, gamma, -1.0);
            if (power_law) {
                s.coupling = PowerLaw{1.0, 3.0};
                flipped.coupling = PowerLaw{-1.0, 3.0};
            }
            for (double theta : {pi / 4, pi / 2}) {
                const Trajectory plus = run(s, InitialCondition::pure(theta), cfg);
                const Trajectory minus = run(s, InitialCondition::pure(-theta), cfg);
                const Trajectory neg_v = run(flipped, InitialCondition::pure(theta), cfg);
                for (std::size_t i = 0; i < plus.size(); ++i) {
                    std::vector<double> mirrored(minus.populations[i].rbegin(), minus.populations[i].rend());
                    mirror = std::max(mirror, max_abs_diff(plus.populations[i], mirrored));
                    sign = std::max(sign, max_abs_diff(neg_v.populations[i], minus.populations[i]));
                }
            }
            const Trajectory flat = run(s, InitialCondition::pure(0.0), cfg);
            for (const auto& p : flat.populations)
                zero = std::max(zero, max_abs_diff(p, std::vector<double>(p.rbegin(), p.rend())));
        }
    }
    const bool ok = mirror <= 1e-9 && zero <= 1e-10 && sign <= 1e-9 && g_trace_drift <= 1e-10 && g_hermiticity <= 1e-12;
    return {ok, fmt("mirror %.2g, theta=0 %.2g, V sign %.2g, trace drift %.2g, hermiticity %.2g (all runs)", mirror, zero,
                    sign, g_trace_drift, g_hermiticity)};
}

Outcome engineered_focusing() {
    const PropagationConfig cfg{30.0, 0.005, 4};
    const InitialCondition init = InitialCondition::pure(-pi / 2);
    auto end_peak = [&](const ChainSpec& s, double& final_mean) {
        double peak = 0.0;
        final_mean = run(s, init, cfg, [&](const DensityMatrix& d) {
                         double last5 = 0.0;
                         for (Eigen::Index n = d.rho.rows() - 5; n < d.rho.rows(); ++n) last5 += d.rho(n, n).real();
                         peak = std::max(peak, last5);
                     }).mean.back();
        return peak;
    };
    ChainSpec focus = nn_chain(60);
    focus.coupling = focusing_profile(60, 1.0);
    double focus_mean = 0.0, uniform_mean = 0.0;
    const double focused = end_peak(focus, focus_mean);
    const double uniform = end_peak(nn_chain(60), uniform_mean);
    const double m0 = 30.5;
    const bool ok = focused > uniform && focus_mean > m0;
    return {ok, fmt("max P(sites 56-60): focusing %.4f vs uniform %.4f; M(30) = %.3f (M(0) = %.1f)", focused, uniform,
                    focus_mean, m0)};
}

}  // namespace

int main() {
    report(1, "directionality optimum", directionality_optimum);
    report(2, "phase curve", phase_curve);
    report(3, "mean-position exactness", mean_exactness);
    report(4, "long-time mean", long_time_limit);
    report(5, "phi decay", phi_decay);
    report(6, "monotone dephasing loss", gamma_monotone);
    report(7, "oracle equivalence", oracle_equivalence);
    report(8, "analytic self-consistency", analytic_consistency);
    report(9, "symmetry and conservation", symmetry_suite);
    report(10, "engineered focusing", engineered_focusing);
    std::printf("%d of 10 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
