// analytics.hpp: closed-form results for the nearest-neighbour chain
//
// Bloch states phi_k = N^{-1/2} sum_n e^{ikn} |n>, k = 2 pi j / N, j = -N/2 .. N/2-1,
// E_k = eps + 2 V cos k, v_k = -2 V sin k. For the two-site initial block with
// rho_l + rho_r = 1 and coherence a e^{-i theta}, the weight of Bloch state k is
// (1 + 2 a cos(k - theta)) / N; a = 1/2 is the pure state.

#pragma once

#include "phasedir/errors.hpp"
#include "phasedir/model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace phasedir {

/// Relates theta outside [-pi/2, pi/2] to its partner inside: pi/2 + x maps
/// to pi/2 - x (and symmetrically for negative angles). Both phases give the
/// same sin(theta), hence the same directionality and mean-position drift.
/// Never applied implicitly.
inline double fold_phase(double theta) {
    const double t = wrap_phase(theta);
    constexpr double half_pi = std::numbers::pi / 2.0;
    if (t > half_pi) return std::numbers::pi - t;
    if (t < -half_pi) return -std::numbers::pi - t;
    return t;
}

struct KSpectrum {
    std::vector<double> k;
    std::vector<double> energy;
    std::vector<double> velocity;

    std::size_t size() const { return k.size(); }
};

inline void require_even_sites(std::size_t n_sites, const char* who) {
    if (n_sites < 2 || n_sites % 2 != 0)
        throw InvalidInput(std::string(who) + ": k-space results need an even n_sites >= 2, got " +
                           std::to_string(n_sites));
}

// k in increasing order.
inline std::vector<double> k_grid(std::size_t n_sites) {
    require_even_sites(n_sites, "k_grid");
    const auto n = static_cast<long>(n_sites);
    std::vector<double> k;
    k.reserve(n_sites);
    for (long j = -n / 2; j < n / 2; ++j) k.push_back(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    return k;
}

inline KSpectrum k_spectrum(std::size_t n_sites, double epsilon, double v) {
    KSpectrum s;
    s.k = k_grid(n_sites);
    for (double k : s.k) {
        s.energy.push_back(epsilon + 2.0 * v * std::cos(k));
        s.velocity.push_back(-2.0 * v * std::sin(k));
    }
    return s;
}

// P_k on the k_grid ordering.
inline std::vector<double> initial_k_distribution(std::size_t n_sites, double theta, double coherence = 0.5) {
    const double t = wrap_phase(theta);
    std::vector<double> p;
    for (double k : k_grid(n_sites)) p.push_back((1.0 + 2.0 * coherence * std::cos(k - t)) / static_cast<double>(n_sites));
    return p;
}

// Sum_k P_k v_k.
inline double initial_velocity(double theta, double v, double coherence = 0.5) {
    return -2.0 * coherence * v * std::sin(theta);
}

// Weight on k = 2 pi j / N with j = 1 .. N/2 - 1 (k = 0 and k = -pi excluded).
inline double p_k_positive(std::size_t n_sites, double theta, double coherence = 0.5) {
    require_even_sites(n_sites, "p_k_positive");
    if (n_sites < 4) throw InvalidInput("p_k_positive: n_sites must be >= 4");
    const double n = static_cast<double>(n_sites);
    return 0.5 - 1.0 / n + 2.0 * coherence * std::sin(theta) / (n * std::tan(std::numbers::pi / n));
}

inline double p_k_positive_limit(double theta, double coherence = 0.5) {
    return 0.5 + 2.0 * coherence * std::sin(theta) / std::numbers::pi;
}

inline double phi_initial(double coherence, double theta) {
    if (coherence < 0.0) throw InvalidInput("phi_initial: coherence must be >= 0");
    return -2.0 * coherence * std::sin(theta);
}

// Exact first moment: dM/dt = V phi, dphi/dt = -gamma phi.
struct MeanClosedForm {
    double m0{0.0};
    double v{1.0};
    double phi0{0.0};
    double gamma{0.0};

    double operator()(double t) const {
        if (t < 0.0) throw InvalidInput("mean_closed_form: t must be >= 0");
        if (gamma < 0.0) throw InvalidInput("mean_closed_form: gamma must be >= 0");
        if (gamma == 0.0) return m0 + v * phi0 * t;
        return m0 + (v / gamma) * phi0 * -std::expm1(-gamma * t);
    }

    double phi(double t) const { return phi0 * std::exp(-gamma * t); }

    // nullopt when the mean drifts without bound (gamma = 0 and V phi0 != 0).
    std::optional<double> long_time_limit() const {
        if (gamma > 0.0) return m0 + v * phi0 / gamma;
        if (v * phi0 == 0.0) return m0;
        return std::nullopt;
    }
};

inline double mean_closed_form(double m0, double v, double phi0, double gamma, double t) {
    return MeanClosedForm{m0, v, phi0, gamma}(t);
}

// max_k || H phi_k - E_k phi_k ||_inf over the Bloch states.
inline double eigenvector_check(const HamiltonianMatrix& h, double epsilon, double v) {
    const auto n_sites = static_cast<std::size_t>(h.rows());
    const KSpectrum spec = k_spectrum(n_sites, epsilon, v);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n_sites));
    double worst = 0.0;
    Eigen::VectorXcd phi(h.rows());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        for (Eigen::Index n = 0; n < h.rows(); ++n)
            phi(n) = norm * std::polar(1.0, spec.k[i] * static_cast<double>(n + 1));
        const Eigen::VectorXcd residual = h.cast<cplx>() * phi - spec.energy[i] * phi;
        worst = std::max(worst, residual.cwiseAbs().maxCoeff());
    }
    return worst;
}

inline double eigenvector_check(std::size_t n_sites, double epsilon, double v) {
    ChainSpec spec;
    spec.n_sites = n_sites;
    spec.epsilon = epsilon;
    spec.coupling = NearestNeighbor{v};
    spec.boundary = Boundary::Periodic;
    return eigenvector_check(build_hamiltonian(spec), epsilon, v);
}

// ------------------------------------------------------------------ report

struct AnalyticReport {
    std::size_t n_sites{0};
    double theta{0.0};
    double coherence{0.5};
    // k-space fields, present for even N >= 4 only
    std::optional<std::vector<double>> k_values;
    std::optional<std::vector<double>> p_k;
    std::optional<double> p_k_positive_finite;
    double p_k_positive_limit{0.5};
    double v_initial{0.0};
    double phi0{0.0};
    MeanClosedForm mean;
    std::optional<double> long_time_mean;
};

// Strength used by the closed forms: V of the uniform nearest-neighbour or
// power-law model, or the first bond of a custom profile.
inline double reference_strength(const CouplingModel& model) {
    if (const auto* nn = std::get_if<NearestNeighbor>(&model)) return nn->strength;
    if (const auto* pl = std::get_if<PowerLaw>(&model)) return pl->strength;
    const auto& c = std::get<Custom>(model);
    return c.bonds.empty() ? 0.0 : c.bonds.front();
}

inline AnalyticReport analytic_report(const ChainSpec& spec, const InitialCondition& init) {
    spec.validate();
    init.validate(spec.n_sites);
    AnalyticReport r;
    r.n_sites = spec.n_sites;
    r.theta = wrap_phase(init.theta);
    r.coherence = init.coherence;
    const double v = reference_strength(spec.coupling);

    if (spec.n_sites % 2 == 0 && spec.n_sites >= 4) {
        r.k_values = k_grid(spec.n_sites);
        r.p_k = initial_k_distribution(spec.n_sites, r.theta, init.coherence);
        r.p_k_positive_finite = p_k_positive(spec.n_sites, r.theta, init.coherence);
    }
    r.p_k_positive_limit = p_k_positive_limit(r.theta, init.coherence);
    r.v_initial = initial_velocity(r.theta, v, init.coherence);
    r.phi0 = phi_initial(init.coherence, r.theta);

    const double left = static_cast<double>(init.resolved_left_site(spec.n_sites));
    r.mean = MeanClosedForm{left * init.rho_l + (left + 1.0) * init.rho_r, v, r.phi0, spec.dephasing_rate};
    r.long_time_mean = r.mean.long_time_limit();
    return r;
}

}  // namespace phasedir
