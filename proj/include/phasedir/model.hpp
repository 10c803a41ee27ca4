// model.hpp: chain description, single-exciton Hamiltonian, initial density matrices
//
// Sites are 1-based in every user-facing field (left_site, split indices) and
// 0-based in Eigen storage. Units: hbar = 1, energies in |V|, times in hbar/|V|.

#pragma once

#include "phasedir/couplings.hpp"
#include "phasedir/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace phasedir {

using cplx = std::complex<double>;
using HamiltonianMatrix = Eigen::MatrixXd;

// Maps any angle into (-pi, pi].
inline double wrap_phase(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::remainder(theta, two_pi);  // [-pi, pi]
    if (wrapped <= -std::numbers::pi) wrapped += two_pi;
    return wrapped;
}

struct ChainSpec {
    std::size_t n_sites{60};
    double epsilon{0.0};
    CouplingModel coupling{PowerLaw{}};
    Boundary boundary{Boundary::Open};
    double dephasing_rate{0.0};

    void validate() const {
        if (n_sites < 2) throw InvalidInput("chain: n_sites must be >= 2");
        if (!std::isfinite(epsilon)) throw InvalidInput("chain: epsilon must be finite");
        if (!(dephasing_rate >= 0.0) || !std::isfinite(dephasing_rate))
            throw InvalidInput("chain: dephasing_rate must be finite and >= 0");
        validate_coupling(coupling, n_sites, boundary);
    }
};

inline HamiltonianMatrix build_hamiltonian(const ChainSpec& spec) {
    spec.validate();
    HamiltonianMatrix h = coupling_matrix(spec.coupling, spec.n_sites, spec.boundary);
    h.diagonal().setConstant(spec.epsilon);
    return h;
}

// Two-site initial block on (left_site, left_site + 1):
//   [[rho_l,              a e^{-i theta}],
//    [a e^{+i theta},     rho_r         ]]
struct InitialCondition {
    std::optional<std::size_t> left_site;  // 1-based; default floor(N/2)
    double rho_l{0.5};
    double rho_r{0.5};
    double coherence{0.5};  // a
    double theta{0.0};

    // Pure state (pi_L + e^{i theta} pi_R) / sqrt(2).
    static InitialCondition pure(double theta) { return InitialCondition{std::nullopt, 0.5, 0.5, 0.5, theta}; }

    std::size_t resolved_left_site(std::size_t n_sites) const { return left_site.value_or(n_sites / 2); }

    bool is_pure(double tol = 1e-12) const { return std::abs(coherence - std::sqrt(rho_l * rho_r)) <= tol; }

    void validate(std::size_t n_sites) const {
        if (!std::isfinite(rho_l) || !std::isfinite(rho_r) || !std::isfinite(coherence) || !std::isfinite(theta))
            throw InvalidInput("initial: all values must be finite");
        if (rho_l < 0.0 || rho_l > 1.0 || rho_r < 0.0 || rho_r > 1.0)
            throw InvalidInput("initial: rho_l and rho_r must lie in [0, 1]");
        if (std::abs(rho_l + rho_r - 1.0) > 1e-12) throw InvalidInput("initial: rho_l + rho_r must equal 1");
        if (coherence < 0.0) throw InvalidInput("initial: coherence must be >= 0");
        if (coherence > std::sqrt(rho_l * rho_r) + 1e-12)
            throw PositivityError("initial: coherence " + std::to_string(coherence) +
                                  " exceeds sqrt(rho_l * rho_r) = " + std::to_string(std::sqrt(rho_l * rho_r)));
        const std::size_t left = resolved_left_site(n_sites);
        if (left < 1 || left + 1 > n_sites)
            throw BoundsError("initial: left_site " + std::to_string(left) + " outside [1, " +
                              std::to_string(n_sites - 1) + "]");
    }
};

struct DensityMatrix {
    Eigen::MatrixXcd rho;
    double time{0.0};

    std::size_t n_sites() const { return static_cast<std::size_t>(rho.rows()); }
    Eigen::VectorXd populations() const { return rho.diagonal().real(); }
};

inline DensityMatrix build_initial_density(const ChainSpec& spec, const InitialCondition& init) {
    spec.validate();
    init.validate(spec.n_sites);
    const auto n = static_cast<Eigen::Index>(spec.n_sites);
    const auto l = static_cast<Eigen::Index>(init.resolved_left_site(spec.n_sites) - 1);
    const double theta = wrap_phase(init.theta);

    DensityMatrix out{Eigen::MatrixXcd::Zero(n, n), 0.0};
    out.rho(l, l) = init.rho_l;
    out.rho(l + 1, l + 1) = init.rho_r;
    out.rho(l, l + 1) = std::polar(init.coherence, -theta);
    out.rho(l + 1, l) = std::conj(out.rho(l, l + 1));
    return out;
}

// ---------------------------------------------------------------- diagnostics

struct Violation {
    enum class Kind { Hermiticity, Trace, NegativePopulation, NonFinite };
    Kind kind;
    double residual;
    std::size_t site{0};  // 1-based, only for NegativePopulation

    std::string describe() const {
        switch (kind) {
        case Kind::Hermiticity: return "HermiticityViolation(" + std::to_string(residual) + ")";
        case Kind::Trace: return "TraceViolation(" + std::to_string(residual) + ")";
        case Kind::NegativePopulation:
            return "NegativePopulation(site " + std::to_string(site) + ", " + std::to_string(residual) + ")";
        case Kind::NonFinite: return "NonFinite";
        }
        return "Unknown";
    }
};

struct DensityTolerances {
    double hermiticity{1e-12};
    double trace{1e-10};
    double negativity{1e-10};
};

inline double hermiticity_residual(const Eigen::MatrixXcd& rho) { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

inline std::vector<Violation> validate_density(const DensityMatrix& d, const DensityTolerances& tol = {}) {
    std::vector<Violation> found;
    if (!d.rho.allFinite()) {
        found.push_back({Violation::Kind::NonFinite, 0.0});
        return found;
    }
    if (d.rho.rows() != d.rho.cols()) {
        found.push_back({Violation::Kind::Hermiticity, 0.0});
        return found;
    }
    if (const double h = hermiticity_residual(d.rho); h > tol.hermiticity)
        found.push_back({Violation::Kind::Hermiticity, h});
    if (const double t = std::abs(d.rho.trace().real() - 1.0); t > tol.trace)
        found.push_back({Violation::Kind::Trace, t});
    for (Eigen::Index i = 0; i < d.rho.rows(); ++i) {
        const double p = d.rho(i, i).real();
        if (p < -tol.negativity)
            found.push_back({Violation::Kind::NegativePopulation, -p, static_cast<std::size_t>(i + 1)});
    }
    return found;
}

}  // namespace phasedir
