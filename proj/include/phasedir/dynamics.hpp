// dynamics.hpp: pure-dephasing master equation, RK4 propagation, transport observables
//
//   d rho_nm / dt = -i [H, rho]_nm - gamma (1 - delta_nm) rho_nm      (hbar = 1)

#pragma once

#include "phasedir/errors.hpp"
#include "phasedir/model.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace phasedir {

struct PropagationConfig {
    double t_max{12.0};
    double dt{0.005};
    std::size_t output_stride{1};
};

// Largest absolute row sum.
inline double infinity_norm(const HamiltonianMatrix& h) { return h.cwiseAbs().rowwise().sum().maxCoeff(); }

inline std::size_t step_count(const PropagationConfig& cfg) {
    if (!(cfg.t_max >= 0.0) || !std::isfinite(cfg.t_max)) throw InvalidInput("propagation: t_max must be >= 0");
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidInput("propagation: dt must be > 0");
    if (cfg.output_stride == 0) throw InvalidInput("propagation: output_stride must be >= 1");
    const double steps = std::round(cfg.t_max / cfg.dt);
    if (std::abs(steps * cfg.dt - cfg.t_max) > 1e-9 * std::max(1.0, cfg.t_max))
        throw InvalidInput("propagation: t_max must be an integer multiple of dt");
    return static_cast<std::size_t>(steps);
}

// dt * max(||H||_inf, gamma) <= 0.1
inline void check_stability(const HamiltonianMatrix& h, double gamma, const PropagationConfig& cfg) {
    const double scale = std::max(infinity_norm(h), gamma);
    if (cfg.dt * scale > 0.1 + 1e-12)
        throw InvalidInput("propagation: stability guard violated, dt * max(||H||_inf, gamma) = " +
                           std::to_string(cfg.dt * scale) + " > 0.1");
}

// General right-hand side; rho need not be Hermitian.
inline Eigen::MatrixXcd master_rhs(const Eigen::MatrixXcd& rho, const HamiltonianMatrix& h, double gamma) {
    if (rho.rows() != rho.cols() || h.rows() != h.cols() || rho.rows() != h.rows())
        throw InvalidInput("master_rhs: dimension mismatch (rho " + std::to_string(rho.rows()) + "x" +
                           std::to_string(rho.cols()) + ", H " + std::to_string(h.rows()) + "x" +
                           std::to_string(h.cols()) + ")");
    const Eigen::MatrixXcd hc = h.cast<cplx>();
    Eigen::MatrixXcd out = cplx(0.0, -1.0) * (hc * rho - rho * hc);
    out -= gamma * rho;
    out.diagonal() += gamma * rho.diagonal();
    return out;
}

/// Fixed-step RK4 integrator for the master equation with a time-independent
/// real symmetric H. Operates on Hermitian states only: with B = rho H the
/// commutator is B^dagger - B, which is exactly anti-Hermitian in floating
/// point. B is formed as a real product on the interleaved (re, im) view of
/// rho, so a complex N x N state costs one real 2N x N by N x N product.
class MasterEquation {
public:
    MasterEquation(const HamiltonianMatrix& h, double gamma) : n_(h.rows()), gamma_(gamma) {
        if (h.rows() != h.cols()) throw InvalidInput("MasterEquation: H must be square");
        if (!(gamma >= 0.0)) throw InvalidInput("MasterEquation: gamma must be >= 0");
        const Eigen::Index nnz = (h.array() != 0.0).count();
        use_sparse_ = nnz * 4 < n_ * n_;
        if (use_sparse_) {
            sparse_h_ = h.sparseView();
            sparse_h_.makeCompressed();
        } else {
            dense_h_ = h;
        }
        b_.resize(n_, n_);
        for (auto* m : {&k1_, &k2_, &k3_, &k4_, &stage_}) m->resize(n_, n_);
    }

    Eigen::Index dimension() const { return n_; }

    void rhs(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) {
        using RealView = Eigen::Map<const Eigen::MatrixXd>;
        const RealView rho_view(reinterpret_cast<const double*>(rho.data()), 2 * n_, n_);
        Eigen::Map<Eigen::MatrixXd> b_view(reinterpret_cast<double*>(b_.data()), 2 * n_, n_);
        if (use_sparse_) b_view.noalias() = rho_view * sparse_h_;
        else b_view.noalias() = rho_view * dense_h_;
        // -i [H, rho] = -i (B^dagger - B)
        out = b_.adjoint() - b_;
        out *= cplx(0.0, -1.0);
        if (gamma_ != 0.0) {
            out -= gamma_ * rho;
            out.diagonal() += gamma_ * rho.diagonal();
        }
    }

    // Advances rho by one step of size dt and re-symmetrizes it. Returns the
    // Hermiticity residual measured before re-symmetrization.
    double step(Eigen::MatrixXcd& rho, double dt) {
        rhs(rho, k1_);
        stage_ = rho + (0.5 * dt) * k1_;
        rhs(stage_, k2_);
        stage_ = rho + (0.5 * dt) * k2_;
        rhs(stage_, k3_);
        stage_ = rho + dt * k3_;
        rhs(stage_, k4_);
        rho += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
        const double residual = hermiticity_residual(rho);
        stage_ = 0.5 * (rho + rho.adjoint());
        rho.swap(stage_);
        return residual;
    }

private:
    Eigen::Index n_;
    double gamma_;
    bool use_sparse_{false};
    Eigen::SparseMatrix<double> sparse_h_;
    Eigen::MatrixXd dense_h_;
    Eigen::MatrixXcd b_, k1_, k2_, k3_, k4_, stage_;
};

// ------------------------------------------------------------------ observables

inline double population_sum(std::span<const double> populations) {
    double s = 0.0;
    for (double p : populations) s += p;
    return s;
}

// Sum_n n * rho_nn with 1-based n.
inline double mean_position(std::span<const double> populations) {
    if (std::abs(population_sum(populations) - 1.0) > 1e-8)
        throw InvalidInput("mean_position: populations must sum to 1 (got " +
                           std::to_string(population_sum(populations)) + ")");
    double m = 0.0;
    for (std::size_t n = 0; n < populations.size(); ++n) m += static_cast<double>(n + 1) * populations[n];
    return m;
}

struct SidePopulations {
    double left{0.0};
    double right{0.0};
};

// Left = sites 1..split_after, right = the rest.
inline SidePopulations side_populations(std::span<const double> populations, std::size_t split_after) {
    if (split_after < 1 || split_after >= populations.size())
        throw BoundsError("side_populations: split_after " + std::to_string(split_after) + " outside [1, " +
                          std::to_string(populations.size() - 1) + "]");
    SidePopulations out;
    for (std::size_t n = 0; n < populations.size(); ++n) (n < split_after ? out.left : out.right) += populations[n];
    return out;
}

inline SidePopulations side_populations(std::span<const double> populations) {
    return side_populations(populations, populations.size() / 2);
}

// phi = i sum_n (rho_{n+1,n} - rho_{n,n+1}) = -2 sum_n Im rho_{n+1,n}, open sum n = 1..N-1.
inline double phi_observable(const Eigen::MatrixXcd& rho) {
    double s = 0.0;
    for (Eigen::Index n = 0; n + 1 < rho.rows(); ++n) {
        const cplx diff = rho(n + 1, n) - rho(n, n + 1);
        s += (cplx(0.0, 1.0) * diff).real();
    }
    return s;
}

inline double phi_observable(const DensityMatrix& d) { return phi_observable(d.rho); }

// ------------------------------------------------------------------ propagation

struct Trajectory {
    std::size_t n_sites{0};
    std::size_t split_after{0};
    std::vector<double> times;
    std::vector<std::vector<double>> populations;
    std::vector<double> mean;
    std::vector<double> p_left;
    std::vector<double> p_right;
    std::vector<double> phi;

    DensityMatrix final_state;
    double max_trace_drift{0.0};
    double max_hermiticity_residual{0.0};

    std::size_t size() const { return times.size(); }
};

using DensityObserver = std::function<void(const DensityMatrix&)>;

namespace detail {

inline void record(Trajectory& traj, const DensityMatrix& state) {
    const Eigen::Index n = state.rho.rows();
    std::vector<double> pops(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) pops[static_cast<std::size_t>(i)] = state.rho(i, i).real();

    const double drift = std::abs(population_sum(pops) - 1.0);
    traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
    if (drift > 1e-10)
        throw NumericalFailure("propagate: trace drift " + std::to_string(drift) + " at t = " +
                               std::to_string(state.time));

    const SidePopulations sides = side_populations(pops, traj.split_after);
    traj.times.push_back(state.time);
    traj.mean.push_back(mean_position(pops));
    traj.p_left.push_back(sides.left);
    traj.p_right.push_back(sides.right);
    traj.phi.push_back(phi_observable(state.rho));
    traj.populations.push_back(std::move(pops));
}

}  // namespace detail

/// Integrates from `initial` over [0, cfg.t_max]. Observables are stored at
/// t = 0, every `output_stride` steps, and at the final step. `observer`, if
/// set, sees the full density matrix at each stored time.
inline Trajectory propagate(const HamiltonianMatrix& h, double gamma, const DensityMatrix& initial,
                            const PropagationConfig& cfg, std::size_t split_after,
                            const DensityObserver& observer = {}) {
    if (initial.rho.rows() != h.rows()) throw InvalidInput("propagate: dimension mismatch between H and rho");
    const std::size_t steps = step_count(cfg);
    check_stability(h, gamma, cfg);

    Trajectory traj;
    traj.n_sites = static_cast<std::size_t>(h.rows());
    traj.split_after = split_after;
    if (split_after < 1 || split_after >= traj.n_sites)
        throw BoundsError("propagate: split_after outside the chain");

    MasterEquation eq(h, gamma);
    DensityMatrix state{initial.rho, 0.0};
    auto emit = [&] {
        detail::record(traj, state);
        if (observer) observer(state);
    };
    emit();

    for (std::size_t s = 1; s <= steps; ++s) {
        const double residual = eq.step(state.rho, cfg.dt);
        traj.max_hermiticity_residual = std::max(traj.max_hermiticity_residual, residual);
        if (!state.rho.allFinite())
            throw NumericalFailure("propagate: non-finite density matrix at step " + std::to_string(s) +
                                   " (t = " + std::to_string(static_cast<double>(s) * cfg.dt) + ")");
        state.time = (s == steps) ? cfg.t_max : static_cast<double>(s) * cfg.dt;
        if (s % cfg.output_stride == 0 || s == steps) emit();
    }
    traj.final_state = std::move(state);
    return traj;
}

inline Trajectory propagate(const ChainSpec& spec, const InitialCondition& init, const PropagationConfig& cfg,
                            const DensityObserver& observer = {}) {
    const HamiltonianMatrix h = build_hamiltonian(spec);
    const DensityMatrix rho0 = build_initial_density(spec, init);
    return propagate(h, spec.dephasing_rate, rho0, cfg, spec.n_sites / 2, observer);
}

}  // namespace phasedir
