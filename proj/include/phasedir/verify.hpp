// verify.hpp: independent oracles for tests
//
// Nothing here touches the RK4 propagator or the closed-form k-space formulas:
// Schrodinger evolution goes through a full eigendecomposition of H, and the
// Bloch-state weights come from explicit overlaps.

#pragma once

#include "phasedir/errors.hpp"
#include "phasedir/model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace phasedir::verify {

struct StateVector {
    Eigen::VectorXcd amplitudes;
    double time{0.0};

    Eigen::VectorXd populations() const { return amplitudes.cwiseAbs2(); }
    Eigen::MatrixXcd density() const { return amplitudes * amplitudes.adjoint(); }
};

// (|left> + e^{i theta} |left+1>) / sqrt(2) generalized to unequal weights:
// sqrt(rho_l) |left> + sqrt(rho_r) e^{i theta} |left+1>, left 1-based.
inline StateVector two_site_state(std::size_t n_sites, std::size_t left_site, double rho_l, double theta) {
    if (left_site < 1 || left_site + 1 > n_sites) throw BoundsError("two_site_state: left_site outside the chain");
    StateVector psi{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_sites)), 0.0};
    const auto l = static_cast<Eigen::Index>(left_site - 1);
    psi.amplitudes(l) = std::sqrt(rho_l);
    psi.amplitudes(l + 1) = std::polar(std::sqrt(1.0 - rho_l), theta);
    return psi;
}

/// exp(-i H t) via the spectrum of the real symmetric H. Decompose once, then
/// evaluate at as many times as needed.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const HamiltonianMatrix& h) {
        if (h.rows() != h.cols()) throw InvalidInput("SpectralPropagator: H must be square");
        if (!h.allFinite()) throw NumericalFailure("SpectralPropagator: H has non-finite entries");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
        if (solver.info() != Eigen::Success) throw NumericalFailure("SpectralPropagator: eigendecomposition failed");
        energies_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    StateVector evolve(const StateVector& psi0, double t) const {
        if (psi0.amplitudes.size() != vectors_.rows()) throw InvalidInput("SpectralPropagator: dimension mismatch");
        if (std::abs(psi0.amplitudes.norm() - 1.0) > 1e-10) throw InvalidInput("SpectralPropagator: psi0 not normalized");
        Eigen::VectorXcd coeffs = vectors_.transpose().cast<cplx>() * psi0.amplitudes;
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) *= std::polar(1.0, -energies_(i) * t);
        return StateVector{vectors_.cast<cplx>() * coeffs, psi0.time + t};
    }

    const Eigen::VectorXd& energies() const { return energies_; }

private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXd vectors_;
};

inline StateVector schrodinger_propagate(const HamiltonianMatrix& h, const StateVector& psi0, double t) {
    return SpectralPropagator(h).evolve(psi0, t);
}

// |<phi_k|psi_ini>|^2 from explicit vectors, k on the grid 2 pi j / N, j = -N/2 .. N/2-1.
inline std::vector<double> brute_force_pk(std::size_t n_sites, double theta) {
    if (n_sites < 2 || n_sites % 2 != 0) throw InvalidInput("brute_force_pk: n_sites must be even");
    const auto n = static_cast<Eigen::Index>(n_sites);
    const StateVector psi = two_site_state(n_sites, n_sites / 2, 0.5, theta);
    std::vector<double> out;
    Eigen::VectorXcd bloch(n);
    for (Eigen::Index j = -n / 2; j < n / 2; ++j) {
        const double k = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        for (Eigen::Index site = 0; site < n; ++site)
            bloch(site) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), k * static_cast<double>(site + 1));
        out.push_back(std::norm(bloch.dot(psi.amplitudes)));  // dot() conjugates the left operand
    }
    return out;
}

}  // namespace phasedir::verify
