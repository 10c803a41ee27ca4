// couplings.hpp: inter-site coupling models and the engineered focusing profile

#pragma once

#include "phasedir/csv.hpp"
#include "phasedir/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace phasedir {

enum class Boundary { Open, Periodic };

// V_nm = strength / |n - m|^exponent for every pair n != m.
struct PowerLaw {
    double strength{1.0};
    double exponent{3.0};
};

// V on the first off-diagonals only.
struct NearestNeighbor {
    double strength{1.0};
};

// Explicit bond list: bonds[i] couples sites i+1 and i+2 (1-based), length N-1.
struct Custom {
    std::vector<double> bonds;
};

using CouplingModel = std::variant<PowerLaw, NearestNeighbor, Custom>;

inline bool is_nearest_neighbor(const CouplingModel& model) noexcept {
    return std::holds_alternative<NearestNeighbor>(model);
}

inline std::string coupling_name(const CouplingModel& model) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PowerLaw>) return "power_law";
            else if constexpr (std::is_same_v<T, NearestNeighbor>) return "nearest_neighbor";
            else return "custom";
        },
        model);
}

// Throws InvalidInput if the model cannot be placed on a chain of n_sites.
inline void validate_coupling(const CouplingModel& model, std::size_t n_sites, Boundary boundary) {
    if (n_sites < 2) throw InvalidInput("coupling: n_sites must be >= 2");
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                if (!std::isfinite(m.strength)) throw InvalidInput("power_law: strength must be finite");
                if (!(m.exponent > 0.0) || !std::isfinite(m.exponent))
                    throw InvalidInput("power_law: exponent must be > 0");
                if (boundary == Boundary::Periodic)
                    throw InvalidInput("periodic boundary requires nearest_neighbor coupling");
            } else if constexpr (std::is_same_v<T, NearestNeighbor>) {
                if (!std::isfinite(m.strength)) throw InvalidInput("nearest_neighbor: strength must be finite");
                // For N = 2 the wrap bond would coincide with the (1,2) bond.
                if (boundary == Boundary::Periodic && n_sites < 3)
                    throw InvalidInput("periodic boundary requires n_sites >= 3");
            } else {
                if (boundary == Boundary::Periodic)
                    throw InvalidInput("periodic boundary requires nearest_neighbor coupling");
                if (m.bonds.size() != n_sites - 1)
                    throw InvalidInput("custom: expected " + std::to_string(n_sites - 1) + " bonds, got " +
                                       std::to_string(m.bonds.size()));
                for (double b : m.bonds)
                    if (!std::isfinite(b)) throw InvalidInput("custom: bond values must be finite");
            }
        },
        model);
}

// Symmetric N x N matrix of couplings with a zero diagonal.
inline Eigen::MatrixXd coupling_matrix(const CouplingModel& model, std::size_t n_sites, Boundary boundary) {
    validate_coupling(model, n_sites, boundary);
    const auto n = static_cast<Eigen::Index>(n_sites);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);

    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                for (Eigen::Index i = 0; i < n; ++i) {
                    for (Eigen::Index j = i + 1; j < n; ++j) {
                        const double value = m.strength / std::pow(static_cast<double>(j - i), m.exponent);
                        v(i, j) = value;
                        v(j, i) = value;
                    }
                }
            } else if constexpr (std::is_same_v<T, NearestNeighbor>) {
                for (Eigen::Index i = 0; i + 1 < n; ++i) {
                    v(i, i + 1) = m.strength;
                    v(i + 1, i) = m.strength;
                }
                if (boundary == Boundary::Periodic) {
                    v(n - 1, 0) = m.strength;
                    v(0, n - 1) = m.strength;
                }
            } else {
                for (Eigen::Index i = 0; i + 1 < n; ++i) {
                    v(i, i + 1) = m.bonds[static_cast<std::size_t>(i)];
                    v(i + 1, i) = m.bonds[static_cast<std::size_t>(i)];
                }
            }
        },
        model);
    return v;
}

// Nearest-neighbour bonds V_{n,n+1}, n = 1..N-1, for any model.
inline std::vector<double> bond_profile(const CouplingModel& model, std::size_t n_sites) {
    const Eigen::MatrixXd v = coupling_matrix(model, n_sites, Boundary::Open);
    std::vector<double> bonds(n_sites - 1);
    for (std::size_t i = 0; i + 1 < n_sites; ++i)
        bonds[i] = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1));
    return bonds;
}

/// Mirror-symmetric nearest-neighbour profile that refocuses a wave packet
/// started at the chain centre onto the two chain ends.
///
/// Each half (M = N/2 sites) carries the perfect-state-transfer arch
/// J_n = sqrt(n (M - n)), n = 1..M-1. The centre bond joining the halves is
/// `center_scale` times the arch edge value J_1 = sqrt(M - 1), so with the
/// default of 1 the centre pair sees the same coupling as its outer
/// neighbours. The profile is scaled so its largest entry equals
/// `peak_strength`.
inline Custom focusing_profile(std::size_t n_sites, double peak_strength, double center_scale = 1.0) {
    if (n_sites < 4 || n_sites % 2 != 0)
        throw InvalidInput("focusing_profile: n_sites must be even and >= 4");
    if (!std::isfinite(peak_strength)) throw InvalidInput("focusing_profile: peak_strength must be finite");
    if (!(center_scale > 0.0) || !std::isfinite(center_scale))
        throw InvalidInput("focusing_profile: center_scale must be > 0");

    const std::size_t half = n_sites / 2;
    std::vector<double> arch(half - 1);
    for (std::size_t n = 1; n < half; ++n)
        arch[n - 1] = std::sqrt(static_cast<double>(n) * static_cast<double>(half - n));

    Custom profile;
    profile.bonds.reserve(n_sites - 1);
    profile.bonds.insert(profile.bonds.end(), arch.begin(), arch.end());
    profile.bonds.push_back(center_scale * arch.front());
    profile.bonds.insert(profile.bonds.end(), arch.begin(), arch.end());

    const double largest = *std::max_element(profile.bonds.begin(), profile.bonds.end());
    for (double& b : profile.bonds) b *= peak_strength / largest;
    return profile;
}

// One value per line. Blank lines and lines starting with '#' are skipped.
inline Custom read_profile(std::istream& in, const std::string& source = "<profile>") {
    Custom profile;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto value = parse_double(line);
        if (!value || !std::isfinite(*value))
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected one finite number, got '" +
                              line + "'");
        profile.bonds.push_back(*value);
    }
    return profile;
}

inline Custom load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open coupling profile");
    return read_profile(in, path);
}

inline void write_profile(std::ostream& out, const std::vector<double>& bonds) {
    for (double b : bonds) out << format_number(b) << '\n';
}

}  // namespace phasedir
