// direction_scan: left-side population after t = 12 versus the initial phase,
// next to the infinite-chain prediction 1/2 + sin(theta)/pi.

#include "phasedir/phasedir.hpp"

#include <cstdio>
#include <numbers>

int main() {
    using namespace phasedir;

    ChainSpec chain;
    chain.n_sites = 60;
    chain.coupling = NearestNeighbor{1.0};

    std::printf("%10s %10s %10s %10s\n", "theta/pi", "P_L(12)", "limit", "M(12)");
    for (int i = -4; i <= 4; ++i) {
        const double theta = i * std::numbers::pi / 8.0;
        const Trajectory tr = propagate(chain, InitialCondition::pure(theta), PropagationConfig{12.0, 0.005, 2400});
        std::printf("%10.3f %10.5f %10.5f %10.4f\n", theta / std::numbers::pi, tr.p_left.back(),
                    p_k_positive_limit(theta), tr.mean.back());
    }
    return 0;
}
