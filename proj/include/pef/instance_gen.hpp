#ifndef PEF_INSTANCE_GEN_HPP
#define PEF_INSTANCE_GEN_HPP

#include <cstdint>

#include "pef/types.hpp"

namespace pef {

/** Deterministic splitmix64 stream; identical across platforms, unlike the
 * standard library distributions. */
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int a, int b) { // inclusive bounds
        return a + static_cast<int>(next() % static_cast<std::uint64_t>(b - a + 1));
    }
};

struct RandomDesignOptions {
    int min_modules = 3;
    int max_modules = 8;
    double domain_w = 1.0;
    double domain_h = 1.0;
    double min_side_frac = 0.10; // module sides relative to min(W, H)
    double max_side_frac = 0.30;
    double max_mean_density = 1.5; // shapes rescaled if the draw lands above
    int max_nets = 4;              // 0 disables netlist generation
};

Design random_design(Rng& rng, const RandomDesignOptions& opt = {});

/** Uniform centers over each module's feasible box. */
Placement random_feasible_placement(const Design& design, Rng& rng);

/** Centers drawn near the domain center so that pairwise overlap is likely;
 * spread is the radius of the cluster relative to min(W, H). */
Placement clustered_placement(const Design& design, Rng& rng, double spread = 0.15);

} // namespace pef

#endif
