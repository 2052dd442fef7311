#include "pef/instance_gen.hpp"

#include <algorithm>
#include <cmath>

namespace pef {

Design random_design(Rng& rng, const RandomDesignOptions& opt) {
    Design d;
    d.width = opt.domain_w;
    d.height = opt.domain_h;
    const double scale = std::min(opt.domain_w, opt.domain_h);
    const int n = rng.uniform_int(opt.min_modules, opt.max_modules);
    for (int i = 0; i < n; ++i) {
        ModuleShape m;
        m.width = scale * rng.uniform(opt.min_side_frac, opt.max_side_frac);
        m.height = scale * rng.uniform(opt.min_side_frac, opt.max_side_frac);
        d.modules.push_back(m);
    }
    const double rho = d.mean_density();
    if (rho > opt.max_mean_density) {
        const double shrink = std::sqrt(opt.max_mean_density / rho);
        for (auto& m : d.modules) {
            m.width *= shrink;
            m.height *= shrink;
        }
    }
    if (opt.max_nets > 0 && n >= 2) {
        const int nets = rng.uniform_int(1, opt.max_nets);
        for (int t = 0; t < nets; ++t) {
            Net net;
            const int pins = rng.uniform_int(2, std::min(4, n));
            for (int p = 0; p < pins; ++p)
                net.pins.push_back(Pin::at_module(rng.uniform_int(0, n - 1)));
            d.netlist.nets.push_back(net);
        }
    }
    return d;
}

Placement random_feasible_placement(const Design& design, Rng& rng) {
    Placement p;
    for (const auto& m : design.modules) {
        const double x = rng.uniform(0.5 * m.width, design.width - 0.5 * m.width);
        const double y = rng.uniform(0.5 * m.height, design.height - 0.5 * m.height);
        p.centers.push_back({x, y});
    }
    return p;
}

Placement clustered_placement(const Design& design, Rng& rng, double spread) {
    Placement p;
    const double r = spread * std::min(design.width, design.height);
    const Vec2 mid{0.5 * design.width, 0.5 * design.height};
    for (const auto& m : design.modules) {
        double x = mid.x + rng.uniform(-r, r);
        double y = mid.y + rng.uniform(-r, r);
        x = std::clamp(x, 0.5 * m.width, design.width - 0.5 * m.width);
        y = std::clamp(y, 0.5 * m.height, design.height - 0.5 * m.height);
        p.centers.push_back({x, y});
    }
    return p;
}

} // namespace pef
