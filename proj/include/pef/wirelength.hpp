#ifndef PEF_WIRELENGTH_HPP
#define PEF_WIRELENGTH_HPP

#include <vector>

#include "pef/types.hpp"

namespace pef {

enum class WlModel { LSE, WA };

struct SmoothingConfig {
    double gamma = 0.01;
    WlModel model = WlModel::LSE;
};

/** Half-perimeter wirelength: per net, width plus height of the pin
 * bounding box. Throws InvalidPinIndex on out-of-range module pins. */
double hpwl(const Netlist& netlist, const Placement& placement);

/** Smooth surrogate. LSE over-approximates HPWL, WA under-approximates;
 * both are stabilized by max subtraction. */
double smooth_wl(const Netlist& netlist, const Placement& placement,
                 const SmoothingConfig& cfg);

/** Analytic gradient with respect to module centers; fixed pins contribute
 * to the net terms but receive no gradient. */
std::vector<Vec2> smooth_wl_grad(const Netlist& netlist, const Placement& placement,
                                 const SmoothingConfig& cfg);

/** Exact infimum of HPWL over free pin positions, per net: zero for nets
 * without fixed pins, the fixed-pin bounding box otherwise. */
double hpwl_lower_bound(const Netlist& netlist);

} // namespace pef

#endif
