#include "pef/wirelength.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pef/errors.hpp"

namespace pef {

namespace {

Vec2 pin_position(const Pin& pin, const Placement& placement) {
    if (pin.is_fixed()) return pin.point;
    if (pin.module >= static_cast<int>(placement.size()))
        throw InvalidPinIndex("pin references module " + std::to_string(pin.module) +
                              " outside the placement");
    return placement.centers[static_cast<std::size_t>(pin.module)];
}

// One smoothed axis term and its derivative with respect to each coordinate.
struct AxisTerm {
    double value = 0.0;
    std::vector<double> deriv; // same length as coords
};

AxisTerm lse_axis(const std::vector<double>& xs, double gamma) {
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    double sp = 0.0, sm = 0.0;
    for (double x : xs) {
        sp += std::exp((x - *mx) / gamma);
        sm += std::exp((*mn - x) / gamma);
    }
    AxisTerm t;
    t.value = (*mx + gamma * std::log(sp)) + (-*mn + gamma * std::log(sm));
    t.deriv.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        t.deriv[i] = std::exp((xs[i] - *mx) / gamma) / sp - std::exp((*mn - xs[i]) / gamma) / sm;
    return t;
}

AxisTerm wa_axis(const std::vector<double>& xs, double gamma) {
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    double np = 0.0, dp = 0.0, nm = 0.0, dm = 0.0;
    for (double x : xs) {
        const double ep = std::exp((x - *mx) / gamma);
        const double em = std::exp((*mn - x) / gamma);
        np += x * ep;
        dp += ep;
        nm += x * em;
        dm += em;
    }
    const double wa_max = np / dp, wa_min = nm / dm;
    AxisTerm t;
    t.value = wa_max - wa_min;
    t.deriv.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double ep = std::exp((xs[i] - *mx) / gamma);
        const double em = std::exp((*mn - xs[i]) / gamma);
        const double d_max = ep * (1.0 + (xs[i] - wa_max) / gamma) / dp;
        const double d_min = em * (1.0 - (xs[i] - wa_min) / gamma) / dm;
        t.deriv[i] = d_max - d_min;
    }
    return t;
}

AxisTerm axis_term(const std::vector<double>& xs, const SmoothingConfig& cfg) {
    return cfg.model == WlModel::LSE ? lse_axis(xs, cfg.gamma) : wa_axis(xs, cfg.gamma);
}

} // namespace

double hpwl(const Netlist& netlist, const Placement& placement) {
    double total = 0.0;
    for (const auto& net : netlist.nets) {
        if (net.pins.size() < 2) continue;
        double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
        bool first = true;
        for (const auto& pin : net.pins) {
            const Vec2 p = pin_position(pin, placement);
            if (first) {
                x0 = x1 = p.x;
                y0 = y1 = p.y;
                first = false;
            } else {
                x0 = std::min(x0, p.x);
                x1 = std::max(x1, p.x);
                y0 = std::min(y0, p.y);
                y1 = std::max(y1, p.y);
            }
        }
        total += (x1 - x0) + (y1 - y0);
    }
    return total;
}

double smooth_wl(const Netlist& netlist, const Placement& placement,
                 const SmoothingConfig& cfg) {
    if (cfg.gamma <= 0.0) throw Error("smoothing gamma must be positive");
    double total = 0.0;
    std::vector<double> xs, ys;
    for (const auto& net : netlist.nets) {
        if (net.pins.size() < 2) continue;
        xs.clear();
        ys.clear();
        for (const auto& pin : net.pins) {
            const Vec2 p = pin_position(pin, placement);
            xs.push_back(p.x);
            ys.push_back(p.y);
        }
        total += axis_term(xs, cfg).value + axis_term(ys, cfg).value;
    }
    return total;
}

std::vector<Vec2> smooth_wl_grad(const Netlist& netlist, const Placement& placement,
                                 const SmoothingConfig& cfg) {
    if (cfg.gamma <= 0.0) throw Error("smoothing gamma must be positive");
    std::vector<Vec2> grad(placement.size(), Vec2{});
    std::vector<double> xs, ys;
    for (const auto& net : netlist.nets) {
        if (net.pins.size() < 2) continue;
        xs.clear();
        ys.clear();
        for (const auto& pin : net.pins) {
            const Vec2 p = pin_position(pin, placement);
            xs.push_back(p.x);
            ys.push_back(p.y);
        }
        const AxisTerm tx = axis_term(xs, cfg);
        const AxisTerm ty = axis_term(ys, cfg);
        for (std::size_t i = 0; i < net.pins.size(); ++i) {
            const Pin& pin = net.pins[i];
            if (pin.is_fixed()) continue;
            grad[static_cast<std::size_t>(pin.module)].x += tx.deriv[i];
            grad[static_cast<std::size_t>(pin.module)].y += ty.deriv[i];
        }
    }
    return grad;
}

double hpwl_lower_bound(const Netlist& netlist) {
    double total = 0.0;
    for (const auto& net : netlist.nets) {
        if (net.pins.size() < 2) continue;
        bool any_fixed = false;
        double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
        for (const auto& pin : net.pins) {
            if (!pin.is_fixed()) continue;
            if (!any_fixed) {
                x0 = x1 = pin.point.x;
                y0 = y1 = pin.point.y;
                any_fixed = true;
            } else {
                x0 = std::min(x0, pin.point.x);
                x1 = std::max(x1, pin.point.x);
                y0 = std::min(y0, pin.point.y);
                y1 = std::max(y1, pin.point.y);
            }
        }
        if (any_fixed) total += (x1 - x0) + (y1 - y0);
    }
    return total;
}

} // namespace pef
