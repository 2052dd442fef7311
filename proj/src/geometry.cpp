#include "pef/geometry.hpp"

#include <algorithm>
#include <string>

#include "pef/errors.hpp"

namespace pef {

AxisRect rect_of(const ModuleShape& shape, Vec2 center) {
    return AxisRect{center.x - 0.5 * shape.width, center.x + 0.5 * shape.width,
                    center.y - 0.5 * shape.height, center.y + 0.5 * shape.height};
}

AxisRect intersect(const AxisRect& a, const AxisRect& b) {
    return AxisRect{std::max(a.left, b.left), std::min(a.right, b.right),
                    std::max(a.bottom, b.bottom), std::min(a.top, b.top)};
}

double union_area(const std::vector<AxisRect>& rects) {
    if (rects.empty()) return 0.0;

    std::vector<double> xs;
    xs.reserve(2 * rects.size());
    for (const auto& r : rects) {
        xs.push_back(r.left);
        xs.push_back(r.right);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    double total = 0.0;
    std::vector<std::pair<double, double>> spans;
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
        const double xa = xs[s], xb = xs[s + 1];
        if (xb <= xa) continue;
        spans.clear();
        for (const auto& r : rects) {
            if (r.left <= xa && r.right >= xb) spans.emplace_back(r.bottom, r.top);
        }
        if (spans.empty()) continue;
        std::sort(spans.begin(), spans.end());
        double covered = 0.0, lo = spans[0].first, hi = spans[0].second;
        for (std::size_t i = 1; i < spans.size(); ++i) {
            if (spans[i].first > hi) {
                covered += hi - lo;
                lo = spans[i].first;
                hi = spans[i].second;
            } else {
                hi = std::max(hi, spans[i].second);
            }
        }
        covered += hi - lo;
        total += covered * (xb - xa);
    }
    return total;
}

std::vector<AxisRect> pairwise_intersections(const Design& design, const Placement& placement) {
    if (placement.size() != design.size())
        throw Error("placement size does not match design");
    std::vector<AxisRect> out;
    const std::size_t n = design.size();
    for (std::size_t i = 0; i < n; ++i) {
        const AxisRect ri = rect_of(design.modules[i], placement.centers[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            const AxisRect rj = rect_of(design.modules[j], placement.centers[j]);
            AxisRect x = intersect(ri, rj);
            if (!x.empty()) out.push_back(x);
        }
    }
    return out;
}

double overlap_area(const Design& design, const Placement& placement) {
    return union_area(pairwise_intersections(design, placement));
}

ModuleShape eroded_shape(const ModuleShape& shape, double eps) {
    if (eps < 0.0) throw Error("negative erosion radius");
    if (eps >= shape.inradius())
        throw ErosionTooLarge("erosion radius " + std::to_string(eps) +
                              " reaches the module inradius " + std::to_string(shape.inradius()));
    return ModuleShape{shape.width - 2.0 * eps, shape.height - 2.0 * eps};
}

double eroded_overlap_area(const Design& design, const Placement& placement, double eps) {
    Design eroded = design;
    for (auto& m : eroded.modules) m = eroded_shape(m, eps);
    return overlap_area(eroded, placement);
}

double total_perimeter(const Design& design) {
    double p = 0.0;
    for (const auto& m : design.modules) p += m.perimeter();
    return p;
}

void validate_design(const Design& design) {
    if (design.width <= 0.0 || design.height <= 0.0)
        throw Error("domain dimensions must be positive");
    for (std::size_t i = 0; i < design.size(); ++i) {
        const auto& m = design.modules[i];
        if (m.width <= 0.0 || m.height <= 0.0)
            throw Error("module " + std::to_string(i) + " has non-positive dimensions");
        if (m.width > design.width || m.height > design.height)
            throw InfeasibleBox("module " + std::to_string(i) + " does not fit in the domain");
    }
    if (!design.modules.empty() && design.mean_density() >= 2.0)
        throw DensityInfeasible("mean density " + std::to_string(design.mean_density()) +
                                " is not below 2");
}

} // namespace pef
