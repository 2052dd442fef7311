#ifndef PEF_GEOMETRY_HPP
#define PEF_GEOMETRY_HPP

#include <vector>

#include "pef/types.hpp"

namespace pef {

/** Rectangle of `shape` centered at `center`. */
AxisRect rect_of(const ModuleShape& shape, Vec2 center);

/** Intersection rectangle; empty() when the inputs do not overlap. */
AxisRect intersect(const AxisRect& a, const AxisRect& b);

/** Exact area of the union of a set of axis-aligned rectangles.
 * Coordinate-compression sweep over x strips with 1-D interval unions in y,
 * so the result carries no rasterization error. */
double union_area(const std::vector<AxisRect>& rects);

/** All nonempty pairwise intersections (M_i+c_i) ∩ (M_j+c_j), i < j.
 * Zero-area contacts (shared edges or corners) are dropped. */
std::vector<AxisRect> pairwise_intersections(const Design& design, const Placement& placement);

/** Exact area of the overlap set: the union of all pairwise intersections. */
double overlap_area(const Design& design, const Placement& placement);

/** Erosion of a rectangle by the disk of radius eps: (w-2eps) x (h-2eps).
 * Throws ErosionTooLarge unless 0 <= eps < inradius. */
ModuleShape eroded_shape(const ModuleShape& shape, double eps);

/** Overlap area of the eroded placed rectangles (same union algorithm). */
double eroded_overlap_area(const Design& design, const Placement& placement, double eps);

/** Sum of module perimeters, 2(w_i + h_i). */
double total_perimeter(const Design& design);

/** Checks module dimensions, domain fit, and mean density < 2.
 * Throws DensityInfeasible or Error with a description of the violation. */
void validate_design(const Design& design);

} // namespace pef

#endif
