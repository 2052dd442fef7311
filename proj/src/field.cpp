#include "pef/field.hpp"

#include <algorithm>
#include <cmath>

#include "pef/errors.hpp"
#include "pef/geometry.hpp"
#include "pef/parallel.hpp"

namespace pef {

namespace {

// Neumaier compensated sum; keeps grid reductions well below the 1e-12
// tolerances used by the zero-mean and conservation contracts.
double compensated_sum(const std::vector<double>& v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

} // namespace

double ScalarField::sum() const { return compensated_sum(values); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::min(m, v);
    return m;
}

double kernel_value(double t) {
    if (t <= -1.0 || t >= 1.0) return 0.0;
    const double u = 1.0 - t * t;
    return (15.0 / 16.0) * u * u;
}

double kernel_cdf(double t) {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return 0.5 + (15.0 / 16.0) * (t - (2.0 / 3.0) * t * t * t + 0.2 * t * t * t * t * t);
}

double segment_coverage(double lo, double hi, double eps, double x) {
    const double v = kernel_cdf((x - lo) / eps) + kernel_cdf((hi - x) / eps) - 1.0;
    return std::clamp(v, 0.0, 1.0);
}

double segment_coverage_deriv(double lo, double hi, double eps, double x) {
    return (kernel_value((x - lo) / eps) - kernel_value((hi - x) / eps)) / eps;
}

double mollified_indicator(const ModuleShape& shape, Vec2 center, double eps, Vec2 x) {
    const AxisRect r = rect_of(shape, center);
    return segment_coverage(r.left, r.right, eps, x.x) *
           segment_coverage(r.bottom, r.top, eps, x.y);
}

Vec2 mollified_indicator_grad(const ModuleShape& shape, Vec2 center, double eps, Vec2 x) {
    const AxisRect r = rect_of(shape, center);
    const double sx = segment_coverage(r.left, r.right, eps, x.x);
    const double sy = segment_coverage(r.bottom, r.top, eps, x.y);
    const double dx = segment_coverage_deriv(r.left, r.right, eps, x.x);
    const double dy = segment_coverage_deriv(r.bottom, r.top, eps, x.y);
    return {dx * sy, sx * dy};
}

ModuleSupport module_support(const ModuleShape& shape, Vec2 center, double eps,
                             const Grid& grid, bool with_derivatives) {
    const AxisRect r = rect_of(shape, center);
    const double hx = grid.hx(), hy = grid.hy();
    ModuleSupport s;
    if (eps == 0.0) {
        // exact per-cell coverage fractions of the sharp rectangle
        s.i0 = std::clamp(static_cast<int>(std::floor(r.left / hx)), 0, grid.nx);
        s.i1 = std::clamp(static_cast<int>(std::ceil(r.right / hx)), 0, grid.nx);
        s.j0 = std::clamp(static_cast<int>(std::floor(r.bottom / hy)), 0, grid.ny);
        s.j1 = std::clamp(static_cast<int>(std::ceil(r.top / hy)), 0, grid.ny);
        for (int i = s.i0; i < s.i1; ++i) {
            const double a = i * hx, b = (i + 1) * hx;
            s.sx.push_back(std::max(0.0, std::min(r.right, b) - std::max(r.left, a)) / hx);
        }
        for (int j = s.j0; j < s.j1; ++j) {
            const double a = j * hy, b = (j + 1) * hy;
            s.sy.push_back(std::max(0.0, std::min(r.top, b) - std::max(r.bottom, a)) / hy);
        }
        return s;
    }
    // cells whose centers can see the eps-dilated rectangle
    s.i0 = std::clamp(static_cast<int>(std::ceil((r.left - eps) / hx - 0.5)), 0, grid.nx);
    s.i1 = std::clamp(static_cast<int>(std::floor((r.right + eps) / hx - 0.5)) + 1, 0, grid.nx);
    s.j0 = std::clamp(static_cast<int>(std::ceil((r.bottom - eps) / hy - 0.5)), 0, grid.ny);
    s.j1 = std::clamp(static_cast<int>(std::floor((r.top + eps) / hy - 0.5)) + 1, 0, grid.ny);
    for (int i = s.i0; i < s.i1; ++i) {
        const double x = grid.x_center(i);
        s.sx.push_back(segment_coverage(r.left, r.right, eps, x));
        if (with_derivatives) s.dsx.push_back(segment_coverage_deriv(r.left, r.right, eps, x));
    }
    for (int j = s.j0; j < s.j1; ++j) {
        const double y = grid.y_center(j);
        s.sy.push_back(segment_coverage(r.bottom, r.top, eps, y));
        if (with_derivatives) s.dsy.push_back(segment_coverage_deriv(r.bottom, r.top, eps, y));
    }
    return s;
}

ScalarField rasterize_indicator(const ModuleShape& shape, Vec2 center, const Grid& grid) {
    ScalarField f(grid);
    const ModuleSupport s = module_support(shape, center, 0.0, grid, false);
    for (int j = s.j0; j < s.j1; ++j) {
        const double fy = s.sy[static_cast<std::size_t>(j - s.j0)];
        if (fy == 0.0) continue;
        for (int i = s.i0; i < s.i1; ++i)
            f.at(i, j) = s.sx[static_cast<std::size_t>(i - s.i0)] * fy;
    }
    return f;
}

ScalarField density(const Design& design, const Placement& placement, double eps,
                    const Grid& grid) {
    if (placement.size() != design.size())
        throw Error("placement size does not match design");
    std::vector<ModuleSupport> sup(design.size());
    for (std::size_t m = 0; m < design.size(); ++m)
        sup[m] = module_support(design.modules[m], placement.centers[m], eps, grid, false);

    ScalarField rho(grid);
    // Row-parallel with a fixed module order per row: the accumulation order
    // in every cell is independent of the thread count.
    parallel_for(0, grid.ny, [&](int j) {
        for (std::size_t m = 0; m < design.size(); ++m) {
            const ModuleSupport& s = sup[m];
            if (j < s.j0 || j >= s.j1) continue;
            const double sy = s.sy[static_cast<std::size_t>(j - s.j0)];
            if (sy == 0.0) continue;
            for (int i = s.i0; i < s.i1; ++i)
                rho.at(i, j) += s.sx[static_cast<std::size_t>(i - s.i0)] * sy;
        }
    });
    return rho;
}

ScalarField residual(const ScalarField& rho, double rho_bar) {
    ScalarField f = rho;
    for (double& v : f.values) v -= rho_bar;
    const double m = f.mean();
    for (double& v : f.values) v -= m;
    return f;
}

double variance(const ScalarField& f) {
    std::vector<double> sq(f.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f.values[i] * f.values[i];
    return compensated_sum(sq) * f.grid.cell_area();
}

} // namespace pef
