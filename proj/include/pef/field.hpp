#ifndef PEF_FIELD_HPP
#define PEF_FIELD_HPP

#include <vector>

#include "pef/types.hpp"

namespace pef {

/** Uniform cell-centered discretization of the domain [0,W] x [0,H]. */
struct Grid {
    int nx = 256;
    int ny = 256;
    double width = 1.0;
    double height = 1.0;

    double hx() const { return width / nx; }
    double hy() const { return height / ny; }
    double cell_area() const { return hx() * hy(); }
    double x_center(int i) const { return (i + 0.5) * hx(); }
    double y_center(int j) const { return (j + 0.5) * hy(); }
    int size() const { return nx * ny; }
    bool operator==(const Grid& o) const = default;
};

/** Sampled function on a grid; values stored row-major, x fastest. */
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), values(static_cast<std::size_t>(g.size()), 0.0) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }

    double sum() const;      // compensated
    double integral() const { return sum() * grid.cell_area(); }
    double mean() const { return sum() / grid.size(); }
    double max_abs() const;
    double min_value() const;
};

enum class KernelProfile { Quartic };

struct MollifierConfig {
    double epsilon = 0.0;
    KernelProfile profile = KernelProfile::Quartic;
};

/** 1-D quartic kernel (15/16)(1-t^2)^2 on [-1,1]; C^1, unit mass. */
double kernel_value(double t);
/** Its CDF: 1/2 + (15/16)(t - 2t^3/3 + t^5/5) on [-1,1], clamped outside. */
double kernel_cdf(double t);

/** Exact 1-D convolution of the scaled kernel with the indicator of
 * [lo, hi], evaluated at x. */
double segment_coverage(double lo, double hi, double eps, double x);
double segment_coverage_deriv(double lo, double hi, double eps, double x);

/** psi_i^eps(x - c): separable closed-form mollified rectangle indicator. */
double mollified_indicator(const ModuleShape& shape, Vec2 center, double eps, Vec2 x);
/** Gradient of the mollified indicator with respect to x. */
Vec2 mollified_indicator_grad(const ModuleShape& shape, Vec2 center, double eps, Vec2 x);

/** Per-module sampled 1-D coverage tables over the cells that can see the
 * eps-dilated rectangle: psi(x_i, y_j) = sx[i-i0] * sy[j-j0]. With eps = 0
 * the tables hold exact per-cell coverage fractions and the derivative
 * tables stay empty. */
struct ModuleSupport {
    int i0 = 0, i1 = 0, j0 = 0, j1 = 0; // half-open cell ranges
    std::vector<double> sx, sy;         // coverage factors
    std::vector<double> dsx, dsy;       // d/dx and d/dy of the factors
};
ModuleSupport module_support(const ModuleShape& shape, Vec2 center, double eps,
                             const Grid& grid, bool with_derivatives);

/** Exact per-cell coverage fraction of the rectangle clipped to the domain. */
ScalarField rasterize_indicator(const ModuleShape& shape, Vec2 center, const Grid& grid);

/** Mollified density rho_eps(x;c) sampled at cell centers; eps = 0 falls back
 * to exact rasterized indicators. */
ScalarField density(const Design& design, const Placement& placement, double eps,
                    const Grid& grid);

/** f = rho - rho_bar with the discrete mean removed exactly. */
ScalarField residual(const ScalarField& rho, double rho_bar);

/** Midpoint quadrature of the squared field. */
double variance(const ScalarField& f);

} // namespace pef

#endif
