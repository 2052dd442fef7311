#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pef/errors.hpp"
#include "pef/geometry.hpp"
#include "pef/instance_gen.hpp"

using namespace pef;

namespace {

// Independent oracle: rasterize the union of rectangles on an n x n grid over
// their bounding box and count covered cell centers.
double raster_union_area(const std::vector<AxisRect>& rects, int n) {
    if (rects.empty()) return 0.0;
    double x0 = rects[0].left, x1 = rects[0].right;
    double y0 = rects[0].bottom, y1 = rects[0].top;
    for (const auto& r : rects) {
        x0 = std::min(x0, r.left);
        x1 = std::max(x1, r.right);
        y0 = std::min(y0, r.bottom);
        y1 = std::max(y1, r.top);
    }
    const double hx = (x1 - x0) / n, hy = (y1 - y0) / n;
    long covered = 0;
    for (int j = 0; j < n; ++j) {
        const double y = y0 + (j + 0.5) * hy;
        for (int i = 0; i < n; ++i) {
            const double x = x0 + (i + 0.5) * hx;
            for (const auto& r : rects) {
                if (x >= r.left && x <= r.right && y >= r.bottom && y <= r.top) {
                    ++covered;
                    break;
                }
            }
        }
    }
    return covered * hx * hy;
}

double raster_tolerance(const std::vector<AxisRect>& rects, int n) {
    double x0 = rects[0].left, x1 = rects[0].right;
    double y0 = rects[0].bottom, y1 = rects[0].top;
    double per = 0.0;
    for (const auto& r : rects) {
        x0 = std::min(x0, r.left);
        x1 = std::max(x1, r.right);
        y0 = std::min(y0, r.bottom);
        y1 = std::max(y1, r.top);
        per += 2.0 * (r.width() + r.height());
    }
    return per * std::max((x1 - x0) / n, (y1 - y0) / n);
}

Design two_unit_squares() {
    Design d;
    d.modules = {ModuleShape{1, 1}, ModuleShape{1, 1}};
    d.width = 10;
    d.height = 10;
    return d;
}

} // namespace

TEST_CASE("rect_of centers the shape") {
    AxisRect r = rect_of(ModuleShape{1, 1}, {0.5, 0.5});
    CHECK(r.left == doctest::Approx(0.0));
    CHECK(r.right == doctest::Approx(1.0));
    CHECK(r.bottom == doctest::Approx(0.0));
    CHECK(r.top == doctest::Approx(1.0));

    r = rect_of(ModuleShape{2, 1}, {1.0, 0.5});
    CHECK(r.left == doctest::Approx(0.0));
    CHECK(r.right == doctest::Approx(2.0));

    r = rect_of(ModuleShape{0.2, 0.4}, {0.0, 0.0});
    CHECK(r.left == doctest::Approx(-0.1));
    CHECK(r.right == doctest::Approx(0.1));
    CHECK(r.bottom == doctest::Approx(-0.2));
    CHECK(r.top == doctest::Approx(0.2));
}

TEST_CASE("overlap_area on two squares") {
    Design d = two_unit_squares();
    Placement same{{{0, 0}, {0, 0}}};
    CHECK(overlap_area(d, same) == doctest::Approx(1.0));
    Placement shifted{{{0, 0}, {0.5, 0}}};
    CHECK(overlap_area(d, shifted) == doctest::Approx(0.5));
}

TEST_CASE("overlap_area union of three pairwise intersections") {
    Design d;
    d.modules = {ModuleShape{1, 1}, ModuleShape{1, 1}, ModuleShape{1, 1}};
    d.width = d.height = 10;
    Placement p{{{0, 0}, {0.5, 0}, {0.25, 0}}};
    const auto rects = pairwise_intersections(d, p);
    const double exact = overlap_area(d, p);
    const double oracle = raster_union_area(rects, 2048);
    CHECK(std::abs(exact - oracle) <= raster_tolerance(rects, 2048));
    // The three pairwise intersections are [0,0.5], [-0.25,0.5] and [0,0.75]
    // across the full unit height; their union is [-0.25,0.75] x [-0.5,0.5].
    CHECK(exact == doctest::Approx(1.0));
}

TEST_CASE("overlap_area ignores zero-area contacts") {
    Design d = two_unit_squares();
    Placement touching{{{0, 0}, {1.0, 0}}}; // shared edge only
    CHECK(overlap_area(d, touching) == 0.0);
    Placement corner{{{0, 0}, {1.0, 1.0}}}; // shared corner only
    CHECK(overlap_area(d, corner) == 0.0);
}

TEST_CASE("eroded_shape arithmetic and errors") {
    ModuleShape e = eroded_shape(ModuleShape{1, 1}, 0.25);
    CHECK(e.width == doctest::Approx(0.5));
    CHECK(e.height == doctest::Approx(0.5));
    CHECK(e.area() == doctest::Approx(0.25));

    e = eroded_shape(ModuleShape{2, 1}, 0.4);
    CHECK(e.width == doctest::Approx(1.2));
    CHECK(e.height == doctest::Approx(0.2));
    CHECK(e.area() == doctest::Approx(0.24));

    // erosion radius -> 0 restores the area
    e = eroded_shape(ModuleShape{1, 1}, 1e-9);
    CHECK(e.area() == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(eroded_shape(ModuleShape{1, 1}, 0.5), ErosionTooLarge);
    CHECK_THROWS_AS(eroded_shape(ModuleShape{1, 1}, 0.7), ErosionTooLarge);
}

TEST_CASE("eroded_overlap_area examples") {
    Design d = two_unit_squares();
    Placement same{{{0, 0}, {0, 0}}};
    CHECK(eroded_overlap_area(d, same, 0.25) == doctest::Approx(0.25));

    Placement far{{{0, 0}, {0.9, 0}}};
    CHECK(eroded_overlap_area(d, far, 0.25) == 0.0);

    // eroded 0.8 x 0.8 squares at horizontal distance 0.3 overlap in a
    // 0.5 x 0.8 rectangle
    Placement near{{{0, 0}, {0.3, 0}}};
    CHECK(eroded_overlap_area(d, near, 0.1) == doctest::Approx(0.4));
}

TEST_CASE("total_perimeter") {
    Design d;
    d.width = d.height = 10;
    CHECK(total_perimeter(d) == 0.0);
    d.modules.push_back(ModuleShape{1, 1});
    CHECK(total_perimeter(d) == doctest::Approx(4.0));
    d.modules.push_back(ModuleShape{2, 1});
    CHECK(total_perimeter(d) == doctest::Approx(10.0));
}

TEST_CASE("erosion area inequality for a single rectangle") {
    Rng rng(7);
    for (int t = 0; t < 2000; ++t) {
        ModuleShape m{rng.uniform(0.05, 3.0), rng.uniform(0.05, 3.0)};
        const double eps = rng.uniform(0.0, 0.999 * m.inradius());
        const ModuleShape e = eroded_shape(m, eps);
        const double loss = m.area() - e.area();
        CHECK(loss <= eps * m.perimeter());
    }
}

TEST_CASE("eroded overlap lower bound, random instances") {
    Rng rng(11);
    for (int t = 0; t < 1000; ++t) {
        Design d = random_design(rng);
        Placement p = (t % 2 == 0) ? clustered_placement(d, rng)
                                   : random_feasible_placement(d, rng);
        const double eps = rng.uniform(0.0, 0.95 * d.min_inradius());
        const double ov = overlap_area(d, p);
        const double ev = eroded_overlap_area(d, p, eps);
        const double bound = std::max(ov - eps * total_perimeter(d), 0.0);
        CHECK(ev >= bound - 1e-12 * std::max(1.0, ov));
    }
}

TEST_CASE("overlap invariants: translation and erosion monotonicity") {
    Rng rng(23);
    for (int t = 0; t < 200; ++t) {
        Design d = random_design(rng);
        Placement p = clustered_placement(d, rng);
        const double ov = overlap_area(d, p);

        Placement q = p;
        const Vec2 shift{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        for (auto& c : q.centers) c += shift;
        CHECK(overlap_area(d, q) == doctest::Approx(ov).epsilon(1e-12));

        const double e1 = rng.uniform(0.0, 0.4 * d.min_inradius());
        const double e2 = rng.uniform(e1, 0.9 * d.min_inradius());
        CHECK(eroded_overlap_area(d, p, e1) >= eroded_overlap_area(d, p, e2) - 1e-12);
    }
}

TEST_CASE("union area matches rasterization oracle on 5-module instances") {
    Rng rng(37);
    for (int t = 0; t < 5; ++t) {
        RandomDesignOptions opt;
        opt.min_modules = opt.max_modules = 5;
        Design d = random_design(rng, opt);
        Placement p = clustered_placement(d, rng, 0.2);
        const auto rects = pairwise_intersections(d, p);
        if (rects.empty()) continue;
        const double exact = overlap_area(d, p);
        const double oracle = raster_union_area(rects, 2048);
        CHECK(std::abs(exact - oracle) <= raster_tolerance(rects, 2048));
    }
}

TEST_CASE("validate_design rejects infeasible instances") {
    Design d;
    d.width = d.height = 1.0;
    d.modules = {ModuleShape{1, 1}, ModuleShape{1, 1}, ModuleShape{0.5, 0.5}};
    CHECK_THROWS_AS(validate_design(d), DensityInfeasible); // mean density 2.25

    Design e;
    e.width = e.height = 1.0;
    e.modules = {ModuleShape{1.5, 0.5}};
    CHECK_THROWS_AS(validate_design(e), InfeasibleBox);

    Design ok;
    ok.width = ok.height = 1.0;
    ok.modules = {ModuleShape{0.5, 0.5}};
    CHECK_NOTHROW(validate_design(ok));
}
