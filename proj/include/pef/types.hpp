#ifndef PEF_TYPES_HPP
#define PEF_TYPES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace pef {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double norm() const { return std::hypot(x, y); }
};

/** Rectangular hard module; dimensions are fixed, only the center moves. */
struct ModuleShape {
    double width = 0.0;
    double height = 0.0;

    double area() const { return width * height; }
    double perimeter() const { return 2.0 * (width + height); }
    double inradius() const { return 0.5 * std::min(width, height); }
};

/** Axis-aligned rectangle given by its edge coordinates. */
struct AxisRect {
    double left = 0.0;
    double right = 0.0;
    double bottom = 0.0;
    double top = 0.0;

    double width() const { return right - left; }
    double height() const { return top - bottom; }
    double area() const { return width() * height(); }
    bool empty() const { return right <= left || top <= bottom; }
};

/** One net pin: either a module center (module >= 0) or a fixed pad location. */
struct Pin {
    int module = -1;
    Vec2 point{};

    static Pin at_module(int index) { return Pin{index, {}}; }
    static Pin at_point(Vec2 p) { return Pin{-1, p}; }
    bool is_fixed() const { return module < 0; }
};

struct Net {
    std::vector<Pin> pins;
};

struct Netlist {
    std::vector<Net> nets;
};

/** Static problem instance: module shapes, the placement domain, connectivity. */
struct Design {
    std::vector<ModuleShape> modules;
    double width = 0.0;  // domain W, x in [0, W]
    double height = 0.0; // domain H, y in [0, H]
    Netlist netlist;

    std::size_t size() const { return modules.size(); }
    double domain_area() const { return width * height; }
    double total_module_area() const {
        double a = 0.0;
        for (const auto& m : modules) a += m.area();
        return a;
    }
    double mean_density() const { return total_module_area() / domain_area(); }
    double min_inradius() const {
        double r = std::numeric_limits<double>::infinity();
        for (const auto& m : modules) r = std::min(r, m.inradius());
        return r;
    }
};

/** Optimization variable: one center per module. */
struct Placement {
    std::vector<Vec2> centers;

    std::size_t size() const { return centers.size(); }
};

inline double placement_distance(const Placement& a, const Placement& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.centers.size(); ++i) {
        Vec2 d = a.centers[i] - b.centers[i];
        s += d.x * d.x + d.y * d.y;
    }
    return std::sqrt(s);
}

} // namespace pef

#endif
