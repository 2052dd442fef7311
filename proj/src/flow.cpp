#include "pef/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pef/errors.hpp"
#include "pef/spectral.hpp"

namespace pef {

namespace {

enum class FlowMode { Wgf, Heat };

// Face-centered velocities; x-faces indexed i in [1, nx) between columns
// i-1 and i, y-faces j in [1, ny). Boundary faces carry no flux.
struct FaceField {
    int nx = 0, ny = 0;
    std::vector<double> vx; // (nx-1) * ny interior x-faces
    std::vector<double> vy; // nx * (ny-1) interior y-faces

    double& x(int i, int j) { return vx[static_cast<std::size_t>(j) * (nx - 1) + (i - 1)]; }
    double x(int i, int j) const { return vx[static_cast<std::size_t>(j) * (nx - 1) + (i - 1)]; }
    double& y(int i, int j) { return vy[static_cast<std::size_t>(j - 1) * nx + i]; }
    double y(int i, int j) const { return vy[static_cast<std::size_t>(j - 1) * nx + i]; }
};

FaceField face_velocity(const ScalarField& potential, double sign_scale) {
    const Grid& g = potential.grid;
    FaceField v;
    v.nx = g.nx;
    v.ny = g.ny;
    v.vx.assign(static_cast<std::size_t>(g.nx - 1) * g.ny, 0.0);
    v.vy.assign(static_cast<std::size_t>(g.nx) * (g.ny - 1), 0.0);
    const double ix = sign_scale / g.hx(), iy = sign_scale / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            v.x(i, j) = (potential.at(i - 1, j) - potential.at(i, j)) * ix;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            v.y(i, j) = (potential.at(i, j - 1) - potential.at(i, j)) * iy;
    return v;
}

double max_abs_velocity(const FaceField& v) {
    double m = 0.0;
    for (double a : v.vx) m = std::max(m, std::abs(a));
    for (double a : v.vy) m = std::max(m, std::abs(a));
    return m;
}

// Upwind face fluxes F = v * rho_upwind.
FaceField upwind_flux(const FaceField& v, const ScalarField& rho) {
    FaceField f = v;
    const Grid& g = rho.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double vel = v.x(i, j);
            f.x(i, j) = vel * (vel >= 0.0 ? rho.at(i - 1, j) : rho.at(i, j));
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double vel = v.y(i, j);
            f.y(i, j) = vel * (vel >= 0.0 ? rho.at(i, j - 1) : rho.at(i, j));
        }
    return f;
}

ScalarField apply_divergence(const ScalarField& rho, const FaceField& flux, double dt) {
    const Grid& g = rho.grid;
    ScalarField out = rho;
    const double cx = dt / g.hx(), cy = dt / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double fe = i + 1 < g.nx ? flux.x(i + 1, j) : 0.0;
            const double fw = i > 0 ? flux.x(i, j) : 0.0;
            const double fn = j + 1 < g.ny ? flux.y(i, j + 1) : 0.0;
            const double fs = j > 0 ? flux.y(i, j) : 0.0;
            out.at(i, j) -= cx * (fe - fw) + cy * (fn - fs);
        }
    return out;
}

struct Solved {
    ScalarField phi;
    double energy = 0.0;
};

Solved solve_state(const ScalarField& rho) {
    const ScalarField f = residual(rho, rho.mean());
    Solved s;
    s.phi = solve_poisson(f);
    s.energy = 0.5 * quad_inner(f, s.phi);
    return s;
}

FaceField velocity_of(const ScalarField& rho, const ScalarField& phi, FlowMode mode) {
    return mode == FlowMode::Wgf ? face_velocity(phi, 1.0) : face_velocity(rho, 1.0);
}

double step_dt(const ScalarField& rho, const FaceField& v, const FlowConfig& cfg,
               double remaining, FlowMode mode) {
    const Grid& g = rho.grid;
    const double h = std::min(g.hx(), g.hy());
    const double vmax = max_abs_velocity(v);
    double dt = remaining;
    if (vmax > 1e-14) dt = std::min(dt, cfg.cfl * h / vmax);
    if (mode == FlowMode::Heat) {
        // the comparison velocity -grad rho behaves diffusively; keep the
        // explicit step inside the parabolic limit as well
        double rmax = 0.0;
        for (double r : rho.values) rmax = std::max(rmax, r);
        if (rmax > 1e-14) dt = std::min(dt, cfg.cfl * h * h / (4.0 * rmax));
    }
    return dt;
}

void check_positive(const ScalarField& rho_new, const ScalarField& rho_old) {
    const double floor = -1e-12 * rho_old.max_abs();
    if (rho_new.min_value() < floor)
        throw NegativeDensity("density " + std::to_string(rho_new.min_value()) +
                              " below the conservative floor; CFL condition violated");
}

double half_imbalance(const ScalarField& rho) {
    const Grid& g = rho.grid;
    double left = 0.0, right = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.x_center(i) < 0.5 * g.width)
                left += rho.at(i, j);
            else
                right += rho.at(i, j);
        }
    return std::abs(left - right) * g.cell_area();
}

FlowSeries run_mode(const ScalarField& rho0, const FlowConfig& cfg, FlowMode mode) {
    if (rho0.min_value() < 0.0) throw NegativeDensity("initial density has negative cells");
    if (cfg.cfl <= 0.0 || cfg.cfl > 1.0) throw Error("cfl must lie in (0, 1]");

    FlowSeries series;
    series.imbalance_halflife = std::numeric_limits<double>::infinity();
    ScalarField rho = rho0;
    double t = 0.0;
    Solved cur = solve_state(rho);
    const double imbalance0 = half_imbalance(rho);
    int step = 0;

    while (true) {
        if (step % cfg.record_every == 0) {
            series.snapshots.push_back(rho);
            series.snapshot_times.push_back(t);
        }
        const double remaining = cfg.t_end - t;
        if (remaining <= 0.0) break;

        const FaceField v = velocity_of(rho, cur.phi, mode);
        const double dt = step_dt(rho, v, cfg, remaining, mode);
        const FaceField flux = upwind_flux(v, rho);
        const ScalarField rho_new = apply_divergence(rho, flux, dt);
        check_positive(rho_new, rho);

        // dissipation ledger: exact increment on the left, the face
        // quadrature of the continuous identity at the step midpoint on the
        // right
        ScalarField rho_mid = rho;
        for (std::size_t c = 0; c < rho_mid.values.size(); ++c)
            rho_mid.values[c] = 0.5 * (rho.values[c] + rho_new.values[c]);
        const Solved mid = solve_state(rho_mid);
        const FaceField v_mid = velocity_of(rho_mid, mid.phi, mode);
        const FaceField flux_mid = upwind_flux(v_mid, rho_mid);
        const FaceField dphi_mid = face_velocity(mid.phi, -1.0); // +grad phi at faces
        double rhs = 0.0;
        for (std::size_t c = 0; c < flux_mid.vx.size(); ++c)
            rhs += flux_mid.vx[c] * dphi_mid.vx[c];
        for (std::size_t c = 0; c < flux_mid.vy.size(); ++c)
            rhs += flux_mid.vy[c] * dphi_mid.vy[c];
        rhs *= rho.grid.cell_area();

        const Solved nxt = solve_state(rho_new);
        series.ledger.push_back({t, cur.energy, rho.integral(), rho.min_value(),
                                 (nxt.energy - cur.energy) / dt, rhs});

        rho = rho_new;
        cur = nxt;
        t += dt;
        ++step;

        if (series.imbalance_halflife == std::numeric_limits<double>::infinity() &&
            half_imbalance(rho) <= 0.5 * imbalance0)
            series.imbalance_halflife = t;
    }
    series.ledger.push_back({t, cur.energy, rho.integral(), rho.min_value(), 0.0, 0.0});
    if (series.snapshot_times.empty() || series.snapshot_times.back() != t) {
        series.snapshots.push_back(rho);
        series.snapshot_times.push_back(t);
    }
    return series;
}

} // namespace

FlowState wgf_step(const FlowState& state, const FlowConfig& cfg) {
    if (state.rho.min_value() < 0.0) throw NegativeDensity("density has negative cells");
    if (state.mass <= 0.0 && state.rho.integral() <= 0.0)
        throw Error("wgf_step needs positive mass");
    const Solved cur = solve_state(state.rho);
    const FaceField v = velocity_of(state.rho, cur.phi, FlowMode::Wgf);
    const double dt = step_dt(state.rho, v, cfg, std::numeric_limits<double>::infinity(),
                              FlowMode::Wgf);
    const FaceField flux = upwind_flux(v, state.rho);
    const ScalarField rho_new = apply_divergence(state.rho, flux, dt);
    check_positive(rho_new, state.rho);
    FlowState out;
    out.rho = rho_new;
    out.t = state.t + dt;
    out.mass = rho_new.integral();
    out.energy = solve_state(rho_new).energy;
    return out;
}

FlowSeries wgf_run(const ScalarField& rho0, const FlowConfig& cfg) {
    return run_mode(rho0, cfg, FlowMode::Wgf);
}

FlowComparison heat_flow_compare(const ScalarField& rho0, const FlowConfig& cfg) {
    FlowComparison cmp;
    cmp.wgf = run_mode(rho0, cfg, FlowMode::Wgf);
    cmp.heat = run_mode(rho0, cfg, FlowMode::Heat);
    return cmp;
}

} // namespace pef
