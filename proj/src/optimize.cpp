#include "pef/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "pef/errors.hpp"
#include "pef/geometry.hpp"
#include "pef/instance_gen.hpp"
#include "pef/parallel.hpp"
#include "pef/spectral.hpp"

namespace pef {

namespace {

// grad_{c_m} of sum_cells w(x) psi_m(x - c_m) hx hy, using d/dc = -d/dx.
std::vector<Vec2> quadrature_forces(const std::vector<ModuleSupport>& sup,
                                    const ScalarField& w) {
    const Grid& g = w.grid;
    std::vector<Vec2> out(sup.size(), Vec2{});
    parallel_for(0, static_cast<int>(sup.size()), [&](int m) {
        const ModuleSupport& s = sup[static_cast<std::size_t>(m)];
        double gx = 0.0, gy = 0.0;
        for (int j = s.j0; j < s.j1; ++j) {
            const double sy = s.sy[static_cast<std::size_t>(j - s.j0)];
            const double dy = s.dsy[static_cast<std::size_t>(j - s.j0)];
            double row_sx = 0.0, row_dx = 0.0;
            for (int i = s.i0; i < s.i1; ++i) {
                const double wv = w.at(i, j);
                row_sx += s.sx[static_cast<std::size_t>(i - s.i0)] * wv;
                row_dx += s.dsx[static_cast<std::size_t>(i - s.i0)] * wv;
            }
            gx += row_dx * sy;
            gy += row_sx * dy;
        }
        out[static_cast<std::size_t>(m)] = Vec2{-gx, -gy} * g.cell_area();
    });
    return out;
}

std::vector<ModuleSupport> build_supports(const Design& design, const Placement& placement,
                                          const ObjectiveConfig& cfg, bool with_derivs) {
    std::vector<ModuleSupport> sup(design.size());
    for (std::size_t m = 0; m < design.size(); ++m)
        sup[m] = module_support(design.modules[m], placement.centers[m], cfg.epsilon,
                                cfg.grid, with_derivs);
    return sup;
}

ScalarField density_from_supports(const std::vector<ModuleSupport>& sup, const Grid& grid) {
    ScalarField rho(grid);
    parallel_for(0, grid.ny, [&](int j) {
        for (const ModuleSupport& s : sup) {
            if (j < s.j0 || j >= s.j1) continue;
            const double sy = s.sy[static_cast<std::size_t>(j - s.j0)];
            if (sy == 0.0) continue;
            for (int i = s.i0; i < s.i1; ++i)
                rho.at(i, j) += s.sx[static_cast<std::size_t>(i - s.i0)] * sy;
        }
    });
    return rho;
}

struct Evaluation {
    double wirelength = 0.0;
    double energy = 0.0;
    double variance = 0.0;
    std::vector<Vec2> grad; // of F = W + lambda E, when requested
};

Evaluation evaluate(const Design& design, const Placement& placement,
                    const ObjectiveConfig& cfg, double lambda, bool want_grad) {
    if (want_grad && cfg.epsilon <= 0.0)
        throw Error("the density force needs a positive mollifier radius");
    Evaluation ev;
    const auto sup = build_supports(design, placement, cfg, want_grad);
    const ScalarField rho = density_from_supports(sup, cfg.grid);
    const ScalarField f = residual(rho, design.mean_density());
    Spectrum s = cosine_forward(f);
    ev.variance = parseval_variance(s);
    ev.energy = 0.5 * hminus1_from(s);
    ev.wirelength = smooth_wl(design.netlist, placement, {cfg.gamma, cfg.wl_model});
    if (want_grad) {
        const Grid& g = cfg.grid;
        for (int l = 0; l < g.ny; ++l)
            for (int k = 0; k < g.nx; ++k) {
                if (k == 0 && l == 0)
                    s.alpha(0, 0) = 0.0;
                else
                    s.alpha(k, l) /= eigenvalue_discrete(g, k, l);
            }
        const ScalarField phi = cosine_inverse(s);
        ev.grad = smooth_wl_grad(design.netlist, placement, {cfg.gamma, cfg.wl_model});
        const auto force = quadrature_forces(sup, phi);
        for (std::size_t m = 0; m < ev.grad.size(); ++m) ev.grad[m] += force[m] * lambda;
    }
    return ev;
}

void check_config(const Design& design, const ObjectiveConfig& cfg) {
    if (cfg.lambda < 0.0) throw Error("lambda must be nonnegative");
    if (cfg.epsilon < 0.0) throw Error("epsilon must be nonnegative");
    if (!design.modules.empty() && cfg.epsilon >= design.min_inradius())
        throw ErosionTooLarge("mollifier radius " + std::to_string(cfg.epsilon) +
                              " reaches the minimal module inradius " +
                              std::to_string(design.min_inradius()));
}

double placement_norm(const std::vector<Vec2>& g) {
    double s = 0.0;
    for (const Vec2& v : g) s += v.x * v.x + v.y * v.y;
    return std::sqrt(s);
}

bool all_finite(double f, const std::vector<Vec2>& g) {
    if (!std::isfinite(f)) return false;
    for (const Vec2& v : g)
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) return false;
    return true;
}

} // namespace

ObjectiveValue objective(const Design& design, const Placement& placement,
                         const ObjectiveConfig& cfg) {
    check_config(design, cfg);
    const Evaluation ev = evaluate(design, placement, cfg, cfg.lambda, false);
    return {ev.wirelength + cfg.lambda * ev.energy, ev.wirelength, ev.energy};
}

std::vector<Vec2> penalty_gradient(const Design& design, const Placement& placement,
                                   const ObjectiveConfig& cfg, PenaltyKind kind) {
    check_config(design, cfg);
    if (cfg.epsilon <= 0.0)
        throw Error("the density force needs a positive mollifier radius");
    const auto sup = build_supports(design, placement, cfg, true);
    const ScalarField rho = density_from_supports(sup, cfg.grid);
    if (kind == PenaltyKind::Poisson) {
        const ScalarField f = residual(rho, design.mean_density());
        return quadrature_forces(sup, solve_poisson(f));
    }
    // Variance penalty uses the raw residual rho - rho_bar; no solve and no
    // discrete mean enforcement are involved, so the weight on one module's
    // support is untouched by moving a module with disjoint support.
    ScalarField w = rho;
    const double rho_bar = design.mean_density();
    for (double& v : w.values) v = 2.0 * (v - rho_bar);
    return quadrature_forces(sup, w);
}

std::vector<Vec2> gradient(const Design& design, const Placement& placement,
                           const ObjectiveConfig& cfg) {
    check_config(design, cfg);
    return evaluate(design, placement, cfg, cfg.lambda, true).grad;
}

Placement project(const Design& design, const Placement& placement) {
    if (placement.size() != design.size())
        throw Error("placement size does not match design");
    Placement out = placement;
    for (std::size_t m = 0; m < design.size(); ++m) {
        const ModuleShape& s = design.modules[m];
        if (s.width > design.width || s.height > design.height)
            throw InfeasibleBox("module " + std::to_string(m) + " does not fit in the domain");
        out.centers[m].x =
            std::clamp(out.centers[m].x, 0.5 * s.width, design.width - 0.5 * s.width);
        out.centers[m].y =
            std::clamp(out.centers[m].y, 0.5 * s.height, design.height - 0.5 * s.height);
    }
    return out;
}

double gradient_mapping_norm(const Design& design, const Placement& placement,
                             const ObjectiveConfig& cfg, double alpha) {
    if (alpha <= 0.0) throw Error("gradient mapping step must be positive");
    const auto g = gradient(design, placement, cfg);
    Placement moved = placement;
    for (std::size_t m = 0; m < moved.size(); ++m) moved.centers[m] += g[m] * (-alpha);
    const Placement proj = project(design, moved);
    double s = 0.0;
    for (std::size_t m = 0; m < proj.size(); ++m) {
        const Vec2 d = (placement.centers[m] - proj.centers[m]) * (1.0 / alpha);
        s += d.x * d.x + d.y * d.y;
    }
    return std::sqrt(s);
}

double lipschitz_estimate(const Design& design, const Placement& placement,
                          const ObjectiveConfig& cfg, int samples, double radius,
                          std::uint64_t seed) {
    if (samples < 10) throw Error("lipschitz_estimate needs at least 10 samples");
    check_config(design, cfg);
    if (radius <= 0.0)
        radius = cfg.epsilon > 0.0 ? 0.5 * cfg.epsilon
                                   : 1e-3 * std::min(design.width, design.height);
    Rng rng(seed);
    const Placement base = project(design, placement);
    double lmax = 0.0;
    for (int t = 0; t < samples; ++t) {
        Placement a = base, b = base;
        for (std::size_t m = 0; m < base.size(); ++m) {
            a.centers[m] += Vec2{rng.uniform(-radius, radius), rng.uniform(-radius, radius)};
            b.centers[m] += Vec2{rng.uniform(-radius, radius), rng.uniform(-radius, radius)};
        }
        a = project(design, a);
        b = project(design, b);
        const double dist = placement_distance(a, b);
        if (dist < 1e-14 * std::max(1.0, radius)) continue;
        const auto ga = gradient(design, a, cfg);
        const auto gb = gradient(design, b, cfg);
        double diff = 0.0;
        for (std::size_t m = 0; m < ga.size(); ++m) {
            const Vec2 d = ga[m] - gb[m];
            diff += d.x * d.x + d.y * d.y;
        }
        lmax = std::max(lmax, std::sqrt(diff) / dist);
    }
    return 2.0 * lmax;
}

std::pair<Placement, RunDiagnostics> pgd_run(const Design& design, const Placement& initial,
                                             const ObjectiveConfig& cfg,
                                             const StepSchedule& schedule, const StopRule& stop,
                                             std::uint64_t seed) {
    check_config(design, cfg);
    const auto t_begin = std::chrono::steady_clock::now();
    Placement c = project(design, initial);

    // coincident centers give exactly symmetric zero forces; break the tie
    // once with a reproducible jitter
    bool coincident = false;
    for (std::size_t i = 0; i < c.size() && !coincident; ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            if (c.centers[i].x == c.centers[j].x && c.centers[i].y == c.centers[j].y) {
                coincident = true;
                break;
            }
    if (coincident) {
        Rng rng(seed ^ 0x6a09e667f3bcc908ull);
        const double mag = 1e-8 * std::min(design.width, design.height);
        for (auto& p : c.centers)
            p += Vec2{rng.uniform(-mag, mag), rng.uniform(-mag, mag)};
        c = project(design, c);
    }

    StepSchedule sched = schedule;
    if (sched.eta0 <= 0.0) {
        const double lhat = lipschitz_estimate(design, c, cfg, 16, 0.0, seed ^ 0x9e3779b9ull);
        sched.eta0 = lhat > 0.0 ? 1.0 / lhat : 1.0;
    }

    RunDiagnostics diag;
    diag.final_lambda = cfg.lambda;
    diag.lambda_continuation_used = cfg.lambda_continuation;
    double lambda = cfg.lambda;
    double gm_tol = stop.gm_tol;
    int moves = 0;

    for (int k = 0; k < stop.max_iters; ++k) {
        const Evaluation ev = evaluate(design, c, cfg, lambda, true);
        const double f_val = ev.wirelength + lambda * ev.energy;
        if (!all_finite(f_val, ev.grad))
            throw NonFiniteObjective("objective or gradient is not finite at iteration " +
                                     std::to_string(k));
        const double eta = sched.eta(k);
        Placement moved = c;
        for (std::size_t m = 0; m < moved.size(); ++m) moved.centers[m] += ev.grad[m] * (-eta);
        const Placement next = project(design, moved);
        const double gm = placement_distance(c, next) / eta;
        if (k == 0 && gm_tol <= 0.0) gm_tol = 1e-6 * placement_norm(ev.grad);

        diag.trajectory.push_back(c);
        diag.records.push_back({k, f_val, ev.wirelength, ev.energy, ev.variance,
                                overlap_area(design, c), gm, eta});
        if (gm <= gm_tol) {
            diag.converged = true;
            break;
        }
        c = next;
        ++moves;

        if (cfg.lambda_continuation && (k + 1) % cfg.lambda_every == 0) {
            const OverlapCertificate cert =
                overlap_certificate(design, c, cfg.epsilon, 16, cfg.grid);
            if (cert.overlap > 1e-12 * design.domain_area() && cert.bound <= cert.energy)
                lambda = std::min(lambda * cfg.lambda_growth, cfg.lambda * 1e9);
        }
    }
    diag.iterations = moves;
    if (diag.trajectory.empty() || placement_distance(diag.trajectory.back(), c) > 0.0)
        diag.trajectory.push_back(c);
    diag.final_lambda = lambda;
    diag.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return {c, diag};
}

RateFit local_rate_fit(const RunDiagnostics& diag, int window) {
    const auto& traj = diag.trajectory;
    if (window < 2 || static_cast<int>(traj.size()) < window + 1)
        throw InsufficientData("local_rate_fit needs window+1 trailing iterates");
    const Placement& ref = traj.back();
    double scale = 0.0;
    for (const Vec2& p : ref.centers) scale = std::max(scale, std::max(std::abs(p.x), std::abs(p.y)));

    std::vector<double> ks, logd;
    const int last = static_cast<int>(traj.size()) - 1; // ref index
    for (int k = last - window; k < last; ++k) {
        const double d = placement_distance(traj[static_cast<std::size_t>(k)], ref);
        if (d <= 1e3 * 1e-16 * std::max(1.0, scale)) continue; // below noise floor
        ks.push_back(k);
        logd.push_back(std::log(d));
    }
    if (ks.size() < 3) throw InsufficientData("local_rate_fit: too few usable distances");

    const double n = static_cast<double>(ks.size());
    double sk = 0, sd = 0, skk = 0, skd = 0, sdd = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        sk += ks[i];
        sd += logd[i];
        skk += ks[i] * ks[i];
        skd += ks[i] * logd[i];
        sdd += logd[i] * logd[i];
    }
    const double denom = n * skk - sk * sk;
    const double slope = (n * skd - sk * sd) / denom;
    const double intercept = (sd - slope * sk) / n;
    double ss_res = 0.0;
    const double mean_d = sd / n;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double fit = intercept + slope * ks[i];
        ss_res += (logd[i] - fit) * (logd[i] - fit);
        ss_tot += (logd[i] - mean_d) * (logd[i] - mean_d);
    }
    RateFit out;
    out.rate = std::exp(slope);
    out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    out.points = static_cast<int>(ks.size());
    out.stalled = out.rate >= 0.9995;
    return out;
}

StationaryReport stationary_report(const Design& design, const Placement& c_star,
                                   const ObjectiveConfig& cfg, const Placement& c_opt,
                                   int n_modes) {
    check_config(design, cfg);
    const double opt_overlap = overlap_area(design, c_opt);
    if (opt_overlap > 1e-12 * std::max(1.0, design.domain_area()))
        throw Error("stationary_report: reference layout overlaps (area " +
                    std::to_string(opt_overlap) + ")");

    StationaryReport r;
    const ObjectiveValue v_star = objective(design, c_star, cfg);
    const ObjectiveValue v_opt = objective(design, c_opt, cfg);
    r.f_star = v_star.total;
    r.f_opt = v_opt.total;
    r.w_star = v_star.wirelength;
    r.w_opt = v_opt.wirelength;
    r.energy_star = v_star.energy;
    r.energy_opt = v_opt.energy;
    r.premise_holds = r.f_star <= r.f_opt + 1e-12 * std::max(1.0, std::abs(r.f_opt));

    r.w_min = hpwl_lower_bound(design.netlist);
    r.delta_w = std::max(0.0, r.w_opt - r.w_min);
    r.overlap_star = overlap_area(design, c_star);

    const ScalarField rho = density(design, c_star, cfg.epsilon, cfg.grid);
    const SpectralReport rep = spectral_report(residual(rho, design.mean_density()), n_modes);
    r.beta_hat = rep.beta_hat;
    const double m = 2.0 - design.mean_density();
    r.constant = rep.beta_hat * m * m / (2.0 * rep.lambda_n);

    const double eps_prime = std::sqrt(2.0) * cfg.epsilon;
    const double slack =
        cfg.lambda > 0.0 ? (r.energy_opt + r.delta_w / cfg.lambda)
                         : std::numeric_limits<double>::infinity();
    r.overlap_bound = r.constant > 0.0
                          ? eps_prime * total_perimeter(design) + slack / r.constant
                          : std::numeric_limits<double>::infinity();
    r.overlap_bound_ok = r.overlap_star <= r.overlap_bound + 1e-9 * std::max(1.0, r.overlap_bound);

    r.wl_gap = r.w_star - r.w_opt;
    r.wl_gap_bound = cfg.lambda * r.energy_opt;
    r.wl_bound_ok = r.wl_gap <= r.wl_gap_bound + 1e-9 * std::max(1.0, std::abs(r.wl_gap_bound));
    return r;
}

StabilityProbe stability_probe(const Design& design, const Placement& base_solution,
                               const ObjectiveConfig& cfg, const StepSchedule& schedule,
                               const StopRule& stop, double delta, int n_seeds,
                               std::uint64_t seed) {
    StabilityProbe probe;
    if (delta == 0.0 || n_seeds <= 0) return probe; // 0/0 guarded: report zero
    Rng rng(seed);
    double sum = 0.0;
    for (int t = 0; t < n_seeds; ++t) {
        Design perturbed = design;
        double norm_da = 0.0;
        for (std::size_t m = 0; m < perturbed.modules.size(); ++m) {
            const double rel = delta * rng.uniform(-1.0, 1.0);
            const double a0 = perturbed.modules[m].area();
            const double f = std::sqrt(1.0 + rel);
            perturbed.modules[m].width *= f;
            perturbed.modules[m].height *= f;
            const double da = perturbed.modules[m].area() - a0;
            norm_da += da * da;
        }
        norm_da = std::sqrt(norm_da);
        if (norm_da == 0.0) continue;
        const Placement warm = project(perturbed, base_solution);
        const auto [solved, diag] = pgd_run(perturbed, warm, cfg, schedule, stop, seed + t);
        const double q = placement_distance(solved, base_solution) / norm_da;
        sum += q;
        probe.max_quotient = std::max(probe.max_quotient, q);
        ++probe.samples;
    }
    if (probe.samples > 0) probe.mean_quotient = sum / probe.samples;
    return probe;
}

} // namespace pef
