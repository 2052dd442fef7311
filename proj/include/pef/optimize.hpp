#ifndef PEF_OPTIMIZE_HPP
#define PEF_OPTIMIZE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "pef/energy.hpp"
#include "pef/field.hpp"
#include "pef/types.hpp"
#include "pef/wirelength.hpp"

namespace pef {

struct ObjectiveConfig {
    double lambda = 1.0;  // density penalty weight
    double epsilon = 0.0; // mollifier radius, must stay below min inradius
    double gamma = 0.01;  // wirelength smoothing temperature
    WlModel wl_model = WlModel::LSE;
    Grid grid{};
    // geometric lambda growth, off by default; flagged in the diagnostics
    bool lambda_continuation = false;
    double lambda_growth = 1.5;
    int lambda_every = 200;
};

struct ObjectiveValue {
    double total = 0.0;
    double wirelength = 0.0;
    double energy = 0.0;
};

ObjectiveValue objective(const Design& design, const Placement& placement,
                         const ObjectiveConfig& cfg);

enum class PenaltyKind { Poisson, Variance };

/** Gradient of the density penalty alone (no lambda factor). Poisson weights
 * the closed-form grad psi quadrature by the potential phi; Variance uses
 * 2(rho - rho_bar) with the identical quadrature. */
std::vector<Vec2> penalty_gradient(const Design& design, const Placement& placement,
                                   const ObjectiveConfig& cfg, PenaltyKind kind);

/** Full analytic gradient of F = W + lambda E_eps. */
std::vector<Vec2> gradient(const Design& design, const Placement& placement,
                           const ObjectiveConfig& cfg);

/** Euclidean projection onto the per-module feasible boxes. Throws
 * InfeasibleBox when a module cannot fit. Idempotent and non-expansive. */
Placement project(const Design& design, const Placement& placement);

/** ||(c - P(c - alpha grad F)) / alpha||; zero exactly at stationary points. */
double gradient_mapping_norm(const Design& design, const Placement& placement,
                             const ObjectiveConfig& cfg, double alpha);

/** Sampled-secant estimate of the gradient Lipschitz constant in a ball
 * around the placement (radius defaults to epsilon/2), inflated by a safety
 * factor of 2. */
double lipschitz_estimate(const Design& design, const Placement& placement,
                          const ObjectiveConfig& cfg, int samples, double radius = 0.0,
                          std::uint64_t seed = 1234);

enum class StepKind { Fixed, RobbinsMonro };

struct StepSchedule {
    StepKind kind = StepKind::Fixed;
    double eta0 = 0.0; // 0 with Fixed: use 1/L from lipschitz_estimate

    double eta(int k) const { return kind == StepKind::Fixed ? eta0 : eta0 / (k + 1); }
};

struct StopRule {
    int max_iters = 1000;
    double gm_tol = 0.0; // 0: 1e-6 of the initial gradient norm
};

struct IterRecord {
    int k = 0;
    double objective = 0.0;
    double wirelength = 0.0;
    double energy = 0.0;
    double variance = 0.0;
    double overlap = 0.0;
    double grad_mapping_norm = 0.0;
    double step = 0.0;
};

struct RunDiagnostics {
    std::vector<IterRecord> records;
    std::vector<Placement> trajectory; // c^0 .. c^K
    int iterations = 0;
    double wall_time_s = 0.0;
    bool converged = false;
    double final_lambda = 0.0;
    bool lambda_continuation_used = false;
};

std::pair<Placement, RunDiagnostics> pgd_run(const Design& design, const Placement& initial,
                                             const ObjectiveConfig& cfg,
                                             const StepSchedule& schedule, const StopRule& stop,
                                             std::uint64_t seed = 0);

struct RateFit {
    double rate = 1.0;
    double r_squared = 0.0;
    int points = 0;
    bool stalled = false; // rate indistinguishable from 1
};

/** Least-squares slope of log ||c^k - c*|| over the trailing window, with
 * c* the final iterate. Throws InsufficientData without window+1 iterates. */
RateFit local_rate_fit(const RunDiagnostics& diag, int window);

struct StationaryReport {
    bool premise_holds = false; // F(c*) <= F(c_opt)
    double f_star = 0.0, f_opt = 0.0;
    double w_star = 0.0, w_opt = 0.0, w_min = 0.0, delta_w = 0.0;
    double energy_star = 0.0, energy_opt = 0.0;
    double overlap_star = 0.0;
    double overlap_bound = 0.0; // eps' P_sigma + (E_opt + dW/lambda)/C
    bool overlap_bound_ok = false;
    double wl_gap = 0.0;       // W(c*) - W(c_opt)
    double wl_gap_bound = 0.0; // lambda E_opt
    bool wl_bound_ok = false;
    double constant = 0.0; // C measured at c_star
    double beta_hat = 1.0;
};

/** Verifies the stationary-point overlap and wirelength bounds against a
 * non-overlapping reference layout; bounds are vacuous when the premise
 * fails, which is reported rather than thrown. */
StationaryReport stationary_report(const Design& design, const Placement& c_star,
                                   const ObjectiveConfig& cfg, const Placement& c_opt,
                                   int n_modes = 16);

struct StabilityProbe {
    double mean_quotient = 0.0;
    double max_quotient = 0.0;
    int samples = 0;
};

/** Difference quotients ||c*(A + dA) - c*(A)|| / ||dA|| for seeded relative
 * area perturbations of size delta, re-solved warm-started from the base
 * solution. A report, not a bound. */
StabilityProbe stability_probe(const Design& design, const Placement& base_solution,
                               const ObjectiveConfig& cfg, const StepSchedule& schedule,
                               const StopRule& stop, double delta, int n_seeds,
                               std::uint64_t seed = 99);

} // namespace pef

#endif
