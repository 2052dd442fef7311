#ifndef PEF_FLOW_HPP
#define PEF_FLOW_HPP

#include <vector>

#include "pef/field.hpp"

namespace pef {

struct FlowConfig {
    Grid grid{};
    double cfl = 0.5; // in (0, 1]; positivity of the upwind step needs <= 0.5
    double t_end = 1.0;
    int record_every = 1; // snapshot cadence in steps
};

struct FlowState {
    ScalarField rho;
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
};

/** One conservative finite-volume step of d_t rho = div(rho grad phi) with
 * upwind face fluxes, zero flux on the boundary and an adaptive CFL time
 * step. Mass is conserved by telescoping fluxes. Throws NegativeDensity when
 * the step produces densities below -1e-12 max(rho). */
FlowState wgf_step(const FlowState& state, const FlowConfig& cfg);

struct FlowRecord {
    double t = 0.0;
    double energy = 0.0;
    double mass = 0.0;
    double min_rho = 0.0;
    double diss_lhs = 0.0; // (E_{n+1} - E_n)/dt for the step starting here
    double diss_rhs = 0.0; // face quadrature of -int rho |grad phi|^2 at the midpoint
};

struct FlowSeries {
    std::vector<FlowRecord> ledger;
    std::vector<ScalarField> snapshots;
    std::vector<double> snapshot_times;
    /** First time the |left-right| mass imbalance halves; +inf if never. */
    double imbalance_halflife = 0.0;
};

FlowSeries wgf_run(const ScalarField& rho0, const FlowConfig& cfg);

struct FlowComparison {
    FlowSeries wgf;
    FlowSeries heat;
};

/** Runs the Poisson-potential flow and the comparison flow with the velocity
 * replaced by -grad rho through the same machinery, from the same initial
 * density. */
FlowComparison heat_flow_compare(const ScalarField& rho0, const FlowConfig& cfg);

} // namespace pef

#endif
