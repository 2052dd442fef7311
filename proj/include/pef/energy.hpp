#ifndef PEF_ENERGY_HPP
#define PEF_ENERGY_HPP

#include <vector>

#include "pef/field.hpp"
#include "pef/spectral.hpp"
#include "pef/types.hpp"

namespace pef {

/** Poisson energy of a zero-mean residual: 1/2 sum alpha^2/lambda. */
double poisson_energy(const ScalarField& f);

/** Both expressions of the energy: the spectral sum (canonical) and the
 * Dirichlet form 1/2 integral |grad phi|^2 from central differences. The two
 * agree up to the O(h^2) error of the difference quotients. */
struct EnergyForms {
    double spectral = 0.0;
    double dirichlet = 0.0;
};
EnergyForms poisson_energy_forms(const ScalarField& f);

/** Module-level potential energies N_i = integral psi_i^eps(x-c_i) phi(x) dx;
 * eps = 0 uses the exact rasterized indicator. */
std::vector<double> module_energies(const Design& design, const Placement& placement,
                                    const ScalarField& phi, double eps);

struct SpectralReport {
    double var = 0.0;         // total spectral energy of the residual
    double energy = 0.0;      // 1/2 sum alpha^2/lambda
    double lambda1 = 0.0;     // smallest positive eigenvalue
    double lambda_n = 0.0;    // n-th smallest positive eigenvalue
    double partial_sum = 0.0; // sum of alpha^2 over the n lowest modes
    double beta_hat = 1.0;    // partial_sum / var, 1 when var = 0
    int n_modes = 0;
};
SpectralReport spectral_report(const ScalarField& f, int n_modes);

/** Quantitative overlap certificate: checks
 *   E_eps >= C (|O(c)| - eps' P_sigma)_+,  C = beta_hat (2-rho_bar)^2 / (2 lambda_N)
 * with beta_hat measured from the actual residual and eps' = sqrt(2) eps
 * accounting for the tensor-product kernel support. */
struct OverlapCertificate {
    double overlap = 0.0;
    double eroded_overlap = 0.0;
    double total_perimeter = 0.0;
    double epsilon = 0.0;
    double rho_bar = 0.0;
    double beta_hat = 1.0;
    int n_modes = 0;
    double constant = 0.0; // C above
    double bound = 0.0;    // C (|O| - eps' P_sigma)_+
    double energy = 0.0;   // E_eps
    bool satisfied = false;
};
OverlapCertificate overlap_certificate(const Design& design, const Placement& placement,
                                       double eps, int n_modes, const Grid& grid);

} // namespace pef

#endif
