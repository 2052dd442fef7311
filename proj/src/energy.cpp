#include "pef/energy.hpp"

#include <algorithm>
#include <cmath>

#include "pef/errors.hpp"
#include "pef/geometry.hpp"

namespace pef {

double poisson_energy(const ScalarField& f) { return 0.5 * hminus1_norm_sq(f); }

EnergyForms poisson_energy_forms(const ScalarField& f) {
    EnergyForms e;
    e.spectral = poisson_energy(f);
    const ScalarField phi = solve_poisson(f);
    const auto [gx, gy] = gradient_field(phi);
    e.dirichlet = 0.5 * (quad_inner(gx, gx) + quad_inner(gy, gy));
    return e;
}

std::vector<double> module_energies(const Design& design, const Placement& placement,
                                    const ScalarField& phi, double eps) {
    if (placement.size() != design.size())
        throw Error("placement size does not match design");
    const Grid& g = phi.grid;
    std::vector<double> out(design.size(), 0.0);
    for (std::size_t m = 0; m < design.size(); ++m) {
        const ModuleSupport s =
            module_support(design.modules[m], placement.centers[m], eps, g, false);
        double acc = 0.0;
        for (int j = s.j0; j < s.j1; ++j) {
            const double sy = s.sy[static_cast<std::size_t>(j - s.j0)];
            if (sy == 0.0) continue;
            double row = 0.0;
            for (int i = s.i0; i < s.i1; ++i)
                row += s.sx[static_cast<std::size_t>(i - s.i0)] * phi.at(i, j);
            acc += sy * row;
        }
        out[m] = acc * g.cell_area();
    }
    return out;
}

SpectralReport spectral_report(const ScalarField& f, int n_modes) {
    const Spectrum s = cosine_forward(f);
    SpectralReport r;
    r.n_modes = n_modes;
    r.var = parseval_variance(s);
    r.energy = 0.5 * hminus1_from(s);
    const auto modes = smallest_modes(s, n_modes);
    r.lambda1 = modes.front().lambda;
    r.lambda_n = modes.back().lambda;
    double partial = 0.0;
    for (const auto& m : modes) partial += m.alpha * m.alpha;
    r.partial_sum = partial;
    r.beta_hat = r.var == 0.0 ? 1.0 : std::clamp(partial / r.var, 0.0, 1.0);
    return r;
}

OverlapCertificate overlap_certificate(const Design& design, const Placement& placement,
                                       double eps, int n_modes, const Grid& grid) {
    const double rho_bar = design.mean_density();
    if (rho_bar >= 2.0)
        throw DensityInfeasible("mean density " + std::to_string(rho_bar) + " is not below 2");
    if (eps >= design.min_inradius())
        throw ErosionTooLarge("mollifier radius reaches the minimal module inradius");

    const ScalarField rho = density(design, placement, eps, grid);
    const ScalarField f = residual(rho, rho_bar);
    const SpectralReport rep = spectral_report(f, n_modes);

    OverlapCertificate c;
    c.overlap = overlap_area(design, placement);
    c.eroded_overlap = eroded_overlap_area(design, placement, eps);
    c.total_perimeter = total_perimeter(design);
    c.epsilon = eps;
    c.rho_bar = rho_bar;
    c.beta_hat = rep.beta_hat;
    c.n_modes = n_modes;
    const double m = 2.0 - rho_bar;
    c.constant = rep.beta_hat * m * m / (2.0 * rep.lambda_n);
    const double eps_prime = std::sqrt(2.0) * eps;
    c.bound = c.constant * std::max(c.overlap - eps_prime * c.total_perimeter, 0.0);
    c.energy = rep.energy;
    c.satisfied = c.energy >= c.bound - 1e-8 * std::max(1.0, c.bound);
    return c;
}

} // namespace pef
