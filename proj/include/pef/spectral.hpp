#ifndef PEF_SPECTRAL_HPP
#define PEF_SPECTRAL_HPP

#include <utility>
#include <vector>

#include "pef/field.hpp"

namespace pef {

/** Cosine-basis coefficients of a sampled field.
 *
 * Convention: alpha(k,l) are coefficients in the basis that is orthonormal
 * under the midpoint quadrature inner product <f,g> = sum f g hx hy, so
 * Parseval reads sum alpha^2 = integral of f^2 literally. The matching
 * discrete Neumann eigenvalues are
 *   lambda(k,l) = (2-2cos(pi k/nx))/hx^2 + (2-2cos(pi l/ny))/hy^2.
 */
struct Spectrum {
    Grid grid;
    std::vector<double> coeff;

    double alpha(int k, int l) const { return coeff[static_cast<std::size_t>(l) * grid.nx + k]; }
    double& alpha(int k, int l) { return coeff[static_cast<std::size_t>(l) * grid.nx + k]; }
    double eigenvalue(int k, int l) const;
};

enum class DctBackend { Fft, Matrix };

Spectrum cosine_forward(const ScalarField& f, DctBackend backend = DctBackend::Fft);
ScalarField cosine_inverse(const Spectrum& s, DctBackend backend = DctBackend::Fft);

double eigenvalue_discrete(const Grid& g, int k, int l);
double eigenvalue_continuum(const Grid& g, int k, int l);
/** Smallest positive discrete eigenvalue. */
double lambda1(const Grid& g);

/** Solves the 5-point Neumann Laplacian system -Lap phi = f exactly on the
 * grid; phi has zero discrete mean. Throws NonZeroMeanInput unless
 * |mean f| <= 1e-10 max|f|. */
ScalarField solve_poisson(const ScalarField& f);

/** The Green operator G = (-Lap_N)^{-1}; alias of solve_poisson. */
ScalarField green_apply(const ScalarField& f);

/** sum_{(k,l)!=(0,0)} alpha^2/lambda = <f, Gf>. */
double hminus1_norm_sq(const ScalarField& f);

/** Central differences; boundary values use the Neumann mirror ghost. */
std::pair<ScalarField, ScalarField> gradient_field(const ScalarField& phi);

struct ModeCoefficient {
    int k = 0;
    int l = 0;
    double lambda = 0.0;
    double lambda_continuum = 0.0;
    double alpha = 0.0;
};

/** The n_modes smallest positive modes, eigenvalues ascending, ties broken
 * k-major. */
std::vector<ModeCoefficient> spectral_coefficients(const ScalarField& f, int n_modes);

/** Same selections computed from an existing spectrum. */
std::vector<ModeCoefficient> smallest_modes(const Spectrum& s, int n_modes);
/** sum of alpha^2 over positive modes (Parseval value of the variance). */
double parseval_variance(const Spectrum& s);
double hminus1_from(const Spectrum& s);

/** 5-point Neumann stencil with mirrored ghosts; for exactness checks. */
ScalarField apply_neumann_laplacian(const ScalarField& phi);

/** Midpoint quadrature inner product. */
double quad_inner(const ScalarField& a, const ScalarField& b);

} // namespace pef

#endif
