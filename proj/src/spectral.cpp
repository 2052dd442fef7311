#include "pef/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "pef/errors.hpp"

namespace pef {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; executing distinct plans is. Plans are
// created once per grid size and kept for the process lifetime.
struct FftwPlans {
    fftw_plan forward;  // REDFT10 along both axes
    fftw_plan backward; // REDFT01 along both axes
};

std::mutex plan_mutex;

const FftwPlans& plans_for(int nx, int ny) {
    static std::map<std::pair<int, int>, FftwPlans> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find({nx, ny});
    if (it != cache.end()) return it->second;
    std::vector<double> in(static_cast<std::size_t>(nx) * ny),
        out(static_cast<std::size_t>(nx) * ny);
    FftwPlans p;
    p.forward = fftw_plan_r2r_2d(ny, nx, in.data(), out.data(), FFTW_REDFT10, FFTW_REDFT10,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_r2r_2d(ny, nx, in.data(), out.data(), FFTW_REDFT01, FFTW_REDFT01,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(std::make_pair(nx, ny), p).first->second;
}

// Orthonormal DCT-II scale factors.
double ortho_scale(int k, int n) { return k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n); }

// Precomputed orthogonal DCT matrices for the reference backend.
const std::vector<double>& dct_matrix(int n) {
    static std::map<int, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        const double s = ortho_scale(k, n);
        for (int j = 0; j < n; ++j)
            m[static_cast<std::size_t>(k) * n + j] = s * std::cos(kPi * k * (j + 0.5) / n);
    }
    return cache.emplace(n, std::move(m)).first->second;
}

// out[k] = sum_j M[k][j] in[j] applied along x for every row, in place of a
// full matrix product; transpose=true applies M^T.
void apply_rows(const std::vector<double>& m, int n, int rows, bool transpose,
                const std::vector<double>& in, std::vector<double>& out) {
    for (int r = 0; r < rows; ++r) {
        const double* src = in.data() + static_cast<std::size_t>(r) * n;
        double* dst = out.data() + static_cast<std::size_t>(r) * n;
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            if (!transpose) {
                const double* mk = m.data() + static_cast<std::size_t>(k) * n;
                for (int j = 0; j < n; ++j) s += mk[j] * src[j];
            } else {
                for (int j = 0; j < n; ++j) s += m[static_cast<std::size_t>(j) * n + k] * src[j];
            }
            dst[k] = s;
        }
    }
}

void transpose_grid(const std::vector<double>& in, int nx, int ny, std::vector<double>& out) {
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out[static_cast<std::size_t>(i) * ny + j] = in[static_cast<std::size_t>(j) * nx + i];
}

// Orthonormal 2-D DCT-II via the explicit matrices; O(n^3), reference only.
std::vector<double> matrix_dct2(const std::vector<double>& v, int nx, int ny, bool inverse) {
    const auto& mx = dct_matrix(nx);
    const auto& my = dct_matrix(ny);
    std::vector<double> a(v.size()), b(v.size());
    // x pass: forward uses M, inverse uses M^T
    apply_rows(mx, nx, ny, inverse, v, a);
    transpose_grid(a, nx, ny, b);
    apply_rows(my, ny, nx, inverse, b, a);
    transpose_grid(a, ny, nx, b);
    return b;
}

double compensated_sum(const std::vector<double>& v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

void check_zero_mean(const ScalarField& f, const char* op) {
    const double m = std::abs(f.mean());
    if (m > 1e-10 * f.max_abs())
        throw NonZeroMeanInput(std::string(op) + ": input mean " + std::to_string(m) +
                               " exceeds 1e-10 of max |f|");
}

} // namespace

double eigenvalue_discrete(const Grid& g, int k, int l) {
    const double ex = (2.0 - 2.0 * std::cos(kPi * k / g.nx)) / (g.hx() * g.hx());
    const double ey = (2.0 - 2.0 * std::cos(kPi * l / g.ny)) / (g.hy() * g.hy());
    return ex + ey;
}

double eigenvalue_continuum(const Grid& g, int k, int l) {
    const double a = k / g.width, b = l / g.height;
    return kPi * kPi * (a * a + b * b);
}

double lambda1(const Grid& g) {
    return std::min(eigenvalue_discrete(g, 1, 0), eigenvalue_discrete(g, 0, 1));
}

double Spectrum::eigenvalue(int k, int l) const { return eigenvalue_discrete(grid, k, l); }

Spectrum cosine_forward(const ScalarField& f, DctBackend backend) {
    const Grid& g = f.grid;
    Spectrum s;
    s.grid = g;
    s.coeff.resize(f.values.size());
    const double w = std::sqrt(g.cell_area());
    if (backend == DctBackend::Fft) {
        const FftwPlans& p = plans_for(g.nx, g.ny);
        std::vector<double> in = f.values;
        fftw_execute_r2r(p.forward, in.data(), s.coeff.data());
        for (int l = 0; l < g.ny; ++l) {
            const double sl = 0.25 * ortho_scale(l, g.ny) * w;
            for (int k = 0; k < g.nx; ++k)
                s.alpha(k, l) *= sl * ortho_scale(k, g.nx);
        }
    } else {
        s.coeff = matrix_dct2(f.values, g.nx, g.ny, false);
        for (double& c : s.coeff) c *= w;
    }
    return s;
}

ScalarField cosine_inverse(const Spectrum& s, DctBackend backend) {
    const Grid& g = s.grid;
    ScalarField f(g);
    const double w = 1.0 / std::sqrt(g.cell_area());
    if (backend == DctBackend::Fft) {
        const FftwPlans& p = plans_for(g.nx, g.ny);
        std::vector<double> in(s.coeff.size());
        for (int l = 0; l < g.ny; ++l) {
            const double sl = ortho_scale(l, g.ny) * (l == 0 ? 1.0 : 0.5) * w;
            for (int k = 0; k < g.nx; ++k) {
                const double sk = ortho_scale(k, g.nx) * (k == 0 ? 1.0 : 0.5);
                in[static_cast<std::size_t>(l) * g.nx + k] = s.alpha(k, l) * sl * sk;
            }
        }
        fftw_execute_r2r(p.backward, in.data(), f.values.data());
    } else {
        std::vector<double> scaled = s.coeff;
        for (double& c : scaled) c *= w;
        f.values = matrix_dct2(scaled, g.nx, g.ny, true);
    }
    return f;
}

ScalarField solve_poisson(const ScalarField& f) {
    check_zero_mean(f, "solve_poisson");
    Spectrum s = cosine_forward(f);
    const Grid& g = f.grid;
    for (int l = 0; l < g.ny; ++l)
        for (int k = 0; k < g.nx; ++k) {
            if (k == 0 && l == 0) {
                s.alpha(0, 0) = 0.0;
            } else {
                s.alpha(k, l) /= eigenvalue_discrete(g, k, l);
            }
        }
    return cosine_inverse(s);
}

ScalarField green_apply(const ScalarField& f) { return solve_poisson(f); }

double hminus1_from(const Spectrum& s) {
    const Grid& g = s.grid;
    std::vector<double> terms;
    terms.reserve(s.coeff.size());
    for (int l = 0; l < g.ny; ++l)
        for (int k = 0; k < g.nx; ++k) {
            if (k == 0 && l == 0) continue;
            const double a = s.alpha(k, l);
            terms.push_back(a * a / eigenvalue_discrete(g, k, l));
        }
    return compensated_sum(terms);
}

double parseval_variance(const Spectrum& s) {
    std::vector<double> terms;
    terms.reserve(s.coeff.size());
    const Grid& g = s.grid;
    for (int l = 0; l < g.ny; ++l)
        for (int k = 0; k < g.nx; ++k) {
            if (k == 0 && l == 0) continue;
            const double a = s.alpha(k, l);
            terms.push_back(a * a);
        }
    return compensated_sum(terms);
}

double hminus1_norm_sq(const ScalarField& f) {
    check_zero_mean(f, "hminus1_norm_sq");
    return hminus1_from(cosine_forward(f));
}

std::pair<ScalarField, ScalarField> gradient_field(const ScalarField& phi) {
    const Grid& g = phi.grid;
    ScalarField dx(g), dy(g);
    const double ix = 0.5 / g.hx(), iy = 0.5 / g.hy();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double xm = phi.at(i > 0 ? i - 1 : 0, j);
            const double xp = phi.at(i < g.nx - 1 ? i + 1 : g.nx - 1, j);
            dx.at(i, j) = (xp - xm) * ix;
            const double ym = phi.at(i, j > 0 ? j - 1 : 0);
            const double yp = phi.at(i, j < g.ny - 1 ? j + 1 : g.ny - 1);
            dy.at(i, j) = (yp - ym) * iy;
        }
    }
    return {std::move(dx), std::move(dy)};
}

std::vector<ModeCoefficient> spectral_coefficients(const ScalarField& f, int n_modes) {
    return smallest_modes(cosine_forward(f), n_modes);
}

std::vector<ModeCoefficient> smallest_modes(const Spectrum& s, int n_modes) {
    if (n_modes < 1) throw Error("spectral_coefficients: n_modes must be >= 1");
    const Grid& g = s.grid;
    const long total = static_cast<long>(g.nx) * g.ny - 1;
    if (n_modes > total) throw Error("spectral_coefficients: n_modes exceeds positive modes");

    // The n-th smallest positive mode has both indices <= n, so a small
    // candidate box suffices unless nearly all modes are requested.
    std::vector<ModeCoefficient> cand;
    const int kmax = std::min(g.nx - 1, n_modes);
    const int lmax = std::min(g.ny - 1, n_modes);
    const bool box = static_cast<long>(kmax + 1) * (lmax + 1) < total / 2;
    for (int l = 0; l <= (box ? lmax : g.ny - 1); ++l)
        for (int k = 0; k <= (box ? kmax : g.nx - 1); ++k) {
            if (k == 0 && l == 0) continue;
            cand.push_back({k, l, eigenvalue_discrete(g, k, l), eigenvalue_continuum(g, k, l),
                            s.alpha(k, l)});
        }
    std::sort(cand.begin(), cand.end(), [](const ModeCoefficient& a, const ModeCoefficient& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.k != b.k) return a.k < b.k;
        return a.l < b.l;
    });
    cand.resize(static_cast<std::size_t>(n_modes));
    return cand;
}

ScalarField apply_neumann_laplacian(const ScalarField& phi) {
    const Grid& g = phi.grid;
    ScalarField out(g);
    const double ax = 1.0 / (g.hx() * g.hx()), ay = 1.0 / (g.hy() * g.hy());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double c = phi.at(i, j);
            const double xm = phi.at(i > 0 ? i - 1 : 0, j);
            const double xp = phi.at(i < g.nx - 1 ? i + 1 : g.nx - 1, j);
            const double ym = phi.at(i, j > 0 ? j - 1 : 0);
            const double yp = phi.at(i, j < g.ny - 1 ? j + 1 : g.ny - 1);
            out.at(i, j) = ax * (2.0 * c - xm - xp) + ay * (2.0 * c - ym - yp);
        }
    }
    return out;
}

double quad_inner(const ScalarField& a, const ScalarField& b) {
    std::vector<double> prod(a.values.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a.values[i] * b.values[i];
    return compensated_sum(prod) * a.grid.cell_area();
}

} // namespace pef
