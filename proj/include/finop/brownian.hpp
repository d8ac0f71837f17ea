#pragma once

#include <vector>

#include "finop/eig.hpp"
#include "finop/matrix.hpp"
#include "finop/rng.hpp"

namespace finop {

// Midpoint discretization of the Brownian covariance kernel min(s,t) on
// [0,1]: t_k = (k - 1/2)/N with quadrature weight 1/N folded into the
// matrix, so its eigenvalues approximate those of the integral operator.
// The midpoint grid keeps the leading eigenvalue within O(1/N^2) of
// 4/pi^2; right-endpoint sampling would bias it by ~1/N.
struct KernelDiscretization {
    std::size_t grid_size = 0;
    std::vector<double> grid;
    Matrix matrix;
};

inline KernelDiscretization brownian_kernel(std::size_t n) {
    KernelDiscretization k;
    k.grid_size = n;
    k.grid.resize(n);
    const double invn = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) k.grid[j] = (static_cast<double>(j) + 0.5) * invn;
    k.matrix = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            k.matrix(i, j) = std::min(k.grid[i], k.grid[j]) * invn;
    return k;
}

// Karhunen-Loeve basis: top-m eigenpairs. Eigenfunctions are normalized in
// the quadrature inner product (1/N) sum phi^2 = 1, the discrete L^2[0,1]
// normalization, so paths built from them have covariance min(s,t).
struct KLBasis {
    std::size_t grid_size = 0;
    std::vector<double> grid;
    std::vector<double> eigenvalues;            // decreasing, positive
    std::vector<std::vector<double>> functions; // one grid vector per mode
};

inline KLBasis kl_decompose(std::size_t n, std::size_t modes) {
    if (modes > n) raise(errc::bad_mode_count, "more modes than grid points");
    const KernelDiscretization k = brownian_kernel(n);
    const EigResult e = eigh(k.matrix);

    KLBasis basis;
    basis.grid_size = n;
    basis.grid = k.grid;
    const double scale = std::sqrt(static_cast<double>(n));
    for (std::size_t m = 0; m < modes; ++m) {
        basis.eigenvalues.push_back(e.values[m]);
        std::vector<double> f(n);
        // eigenvectors of the real symmetric kernel carry a constant phase
        cplx phase = 0.0;
        for (std::size_t j = 0; j < n; ++j) phase += e.vectors(j, m);
        const double mag = std::abs(phase);
        const cplx align = mag > 1e-12 ? std::conj(phase) / mag : cplx(1.0);
        for (std::size_t j = 0; j < n; ++j) f[j] = std::real(align * e.vectors(j, m)) * scale;
        basis.functions.push_back(std::move(f));
    }
    return basis;
}

// Residual of the defining boundary problem: u = K f solves -u'' = f with
// u(0) = 0 and u'(1) = 0. Reports the interior sup-norm residual of the
// second difference and the extrapolated boundary value.
struct KernelOdeReport {
    std::vector<double> solution;
    double interior_residual = 0.0;
    double left_boundary_value = 0.0;
};

inline KernelOdeReport kernel_solves_ode(const std::vector<double>& f_values, std::size_t n) {
    if (f_values.size() != n) raise(errc::dim_mismatch, "sample count mismatch");
    const KernelDiscretization k = brownian_kernel(n);
    KernelOdeReport rep;
    rep.solution.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::real(k.matrix(i, j)) * f_values[j];
        rep.solution[i] = s;
    }
    const double h = 1.0 / static_cast<double>(n);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double second =
            (rep.solution[j + 1] - 2.0 * rep.solution[j] + rep.solution[j - 1]) / (h * h);
        rep.interior_residual = std::max(rep.interior_residual, std::abs(-second - f_values[j]));
    }
    // extrapolate u to t = 0 through the first two midpoints
    rep.left_boundary_value = 1.5 * rep.solution[0] - 0.5 * rep.solution[1];
    return rep;
}

// B(t_j) = sum_m sqrt(lambda_m) phi_m(t_j) Z_m with i.i.d. standard normals
// from the seeded generator. Deterministic given the seed.
inline std::vector<std::vector<double>> sample_paths(const KLBasis& basis, std::size_t count,
                                                     std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> paths(count, std::vector<double>(basis.grid_size, 0.0));
    std::vector<double> roots(basis.eigenvalues.size());
    for (std::size_t m = 0; m < roots.size(); ++m)
        roots[m] = std::sqrt(std::max(basis.eigenvalues[m], 0.0));
    for (std::size_t p = 0; p < count; ++p) {
        for (std::size_t m = 0; m < roots.size(); ++m) {
            const double z = rng.gaussian() * roots[m];
            const auto& phi = basis.functions[m];
            for (std::size_t j = 0; j < basis.grid_size; ++j) paths[p][j] += z * phi[j];
        }
    }
    return paths;
}

// Empirical covariance of an ensemble of paths (mean not subtracted; the
// process is centered by construction).
inline Matrix empirical_covariance(const std::vector<std::vector<double>>& paths) {
    if (paths.empty()) raise(errc::dim_mismatch, "no paths");
    const std::size_t n = paths.front().size();
    Matrix cov = Matrix::zero(n, n);
    for (const auto& path : paths)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) cov(i, j) += path[i] * path[j];
    const double inv = 1.0 / static_cast<double>(paths.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            cov(i, j) = std::real(cov(i, j)) * inv;
            cov(j, i) = cov(i, j);
        }
    return cov;
}

}  // namespace finop
