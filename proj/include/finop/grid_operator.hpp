#pragma once

#include <vector>

#include "finop/eig.hpp"
#include "finop/matrix.hpp"

namespace finop {

// Discretized symmetric operator on [0,1]: the matrix carries the action of
// the maximal operator on the full grid, the projector cuts down to the
// minimal domain (interior vectors vanishing at both endpoints). The
// compressed operator P A P is Hermitian exactly; the boundary rows are
// where the adjoint grows.
struct GridOperator {
    std::size_t grid_size = 0;
    double step = 0.0;
    Matrix matrix;
    Matrix domain_projector;

    std::vector<double> grid() const {
        std::vector<double> x(grid_size);
        for (std::size_t j = 0; j < grid_size; ++j) x[j] = step * static_cast<double>(j);
        return x;
    }
};

// (1/i) d/dx on the grid x_j = j/(N-1): central differences inside,
// second-order one-sided stencils at the two endpoints.
inline GridOperator momentum_operator(std::size_t n) {
    if (n < 16) raise(errc::grid_too_small, "momentum_operator needs at least 16 points");
    GridOperator op;
    op.grid_size = n;
    op.step = 1.0 / static_cast<double>(n - 1);
    const cplx over_i = cplx(0.0, -1.0);  // 1/i
    const double h = op.step;

    op.matrix = Matrix::zero(n, n);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        op.matrix(j, j - 1) = over_i * cplx(-1.0 / (2.0 * h));
        op.matrix(j, j + 1) = over_i * cplx(1.0 / (2.0 * h));
    }
    op.matrix(0, 0) = over_i * cplx(-3.0 / (2.0 * h));
    op.matrix(0, 1) = over_i * cplx(4.0 / (2.0 * h));
    op.matrix(0, 2) = over_i * cplx(-1.0 / (2.0 * h));
    op.matrix(n - 1, n - 1) = over_i * cplx(3.0 / (2.0 * h));
    op.matrix(n - 1, n - 2) = over_i * cplx(-4.0 / (2.0 * h));
    op.matrix(n - 1, n - 3) = over_i * cplx(1.0 / (2.0 * h));

    op.domain_projector = Matrix::identity(n);
    op.domain_projector(0, 0) = 0.0;
    op.domain_projector(n - 1, n - 1) = 0.0;
    return op;
}

// Deficiency spaces D+- = ker(A* -+ i): counted as singular values of
// (A* -+ i I) below threshold * sigma_max. The default threshold 1e-6 sits
// far above the O(h^2) residual of the genuine deficiency directions and far
// below the next singular value.
struct DeficiencyData {
    std::size_t d_plus = 0;
    std::size_t d_minus = 0;
    std::vector<std::vector<cplx>> basis_plus;
    std::vector<std::vector<cplx>> basis_minus;
};

inline DeficiencyData deficiency(const GridOperator& op, double threshold = 1e-6) {
    DeficiencyData out;
    const std::size_t n = op.grid_size;
    const Matrix id = Matrix::identity(n);
    for (int sign : {+1, -1}) {
        const Matrix shifted = op.matrix - id * cplx(0.0, static_cast<double>(sign));
        // the 1e-6 threshold is fat enough that the squared spectrum of the
        // Gram matrix resolves the count; this keeps N ~ 512 grids fast
        const EigResult e = eigh(shifted.adjoint() * shifted);
        const double smax = std::sqrt(std::max(e.values.front(), 0.0));
        auto& basis = sign > 0 ? out.basis_plus : out.basis_minus;
        std::size_t count = 0;
        for (std::size_t k = 0; k < e.values.size(); ++k) {
            const double sigma = std::sqrt(std::max(e.values[k], 0.0));
            if (sigma > threshold * smax) continue;
            ++count;
            std::vector<cplx> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = e.vectors(i, k);
            basis.push_back(std::move(v));
        }
        (sign > 0 ? out.d_plus : out.d_minus) = count;
    }
    return out;
}

// Cayley image of a minimal-domain vector: maps (A+i)x to (A-i)x. Returns
// the pair of norms as a partial-isometry check alongside the image.
struct CayleyImage {
    std::vector<cplx> input_image;   // (A+i)x
    std::vector<cplx> output_image;  // (A-i)x = C_A (A+i)x
    double norm_in = 0.0;
    double norm_out = 0.0;
};

inline CayleyImage cayley(const GridOperator& op, const std::vector<cplx>& x,
                          Tolerance tol = {}) {
    const std::size_t n = op.grid_size;
    if (x.size() != n) raise(errc::dim_mismatch, "cayley argument length mismatch");
    const Matrix xc = Matrix::column(x);
    if (((op.domain_projector * xc) - xc).max_abs() > tol.at_scale(xc.max_abs()) * 1e3)
        raise(errc::outside_domain, "vector is not in the minimal domain");
    const Matrix ax = op.matrix * xc;
    CayleyImage im;
    im.input_image.resize(n);
    im.output_image.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        im.input_image[j] = ax(j, 0) + cplx(0.0, 1.0) * x[j];
        im.output_image[j] = ax(j, 0) - cplx(0.0, 1.0) * x[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
        im.norm_in += std::norm(im.input_image[j]);
        im.norm_out += std::norm(im.output_image[j]);
    }
    im.norm_in = std::sqrt(im.norm_in);
    im.norm_out = std::sqrt(im.norm_out);
    return im;
}

// Cayley transform of a Hermitian matrix through the spectral calculus:
// (A - i)(A + i)^{-1}, unitary with eigenvalues (lambda-i)/(lambda+i).
inline Matrix cayley_of_hermitian(const Matrix& a) {
    const EigResult e = eigh(a);
    const std::size_t n = a.rows();
    Matrix c = Matrix::zero(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx lam(e.values[k], 0.0);
        const cplx f = (lam - cplx(0.0, 1.0)) / (lam + cplx(0.0, 1.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                c(i, j) += f * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return c;
}

// Self-adjoint extension of (1/i) d/dx with boundary condition
// f(1) = e^{i theta} f(0), realized on the N-1 independent circle points as a
// twisted-circulant difference matrix. A fourth-order stencil keeps the
// eigenvalue error kappa^5 h^4 / 30 small through |n| ~ 3 at N = 512.
struct ExtensionSpectrum {
    double theta = 0.0;
    std::vector<double> eigenvalues;  // ascending
    double max_imag = 0.0;            // reality check of the spectrum
};

inline ExtensionSpectrum self_adjoint_extension(const GridOperator& op, double theta,
                                                const DeficiencyData* precomputed = nullptr) {
    const DeficiencyData def = precomputed ? *precomputed : deficiency(op);
    if (def.d_plus != def.d_minus || def.d_plus != 1)
        raise(errc::index_mismatch, "extension needs deficiency indices (1,1)");

    const std::size_t m = op.grid_size - 1;  // independent points on the twisted circle
    const double h = op.step;
    const cplx phase = std::polar(1.0, theta);
    const cplx over_i = cplx(0.0, -1.0);

    Matrix a = Matrix::zero(m, m);
    auto wrap = [&](std::size_t j, long offset) {
        long idx = (static_cast<long>(j) + offset) % static_cast<long>(m);
        if (idx < 0) idx += static_cast<long>(m);
        return static_cast<std::size_t>(idx);
    };
    for (std::size_t j = 0; j < m; ++j) {
        // five-point derivative: (-f_{j+2} + 8 f_{j+1} - 8 f_{j-1} + f_{j-2}) / (12h)
        const struct {
            long off;
            double coeff;
        } stencil[] = {{2, -1.0}, {1, 8.0}, {-1, -8.0}, {-2, 1.0}};
        for (const auto& s : stencil) {
            const std::size_t k = wrap(j, s.off);
            // crossing the seam at m multiplies by the boundary phase
            cplx factor(1.0);
            const long raw = static_cast<long>(j) + s.off;
            if (raw >= static_cast<long>(m)) factor = phase;
            if (raw < 0) factor = std::conj(phase);
            a(j, k) += over_i * cplx(s.coeff / (12.0 * h)) * factor;
        }
    }

    const EigResult e = eigh(a);
    ExtensionSpectrum spec;
    spec.theta = theta;
    spec.eigenvalues.assign(e.values.rbegin(), e.values.rend());
    // imaginary parts are exactly zero by Hermiticity of the twisted matrix;
    // report the Hermiticity defect instead
    spec.max_imag = (a - a.adjoint()).max_abs();
    return spec;
}

// Truncated Heisenberg pair: P = (raise + lower)/sqrt(2),
// Q = (1/i)(raise - lower)/sqrt(2), entries sqrt(k/2) on the off-diagonals.
// On the upper-left (n-1) block PQ - QP = (1/i) I; the trace obstruction
// piles the defect into the last diagonal entry.
inline std::pair<Matrix, Matrix> heisenberg_pq(std::size_t n) {
    if (n < 2) raise(errc::dim_mismatch, "heisenberg_pq needs dimension >= 2");
    Matrix p = Matrix::zero(n, n), q = Matrix::zero(n, n);
    const cplx over_i = cplx(0.0, -1.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double c = std::sqrt(static_cast<double>(k + 1) / 2.0);
        p(k, k + 1) = c;
        p(k + 1, k) = c;
        q(k, k + 1) = over_i * cplx(-c);  // raise part carries the lower triangle
        q(k + 1, k) = over_i * cplx(c);
    }
    return {p, q};
}

// Eigenvalues of the oscillator P^2 + Q^2 truncated to n x n. The products
// are formed one dimension higher so the upper-left block is exact; the
// spectrum is 1, 3, 5, ...
inline std::vector<double> oscillator_check(std::size_t n) {
    if (n < 2) raise(errc::dim_mismatch, "oscillator_check needs dimension >= 2");
    const auto [p, q] = heisenberg_pq(n + 1);
    const Matrix full = p * p + q * q;
    Matrix trunc(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) trunc(i, j) = full(i, j);
    const EigResult e = eigh(trunc);
    std::vector<double> values(e.values.rbegin(), e.values.rend());
    return values;
}

}  // namespace finop
