#pragma once

#include <optional>
#include <vector>

#include "finop/eig.hpp"
#include "finop/matrix.hpp"

namespace finop {

// Linear description of { X : X A_i = A_i X for all generators }.
// basis is linearly independent; dimension = basis.size().
struct CommutantReport {
    std::size_t dimension = 0;
    std::vector<Matrix> basis;
    bool is_abelian = false;
    // k when the commutant is a full matrix factor M_k (dimension k^2 with
    // one-dimensional center); empty otherwise.
    std::optional<std::size_t> matrix_block_size;
};

namespace detail {

// Stacked Sylvester system: vec(X) lies in the null space of rows
// (A_i^T kron I) - (I kron A_i), using column-major vec.
inline Matrix commutant_system(const std::vector<Matrix>& generators) {
    const std::size_t n = generators.front().rows();
    const Matrix id = Matrix::identity(n);
    Matrix sys(generators.size() * n * n, n * n);
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const Matrix block = kron(generators[g].transpose(), id) - kron(id, generators[g]);
        for (std::size_t i = 0; i < n * n; ++i)
            for (std::size_t j = 0; j < n * n; ++j) sys(g * n * n + i, j) = block(i, j);
    }
    return sys;
}

// Column matrix holding vec(m), convenient as a least-squares right side.
inline Matrix vec_column(const Matrix& m) {
    const auto v = vec(m);
    Matrix b(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) b(i, 0) = v[i];
    return b;
}

// Least-squares membership of target in span(basis): returns the sup-norm
// residual of the best approximation.
inline double span_residual(const std::vector<Matrix>& basis, const Matrix& target) {
    if (basis.empty()) return target.max_abs();
    const std::size_t rows = basis.front().rows() * basis.front().cols();
    Matrix a(rows, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto v = vec(basis[j]);
        for (std::size_t i = 0; i < rows; ++i) a(i, j) = v[i];
    }
    const Matrix b = vec_column(target);
    const Matrix coef = least_squares(a, b);
    return (a * coef - b).max_abs();
}

}  // namespace detail

inline CommutantReport commutant(const std::vector<Matrix>& generators,
                                 double rank_threshold = 1e-10) {
    if (generators.empty()) raise(errc::dim_mismatch, "commutant needs at least one generator");
    const std::size_t n = generators.front().rows();
    for (const Matrix& g : generators)
        if (!g.is_square() || g.rows() != n)
            raise(errc::dim_mismatch, "generators must be square of equal dimension");

    const Matrix sys = detail::commutant_system(generators);
    const Matrix null_basis = null_space(sys, rank_threshold);

    CommutantReport rep;
    for (std::size_t k = 0; k < null_basis.cols(); ++k) {
        std::vector<cplx> v(n * n);
        for (std::size_t i = 0; i < n * n; ++i) v[i] = null_basis(i, k);
        rep.basis.push_back(unvec(v, n, n));
    }
    rep.dimension = rep.basis.size();

    const double tol = 1e-8;
    rep.is_abelian = true;
    for (std::size_t a = 0; a < rep.basis.size() && rep.is_abelian; ++a)
        for (std::size_t b = a + 1; b < rep.basis.size(); ++b)
            if ((rep.basis[a] * rep.basis[b] - rep.basis[b] * rep.basis[a]).max_abs() > tol) {
                rep.is_abelian = false;
                break;
            }

    // factor detection: dimension k^2 and a one-dimensional center
    const auto k = static_cast<std::size_t>(std::lround(std::sqrt(double(rep.dimension))));
    if (k * k == rep.dimension && rep.dimension > 0) {
        // center = elements of span(basis) commuting with every basis element
        const std::size_t d = rep.dimension;
        Matrix center_sys(d * n * n, d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t l = 0; l < d; ++l) {
                const Matrix c = rep.basis[j] * rep.basis[l] - rep.basis[l] * rep.basis[j];
                const auto v = vec(c);
                for (std::size_t i = 0; i < n * n; ++i) center_sys(l * n * n + i, j) = v[i];
            }
        const std::size_t center_dim = null_space(center_sys, rank_threshold).cols();
        if (center_dim == 1) rep.matrix_block_size = k;
    }
    return rep;
}

// Schur test: with adjoints appended the generating set is *-closed, and the
// representation is irreducible exactly when the commutant is the scalars.
inline bool is_irreducible(const std::vector<Matrix>& generators) {
    std::vector<Matrix> closed = generators;
    for (const Matrix& g : generators) closed.push_back(g.adjoint());
    return commutant(closed).dimension == 1;
}

// Commutant of { A + ... + A (k copies) : A in M_n }: isomorphic to M_k,
// realized as I_n kron M_k blocks.
inline CommutantReport multiplicity_of_identity_amplification(std::size_t k, std::size_t n) {
    if (k < 1 || n < 1)
        raise(errc::dim_mismatch, "multiplicity_of_identity_amplification needs k, n >= 1");
    std::vector<Matrix> gens;
    gens.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Matrix unit = Matrix::zero(n, n);
            unit(i, j) = 1.0;
            Matrix amp = Matrix::zero(n * k, n * k);
            for (std::size_t c = 0; c < k; ++c)
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b) amp(c * n + a, c * n + b) = unit(a, b);
            gens.push_back(std::move(amp));
        }
    return commutant(gens);
}

// Dimension of the unital algebra generated by a set of matrices, by closing
// the span under products until it stabilizes.
inline std::size_t generated_algebra_dimension(const std::vector<Matrix>& generators,
                                               double rank_threshold = 1e-10) {
    if (generators.empty()) raise(errc::dim_mismatch, "empty generator set");
    const std::size_t n = generators.front().rows();

    std::vector<Matrix> span_basis;
    auto add_if_independent = [&](const Matrix& m) {
        Matrix a(n * n, span_basis.size() + 1);
        for (std::size_t j = 0; j < span_basis.size(); ++j) {
            const auto v = vec(span_basis[j]);
            for (std::size_t i = 0; i < n * n; ++i) a(i, j) = v[i];
        }
        const auto v = vec(m);
        for (std::size_t i = 0; i < n * n; ++i) a(i, span_basis.size()) = v[i];
        if (rank(a, rank_threshold) == span_basis.size() + 1) {
            span_basis.push_back(m);
            return true;
        }
        return false;
    };

    add_if_independent(Matrix::identity(n));
    for (const Matrix& g : generators) add_if_independent(g);
    bool grew = true;
    while (grew && span_basis.size() < n * n) {
        grew = false;
        const std::size_t cur = span_basis.size();
        for (std::size_t a = 0; a < cur && span_basis.size() < n * n; ++a)
            for (std::size_t b = 0; b < cur && span_basis.size() < n * n; ++b)
                if (add_if_independent(span_basis[a] * span_basis[b])) grew = true;
    }
    return span_basis.size();
}

}  // namespace finop
