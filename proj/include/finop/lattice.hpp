#pragma once

#include "finop/eig.hpp"
#include "finop/matrix.hpp"

namespace finop {

namespace detail {

inline void require_projection(const Matrix& p, Tolerance tol, const char* name) {
    if (!is_projection(p, tol)) raise(errc::not_projection, name);
}

// Projection onto the span of the eigenvectors of a Hermitian PSD matrix
// with eigenvalue above cut.
inline Matrix range_projection(const Matrix& psd, double cut) {
    EigResult e = eigh(psd);
    Matrix p = Matrix::zero(psd.rows(), psd.cols());
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        if (e.values[k] <= cut) continue;
        for (std::size_t i = 0; i < psd.rows(); ++i)
            for (std::size_t j = 0; j < psd.cols(); ++j)
                p(i, j) += e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return p;
}

}  // namespace detail

// P ^ Q: projection onto range(P) /\ range(Q), realized as the projection
// onto the null space of (I-P) + (I-Q). A vector is in both ranges exactly
// when that PSD sum annihilates it.
inline Matrix meet(const Matrix& p, const Matrix& q, Tolerance tol = {}) {
    detail::require_projection(p, tol, "meet: first argument");
    detail::require_projection(q, tol, "meet: second argument");
    if (p.rows() != q.rows()) raise(errc::dim_mismatch, "meet dimension mismatch");
    const Matrix id = Matrix::identity(p.rows());
    const Matrix s = (id - p) + (id - q);
    return id - detail::range_projection(s, 1e-8);
}

// P v Q: projection onto span(range(P) u range(Q)) = range of P + Q.
inline Matrix join(const Matrix& p, const Matrix& q, Tolerance tol = {}) {
    detail::require_projection(p, tol, "join: first argument");
    detail::require_projection(q, tol, "join: second argument");
    if (p.rows() != q.rows()) raise(errc::dim_mismatch, "join dimension mismatch");
    return detail::range_projection(p + q, 1e-8);
}

// P <= Q in the projection order, i.e. range containment; equivalent to PQ = P.
inline bool leq(const Matrix& p, const Matrix& q, Tolerance tol = {}) {
    detail::require_projection(p, tol, "leq: first argument");
    detail::require_projection(q, tol, "leq: second argument");
    if (p.rows() != q.rows()) raise(errc::dim_mismatch, "leq dimension mismatch");
    return (p * q - p).max_abs() <= tol.at_scale(1.0);
}

// P + Q is again a projection exactly when the ranges are orthogonal (PQ = 0).
inline bool sum_is_projection(const Matrix& p, const Matrix& q, Tolerance tol = {}) {
    detail::require_projection(p, tol, "sum_is_projection: first argument");
    detail::require_projection(q, tol, "sum_is_projection: second argument");
    if (p.rows() != q.rows()) raise(errc::dim_mismatch, "sum_is_projection dimension mismatch");
    return (p * q).max_abs() <= tol.at_scale(1.0) && (q * p).max_abs() <= tol.at_scale(1.0);
}

}  // namespace finop
