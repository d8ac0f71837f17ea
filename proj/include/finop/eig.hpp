#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "finop/matrix.hpp"

namespace finop {

// Hermitian eigendecomposition A = V diag(values) V*, eigenvalues in
// decreasing order. Cyclic Jacobi with complex plane rotations; backward
// error stays near machine precision for the dimensions used here (<= ~512).
struct EigResult {
    std::vector<double> values;  // decreasing
    Matrix vectors;              // unitary, k-th column pairs with values[k]
};

namespace detail {

// One-sided threshold below which an off-diagonal entry is left alone.
inline double jacobi_skip_threshold(double scale, std::size_t n) {
    return scale * 1e-14 / static_cast<double>(std::max<std::size_t>(n, 1));
}

}  // namespace detail

inline EigResult jacobi_eigh(const Matrix& a_in, int max_sweeps = 64) {
    if (!a_in.is_square()) raise(errc::non_square, "eigendecomposition needs a square matrix");
    const std::size_t n = a_in.rows();
    Matrix a = a_in;
    Matrix v = Matrix::identity(n);
    if (n <= 1) {
        EigResult r;
        r.values.assign(n, n == 1 ? std::real(a(0, 0)) : 0.0);
        r.vectors = v;
        return r;
    }

    const double scale = std::max(a.max_abs(), 1e-300);
    const double skip = detail::jacobi_skip_threshold(scale, n);
    cplx* A = a.data();
    cplx* V = v.data();

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off_max = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = A[p * n + q];
                const double b = std::abs(apq);
                off_max = std::max(off_max, b);
                if (b <= skip) continue;

                const double app = std::real(A[p * n + p]);
                const double aqq = std::real(A[q * n + q]);
                const cplx u = apq / b;  // phase of a_pq

                // tan(2 theta) = 2|a_pq| / (a_qq - a_pp), stable form
                const double theta = (aqq - app) / (2.0 * b);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx su = s * u;
                const cplx su_conj = s * std::conj(u);

                // rows p and q of J* A
                cplx* rp = A + p * n;
                cplx* rq = A + q * n;
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = rp[k];
                    const cplx akq = rq[k];
                    rp[k] = c * akp - su * akq;
                    rq[k] = su_conj * akp + c * akq;
                }
                // columns p and q of (J* A) J
                for (std::size_t k = 0; k < n; ++k) {
                    cplx* row = A + k * n;
                    const cplx akp = row[p];
                    const cplx akq = row[q];
                    row[p] = c * akp - su_conj * akq;
                    row[q] = su * akp + c * akq;
                }
                // accumulate V <- V J
                for (std::size_t k = 0; k < n; ++k) {
                    cplx* row = V + k * n;
                    const cplx vkp = row[p];
                    const cplx vkq = row[q];
                    row[p] = c * vkp - su_conj * vkq;
                    row[q] = su * vkp + c * vkq;
                }
                A[p * n + p] = std::real(A[p * n + p]);
                A[q * n + q] = std::real(A[q * n + q]);
                A[p * n + q] = 0.0;
                A[q * n + p] = 0.0;
            }
        }
        if (off_max <= skip) break;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = std::real(a(i, i));
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return diag[i] > diag[j]; });

    EigResult r;
    r.values.resize(n);
    r.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = diag[order[k]];
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
    }
    return r;
}

namespace detail {

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form A = U T U*. Returns diagonal d, subdiagonal e (nonnegative), and the
// accumulated unitary U.
inline void hermitian_tridiagonalize(Matrix a, std::vector<double>& d, std::vector<double>& e,
                                     Matrix& u) {
    const std::size_t n = a.rows();
    u = Matrix::identity(n);
    d.assign(n, 0.0);
    e.assign(n > 0 ? n - 1 : 0, 0.0);
    if (n < 2) {
        if (n == 1) d[0] = std::real(a(0, 0));
        return;
    }

    std::vector<cplx> hv(n), p(n), w(n), uu(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) xnorm2 += std::norm(a(j, k));
        if (xnorm2 == 0.0) continue;
        const double anorm = std::sqrt(xnorm2);
        const cplx alpha = a(k + 1, k);
        const double aabs = std::abs(alpha);
        const cplx phase = aabs > 0.0 ? alpha / aabs : cplx(1.0);
        const cplx beta = -phase * anorm;

        // u = x - beta e1; |u|^2 = 2 anorm (anorm + |alpha|), no cancellation
        for (std::size_t j = k + 1; j < n; ++j) hv[j] = a(j, k);
        hv[k + 1] -= beta;
        const double unorm2 = 2.0 * anorm * (anorm + aabs);
        const double tau = 2.0 / unorm2;

        // trailing block update B <- B - u w* - w u*, w = tau B u - kappa u
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx s = 0.0;
            const cplx* row = a.data() + i * n;
            for (std::size_t j = k + 1; j < n; ++j) s += row[j] * hv[j];
            p[i] = tau * s;
        }
        cplx updot = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) updot += std::conj(hv[j]) * p[j];
        const cplx kappa = 0.5 * tau * updot;
        for (std::size_t j = k + 1; j < n; ++j) w[j] = p[j] - kappa * hv[j];
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx* row = a.data() + i * n;
            const cplx ui = hv[i];
            const cplx wi = w[i];
            for (std::size_t j = k + 1; j < n; ++j)
                row[j] -= ui * std::conj(w[j]) + wi * std::conj(hv[j]);
        }
        a(k + 1, k) = beta;
        a(k, k + 1) = std::conj(beta);
        for (std::size_t j = k + 2; j < n; ++j) {
            a(j, k) = 0.0;
            a(k, j) = 0.0;
        }

        // accumulate U <- U H on columns k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            const cplx* row = u.data() + i * n;
            for (std::size_t j = k + 1; j < n; ++j) s += row[j] * hv[j];
            uu[i] = tau * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx* row = u.data() + i * n;
            const cplx s = uu[i];
            for (std::size_t j = k + 1; j < n; ++j) row[j] -= s * std::conj(hv[j]);
        }
    }

    // strip phases off the subdiagonal so T becomes real
    cplx ph = 1.0;
    std::vector<cplx> col_phase(n, cplx(1.0));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const cplx sub = a(i + 1, i);
        const double m = std::abs(sub);
        e[i] = m;
        if (m > 0.0) ph *= sub / m;
        col_phase[i + 1] = ph;
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = std::real(a(i, i));
    for (std::size_t j = 1; j < n; ++j) {
        const cplx f = col_phase[j];
        if (f == cplx(1.0)) continue;
        for (std::size_t i = 0; i < n; ++i) u(i, j) *= f;
    }
}

// Implicit-shift QL iteration on a real symmetric tridiagonal matrix with
// accumulation of the rotations into the complex column basis u.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Matrix& u) {
    const std::size_t n = d.size();
    if (n < 2) return;
    const double eps = 2.22e-16;
    e.push_back(0.0);
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) break;  // accept current accuracy
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    double f = s * e[ii];
                    const double b = c * e[ii];
                    r = std::hypot(f, g);
                    e[ii + 1] = r;
                    if (r == 0.0) {
                        d[ii + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[ii + 1] - p;
                    r = (d[ii] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[ii + 1] = g + p;
                    g = c * r - b;
                    cplx* ud = u.data();
                    const std::size_t nn = u.rows();
                    for (std::size_t k = 0; k < nn; ++k) {
                        cplx* row = ud + k * nn;
                        const cplx fk = row[ii + 1];
                        row[ii + 1] = s * row[ii] + c * fk;
                        row[ii] = c * row[ii] - s * fk;
                    }
                }
                if (r == 0.0 && m - l > 1) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    e.pop_back();
}

}  // namespace detail

// Householder + implicit QL path; same contract as jacobi_eigh but O(n^3)
// with a small constant, suitable for the grid-sized problems (n ~ 512).
inline EigResult tridiagonal_eigh(const Matrix& a_in) {
    if (!a_in.is_square()) raise(errc::non_square, "eigendecomposition needs a square matrix");
    std::vector<double> d, e;
    Matrix u;
    detail::hermitian_tridiagonalize(a_in, d, e, u);
    detail::tridiagonal_ql(d, e, u);

    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] > d[j]; });
    EigResult r;
    r.values.resize(n);
    r.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = d[order[k]];
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = u(i, order[k]);
    }
    return r;
}

// Main entry: Jacobi for small problems, tridiagonal reduction for large.
inline EigResult eigh(const Matrix& a) {
    return a.rows() <= 48 ? jacobi_eigh(a) : tridiagonal_eigh(a);
}

// Thin singular value decomposition M = U diag(s) V*, singular values
// decreasing. One-sided Jacobi on columns: no Gram squaring, so small
// singular values keep full relative accuracy and the rank cutoffs below
// can be as tight as 1e-10 * sigma_max.
struct SvdResult {
    std::vector<double> values;  // length cols, decreasing
    Matrix u;                    // rows x cols, orthonormal columns where s > 0
    Matrix v;                    // cols x cols, unitary
};

inline SvdResult svd(const Matrix& m_in, int max_sweeps = 60) {
    const std::size_t rows = m_in.rows(), cols = m_in.cols();
    Matrix b = m_in;
    Matrix v = Matrix::identity(cols);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                cplx gamma = 0.0;
                double alpha = 0.0, beta = 0.0;
                for (std::size_t i = 0; i < rows; ++i) {
                    const cplx bp = b(i, p), bq = b(i, q);
                    alpha += std::norm(bp);
                    beta += std::norm(bq);
                    gamma += std::conj(bp) * bq;
                }
                const double g = std::abs(gamma);
                if (g <= 1e-15 * std::sqrt(alpha * beta) || g == 0.0) continue;
                rotated = true;
                const cplx u = gamma / g;
                const double theta = (beta - alpha) / (2.0 * g);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx su = s * u;
                const cplx su_conj = s * std::conj(u);
                for (std::size_t i = 0; i < rows; ++i) {
                    const cplx bp = b(i, p), bq = b(i, q);
                    b(i, p) = c * bp - su_conj * bq;
                    b(i, q) = su * bp + c * bq;
                }
                for (std::size_t i = 0; i < cols; ++i) {
                    const cplx vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - su_conj * vq;
                    v(i, q) = su * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> norms(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += std::norm(b(i, j));
        norms[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

    SvdResult r;
    r.values.resize(cols);
    r.u = Matrix(rows, cols);
    r.v = Matrix(cols, cols);
    for (std::size_t k = 0; k < cols; ++k) {
        const std::size_t j = order[k];
        r.values[k] = norms[j];
        const double inv = norms[j] > 0.0 ? 1.0 / norms[j] : 0.0;
        for (std::size_t i = 0; i < rows; ++i) r.u(i, k) = b(i, j) * inv;
        for (std::size_t i = 0; i < cols; ++i) r.v(i, k) = v(i, j);
    }
    return r;
}

inline std::vector<double> singular_values(const Matrix& m) { return svd(m).values; }

// Orthonormal basis (columns) of the numerical null space of M, using the
// relative singular-value cutoff rel_threshold * sigma_max.
inline Matrix null_space(const Matrix& m, double rel_threshold = 1e-10) {
    const SvdResult s = svd(m);
    const double smax = s.values.empty() ? 0.0 : s.values.front();
    const double cut = rel_threshold * smax;
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < s.values.size(); ++k)
        if (s.values[k] <= cut) keep.push_back(k);
    Matrix basis(m.cols(), keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j)
        for (std::size_t i = 0; i < m.cols(); ++i) basis(i, j) = s.v(i, keep[j]);
    return basis;
}

inline std::size_t rank(const Matrix& m, double rel_threshold = 1e-10) {
    const std::vector<double> s = singular_values(m);
    if (s.empty() || s.front() <= 0.0) return 0;
    const double cut = rel_threshold * s.front();
    std::size_t r = 0;
    for (double sv : s)
        if (sv > cut) ++r;
    return r;
}

// Minimum-norm least squares solution X of A X = B through the SVD
// pseudoinverse with relative cutoff.
inline Matrix least_squares(const Matrix& a, const Matrix& b, double rel_threshold = 1e-12) {
    if (a.rows() != b.rows()) raise(errc::dim_mismatch, "least_squares shape mismatch");
    const SvdResult s = svd(a);
    const double cut = s.values.empty() ? 0.0 : rel_threshold * s.values.front();
    Matrix coeffs = s.u.adjoint() * b;
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        const cplx f = s.values[k] > cut ? cplx(1.0 / s.values[k]) : cplx(0.0);
        for (std::size_t j = 0; j < coeffs.cols(); ++j) coeffs(k, j) *= f;
    }
    return s.v * coeffs;
}

}  // namespace finop
