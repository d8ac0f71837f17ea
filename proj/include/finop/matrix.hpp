#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "finop/error.hpp"

namespace finop {

using cplx = std::complex<double>;

// Absolute/relative tolerance pair used by every structural predicate.
// Defaults are suited to double precision at dimensions up to ~64.
struct Tolerance {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;

    double at_scale(double scale) const { return abs_tol + rel_tol * scale; }
};

// Dense complex matrix, row-major. Values are immutable in spirit: the
// library never mutates an argument, every operation returns a fresh value.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> entries)
        : rows_(rows), cols_(cols), a_(entries) {
        if (a_.size() != rows * cols) raise(errc::dim_mismatch, "entry count != rows*cols");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    // Column vector from entries.
    static Matrix column(const std::vector<cplx>& v) {
        Matrix m(v.size(), 1);
        m.a_ = v;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return a_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }
    const std::vector<cplx>& entries() const { return a_; }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
        return r;
    }

    Matrix operator-() const {
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) raise(errc::dim_mismatch, "matrix product shape mismatch");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            const cplx* ai = a_.data() + i * cols_;
            cplx* ri = r.a_.data() + i * o.cols_;
            for (std::size_t k = 0; k < cols_; ++k) {
                const cplx aik = ai[k];
                if (aik == cplx{}) continue;
                const cplx* bk = o.a_.data() + k * o.cols_;
                for (std::size_t j = 0; j < o.cols_; ++j) ri[j] += aik * bk[j];
            }
        }
        return r;
    }

    Matrix operator*(cplx s) const {
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
        return r;
    }

    friend Matrix operator*(cplx s, const Matrix& m) { return m * s; }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix conjugate() const {
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = std::conj(a_[k]);
        return r;
    }

    // Conjugate transpose. (A*)_{ij} = conj(A_{ji}); exact involution.
    Matrix adjoint() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

  private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            raise(errc::dim_mismatch, "matrix shapes differ");
    }

    std::size_t rows_, cols_;
    std::vector<cplx> a_;
};

inline Matrix adjoint(const Matrix& a) { return a.adjoint(); }

inline cplx trace(const Matrix& a) {
    if (!a.is_square()) raise(errc::non_square, "trace of non-square matrix");
    cplx t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

// Dual pairing <A, rho> = trace(A rho); the value of the normal state with
// density rho at the observable A.
inline cplx trace_pairing(const Matrix& a, const Matrix& rho) {
    if (!a.is_square() || !rho.is_square() || a.rows() != rho.rows())
        raise(errc::dim_mismatch, "trace_pairing needs square matrices of equal size");
    cplx t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * rho(k, i);
    return t;
}

inline bool is_hermitian(const Matrix& a, Tolerance tol = {}) {
    if (!a.is_square()) raise(errc::non_square, "is_hermitian needs a square matrix");
    const double thr = tol.at_scale(a.max_abs());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            if (std::abs(a(i, j) - std::conj(a(j, i))) > thr) return false;
    return true;
}

inline bool is_unitary(const Matrix& a, Tolerance tol = {}) {
    if (!a.is_square()) raise(errc::non_square, "is_unitary needs a square matrix");
    const double thr = tol.at_scale(std::max(1.0, a.max_abs()));
    return (a * a.adjoint() - Matrix::identity(a.rows())).max_abs() <= thr &&
           (a.adjoint() * a - Matrix::identity(a.rows())).max_abs() <= thr;
}

// Self-adjoint idempotent: A = A* = A^2 within tolerance.
inline bool is_projection(const Matrix& a, Tolerance tol = {}) {
    if (!a.is_square()) raise(errc::non_square, "is_projection needs a square matrix");
    const double thr = tol.at_scale(std::max(1.0, a.max_abs()));
    return is_hermitian(a, tol) && (a * a - a).max_abs() <= thr;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

// Column-major vectorization, so vec(A X B) = (B^T kron A) vec(X).
inline std::vector<cplx> vec(const Matrix& m) {
    std::vector<cplx> v(m.rows() * m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) v[j * m.rows() + i] = m(i, j);
    return v;
}

inline Matrix unvec(const std::vector<cplx>& v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) raise(errc::dim_mismatch, "unvec size mismatch");
    Matrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = v[j * rows + i];
    return m;
}

// ---- vector helpers -------------------------------------------------------

// Optional diagonal weights turn the Euclidean pairing into a quadrature
// inner product <x,y> = sum_j w_j conj(x_j) y_j.
struct InnerProduct {
    std::vector<double> weights;  // empty = all ones

    cplx operator()(const std::vector<cplx>& x, const std::vector<cplx>& y) const {
        if (x.size() != y.size()) raise(errc::dim_mismatch, "inner product length mismatch");
        if (!weights.empty() && weights.size() != x.size())
            raise(errc::dim_mismatch, "weight length mismatch");
        cplx s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double w = weights.empty() ? 1.0 : weights[j];
            s += w * std::conj(x[j]) * y[j];
        }
        return s;
    }

    double norm(const std::vector<cplx>& x) const { return std::sqrt(std::real((*this)(x, x))); }
};

// Modified Gram-Schmidt with one re-orthogonalization pass. The i-th output
// lies in the span of the first i inputs. Raises dependent_input when a
// residual collapses below tolerance.
inline std::vector<std::vector<cplx>> gram_schmidt(const std::vector<std::vector<cplx>>& vectors,
                                                   const InnerProduct& inner = {},
                                                   Tolerance tol = {}) {
    std::vector<std::vector<cplx>> basis;
    basis.reserve(vectors.size());
    for (const auto& v : vectors) {
        const double input_norm = inner.norm(v);
        std::vector<cplx> u = v;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                const cplx c = inner(q, u);
                for (std::size_t j = 0; j < u.size(); ++j) u[j] -= c * q[j];
            }
        }
        const double r = inner.norm(u);
        if (r <= std::max(tol.abs_tol, 1e3 * tol.rel_tol * input_norm))
            raise(errc::dependent_input, "input vector dependent on predecessors");
        for (auto& z : u) z /= r;
        basis.push_back(std::move(u));
    }
    return basis;
}

}  // namespace finop
