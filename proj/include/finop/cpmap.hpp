#pragma once

#include <vector>

#include "finop/eig.hpp"
#include "finop/matrix.hpp"

namespace finop {

// Linear map M_n -> M_m held in whichever of the three standard forms it was
// built from; the others are derived on demand.
//   kraus:  phi(A) = sum_i K_i A K_i*            (K_i are m x n)
//   choi:   C = sum_ij phi(e_ij) kron e_ij       (map slot first, mn x mn)
//   super:  vec(phi(A)) = S vec(A)               (column-major vec, m^2 x n^2)
class CPMap {
  public:
    static CPMap from_kraus(std::size_t in_dim, std::size_t out_dim, std::vector<Matrix> kraus) {
        if (kraus.empty()) raise(errc::dim_mismatch, "empty Kraus list");
        for (const Matrix& k : kraus)
            if (k.rows() != out_dim || k.cols() != in_dim)
                raise(errc::dim_mismatch, "Kraus operator shape mismatch");
        CPMap m;
        m.in_dim_ = in_dim;
        m.out_dim_ = out_dim;
        m.kraus_ = std::move(kraus);
        return m;
    }

    static CPMap from_choi(std::size_t in_dim, std::size_t out_dim, Matrix choi) {
        if (choi.rows() != in_dim * out_dim || !choi.is_square())
            raise(errc::dim_mismatch, "Choi matrix shape mismatch");
        CPMap m;
        m.in_dim_ = in_dim;
        m.out_dim_ = out_dim;
        m.choi_ = std::move(choi);
        return m;
    }

    static CPMap identity_channel(std::size_t n) {
        return from_kraus(n, n, {Matrix::identity(n)});
    }

    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }
    bool has_kraus() const { return !kraus_.empty(); }
    const std::vector<Matrix>& kraus() const { return kraus_; }

    // Apply the map to one matrix.
    Matrix operator()(const Matrix& a) const {
        if (!a.is_square() || a.rows() != in_dim_)
            raise(errc::dim_mismatch, "CPMap argument dimension mismatch");
        if (!kraus_.empty()) {
            Matrix r = Matrix::zero(out_dim_, out_dim_);
            for (const Matrix& k : kraus_) r = r + k * a * k.adjoint();
            return r;
        }
        // from the Choi block form: phi(A) = sum_ij A_ij phi(e_ij)
        Matrix r = Matrix::zero(out_dim_, out_dim_);
        for (std::size_t i = 0; i < in_dim_; ++i)
            for (std::size_t j = 0; j < in_dim_; ++j) {
                const cplx aij = a(i, j);
                if (aij == cplx{}) continue;
                for (std::size_t p = 0; p < out_dim_; ++p)
                    for (std::size_t q = 0; q < out_dim_; ++q)
                        r(p, q) += aij * choi_(p * in_dim_ + i, q * in_dim_ + j);
            }
        return r;
    }

    // C = sum_ij phi(e_ij) kron e_ij; entry C[(p,i),(q,j)] = phi(e_ij)[p,q].
    Matrix choi() const {
        if (!choi_.empty()) return choi_;
        Matrix c(in_dim_ * out_dim_, in_dim_ * out_dim_);
        for (const Matrix& k : kraus_)
            for (std::size_t p = 0; p < out_dim_; ++p)
                for (std::size_t i = 0; i < in_dim_; ++i)
                    for (std::size_t q = 0; q < out_dim_; ++q)
                        for (std::size_t j = 0; j < in_dim_; ++j)
                            c(p * in_dim_ + i, q * in_dim_ + j) +=
                                k(p, i) * std::conj(k(q, j));
        return c;
    }

    // vec(phi(A)) = S vec(A) with S = sum_i conj(K_i) kron K_i.
    Matrix superoperator() const {
        Matrix s = Matrix::zero(out_dim_ * out_dim_, in_dim_ * in_dim_);
        for (std::size_t j = 0; j < in_dim_; ++j)
            for (std::size_t i = 0; i < in_dim_; ++i) {
                Matrix unit = Matrix::zero(in_dim_, in_dim_);
                unit(i, j) = 1.0;
                const Matrix img = (*this)(unit);
                const auto v = vec(img);
                const std::size_t col = j * in_dim_ + i;
                for (std::size_t r = 0; r < v.size(); ++r) s(r, col) = v[r];
            }
        return s;
    }

    bool is_unital(Tolerance tol = {}) const {
        return ((*this)(Matrix::identity(in_dim_)) - Matrix::identity(out_dim_)).max_abs() <=
               tol.at_scale(1.0);
    }

  private:
    std::size_t in_dim_ = 0, out_dim_ = 0;
    std::vector<Matrix> kraus_;
    Matrix choi_;
};

inline Matrix choi_of(const CPMap& m) { return m.choi(); }

// Complete positivity == positive semidefinite Choi matrix.
inline bool is_completely_positive(const CPMap& m, Tolerance tol = {}) {
    const EigResult e = eigh(m.choi());
    return e.values.empty() || e.values.back() >= -tol.at_scale(std::abs(e.values.front()));
}

inline double min_choi_eigenvalue(const CPMap& m) {
    const EigResult e = eigh(m.choi());
    return e.values.back();
}

// Kraus operators from the Choi eigendecomposition: eigenvector w with
// eigenvalue lambda reshapes to K[p,i] = sqrt(lambda) w[(p,i)]. The phase is
// fixed by making the largest-magnitude entry real positive, so the list is
// reproducible. Raises not_cp on a negative eigenvalue beyond tolerance.
inline std::vector<Matrix> kraus_from_choi(const Matrix& choi, std::size_t in_dim,
                                           std::size_t out_dim, Tolerance tol = {},
                                           double rank_threshold = 1e-10) {
    if (choi.rows() != in_dim * out_dim || !choi.is_square())
        raise(errc::dim_mismatch, "Choi matrix shape mismatch");
    const EigResult e = eigh(choi);
    const double lmax = e.values.empty() ? 0.0 : std::max(e.values.front(), 0.0);
    if (!e.values.empty() && e.values.back() < -tol.at_scale(lmax))
        raise(errc::not_cp, "Choi matrix has a negative eigenvalue");

    std::vector<Matrix> kraus;
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        if (e.values[k] <= rank_threshold * lmax) continue;
        const double root = std::sqrt(e.values[k]);
        Matrix op(out_dim, in_dim);
        double best = 0.0;
        cplx best_entry = 1.0;
        for (std::size_t p = 0; p < out_dim; ++p)
            for (std::size_t i = 0; i < in_dim; ++i) {
                const cplx v = root * e.vectors(p * in_dim + i, k);
                op(p, i) = v;
                if (std::abs(v) > best) {
                    best = std::abs(v);
                    best_entry = v;
                }
            }
        const cplx phase = best > 0.0 ? std::conj(best_entry) / std::abs(best_entry) : cplx(1.0);
        kraus.push_back(op * phase);
    }
    return kraus;
}

inline std::vector<Matrix> kraus_of(const CPMap& m, Tolerance tol = {}) {
    if (m.has_kraus()) return m.kraus();
    return kraus_from_choi(m.choi(), m.in_dim(), m.out_dim(), tol);
}

// Stinespring dilation of a unital CP map: an isometry V into C^n tensor C^r
// with phi(A) = V* (A kron I_r) V. r is the Choi rank, which is minimal.
struct StinespringDilation {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::size_t rank = 0;
    Matrix isometry;  // (in_dim * rank) x out_dim, V*V = I

    // pi(A) = A kron I_r acting on the dilated space.
    Matrix represent(const Matrix& a) const { return kron(a, Matrix::identity(rank)); }

    Matrix compress(const Matrix& a) const {
        return isometry.adjoint() * represent(a) * isometry;
    }
};

inline StinespringDilation stinespring(const CPMap& m, Tolerance tol = {}) {
    if (!is_completely_positive(m, tol)) raise(errc::not_cp, "stinespring needs a CP map");
    if (!m.is_unital(tol)) raise(errc::not_unital, "stinespring needs a unital map");

    const std::vector<Matrix> kraus = kraus_of(m, tol);
    const std::size_t n = m.in_dim(), out = m.out_dim(), r = kraus.size();

    // stack the blocks V_i = K_i*; then V*(A kron I_r)V = sum K_i A K_i*
    StinespringDilation d;
    d.in_dim = n;
    d.out_dim = out;
    d.rank = r;
    d.isometry = Matrix(n * r, out);
    for (std::size_t i = 0; i < r; ++i) {
        const Matrix block = kraus[i].adjoint();  // n x out
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < out; ++b) d.isometry(a * r + i, b) = block(a, b);
    }
    return d;
}

namespace detail {

// Columns spanning pi(M_n) V H inside the dilated space.
inline Matrix dilation_span(const StinespringDilation& d) {
    const std::size_t dim = d.in_dim * d.rank;
    Matrix span(dim, d.in_dim * d.in_dim * d.out_dim);
    std::size_t col = 0;
    for (std::size_t i = 0; i < d.in_dim; ++i)
        for (std::size_t j = 0; j < d.in_dim; ++j) {
            Matrix unit = Matrix::zero(d.in_dim, d.in_dim);
            unit(i, j) = 1.0;
            const Matrix block = d.represent(unit) * d.isometry;  // dim x out
            for (std::size_t h = 0; h < d.out_dim; ++h, ++col)
                for (std::size_t rrow = 0; rrow < dim; ++rrow) span(rrow, col) = block(rrow, h);
        }
    return span;
}

}  // namespace detail

// Unitary W with W pi_1(A) V_1 h = pi_2(A) V_2 h on the spanning vectors.
// Raises not_same_map when the compressions disagree and not_minimal when a
// dilation fails the minimality (full span) condition.
inline Matrix dilation_equivalence(const StinespringDilation& d1, const StinespringDilation& d2,
                                   Tolerance tol = {}) {
    if (d1.in_dim != d2.in_dim || d1.out_dim != d2.out_dim)
        raise(errc::dim_mismatch, "dilations of maps with different shapes");
    // same map?
    for (std::size_t i = 0; i < d1.in_dim; ++i)
        for (std::size_t j = 0; j < d1.in_dim; ++j) {
            Matrix unit = Matrix::zero(d1.in_dim, d1.in_dim);
            unit(i, j) = 1.0;
            if ((d1.compress(unit) - d2.compress(unit)).max_abs() > tol.at_scale(1.0) * 1e3)
                raise(errc::not_same_map, "dilations compress to different maps");
        }
    if (d1.rank != d2.rank) raise(errc::not_minimal, "dilation ranks differ");

    const Matrix span1 = detail::dilation_span(d1);
    const Matrix span2 = detail::dilation_span(d2);
    const std::size_t dim = d1.in_dim * d1.rank;
    if (rank(span1, 1e-8) != dim || rank(span2, 1e-8) != dim)
        raise(errc::not_minimal, "dilation span does not fill the dilated space");

    // W span1 = span2 in least squares, i.e. W = span2 pinv(span1)
    const Matrix w = least_squares(span1.adjoint(), span2.adjoint()).adjoint();
    if (!is_unitary(w, Tolerance{1e-6, 1e-6}))
        raise(errc::not_same_map, "intertwiner failed the unitarity check");
    return w;
}

}  // namespace finop
