#pragma once

#include <vector>

#include "finop/commutant.hpp"
#include "finop/eig.hpp"
#include "finop/matrix.hpp"
#include "finop/spectral.hpp"

namespace finop {

// Matrix *-algebra inside M_n, described by a linear basis whose first
// element is the identity. Closure under products and adjoints is validated
// by span membership.
struct StarAlgebra {
    std::size_t ambient_dim = 0;
    std::vector<Matrix> basis;

    static StarAlgebra full(std::size_t n) {
        StarAlgebra alg;
        alg.ambient_dim = n;
        alg.basis.push_back(Matrix::identity(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j && i == 0) continue;  // e_00 is I minus the other units
                Matrix u = Matrix::zero(n, n);
                u(i, j) = 1.0;
                alg.basis.push_back(u);
            }
        return alg;
    }

    static StarAlgebra diagonal(std::size_t n) {
        StarAlgebra alg;
        alg.ambient_dim = n;
        alg.basis.push_back(Matrix::identity(n));
        for (std::size_t j = 1; j < n; ++j) {
            Matrix u = Matrix::zero(n, n);
            u(j, j) = 1.0;
            alg.basis.push_back(u);
        }
        return alg;
    }

    void validate(double tol = 1e-8) const {
        if (basis.empty()) raise(errc::dim_mismatch, "algebra needs a basis");
        for (const Matrix& b : basis)
            if (!b.is_square() || b.rows() != ambient_dim)
                raise(errc::dim_mismatch, "algebra basis dimension mismatch");
        if ((basis.front() - Matrix::identity(ambient_dim)).max_abs() > tol)
            raise(errc::dim_mismatch, "first basis element must be the identity");
        for (const Matrix& b : basis) {
            if (detail::span_residual(basis, b.adjoint()) > tol)
                raise(errc::dim_mismatch, "algebra basis not closed under adjoints");
            for (const Matrix& c : basis)
                if (detail::span_residual(basis, b * c) > tol)
                    raise(errc::dim_mismatch, "algebra basis not closed under products");
        }
    }
};

// State as trace against a density matrix: s(A) = tr(A rho). Every linear
// functional on a matrix algebra arises this way, and positivity becomes a
// spectral condition on rho.
struct State {
    StarAlgebra algebra;
    Matrix density;

    cplx operator()(const Matrix& a) const { return trace_pairing(a, density); }

    void validate(double tol = 1e-8) const {
        algebra.validate(tol);
        if (!density.is_square() || density.rows() != algebra.ambient_dim)
            raise(errc::dim_mismatch, "density dimension mismatch");
        if (!is_hermitian(density, Tolerance{tol, tol}))
            raise(errc::not_a_state, "density not Hermitian");
        if (std::abs((*this)(algebra.basis.front()) - cplx(1.0)) > tol)
            raise(errc::not_a_state, "state not normalized: s(I) != 1");
        const EigResult e = eigh(density);
        if (!e.values.empty() && e.values.back() < -tol)
            raise(errc::not_a_state, "density not positive semidefinite");
    }
};

// GNS triple of a state: representation pi on C^d, cyclic unit vector omega,
// with s(b) = <omega, pi(b) omega> on the whole basis. gram is the moment
// matrix G_ij = s(b_i* b_j); d = rank(G).
struct GnsTriple {
    std::size_t rep_dim = 0;
    std::vector<Matrix> pi;  // one per algebra basis element
    std::vector<cplx> omega;
    Matrix gram;

    Matrix omega_column() const { return Matrix::column(omega); }
};

namespace detail {

// coefficients of target in span(basis), least squares
inline Matrix expand_in_basis(const std::vector<Matrix>& basis, const Matrix& target) {
    const std::size_t rows = basis.front().rows() * basis.front().cols();
    Matrix a(rows, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto v = vec(basis[j]);
        for (std::size_t i = 0; i < rows; ++i) a(i, j) = v[i];
    }
    return least_squares(a, vec_column(target));
}

}  // namespace detail

// The quotient H0/N is realized by compressing onto the positive eigenspace
// of the moment matrix: with G = U L U* (positive part), the class of a
// coefficient vector c is T c with T = L^{1/2} U*, and left multiplication
// by b descends to pi(b) = T S(b) T^+ where S(b) holds the structure
// coefficients of b against the basis.
inline GnsTriple gns_construct(const State& s, double null_threshold = 1e-10) {
    s.validate();
    const auto& basis = s.algebra.basis;
    const std::size_t m = basis.size();

    Matrix gram(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) gram(i, j) = s(basis[i].adjoint() * basis[j]);

    const EigResult eg = eigh(gram);
    const double lmax = eg.values.empty() ? 0.0 : std::max(eg.values.front(), 0.0);
    std::size_t d = 0;
    while (d < m && eg.values[d] > null_threshold * lmax) ++d;
    if (d == 0) raise(errc::not_a_state, "moment matrix vanishes");

    // T = L^{1/2} U*  (d x m), right inverse Tplus = U L^{-1/2}
    Matrix t(d, m), tplus(m, d);
    for (std::size_t k = 0; k < d; ++k) {
        const double root = std::sqrt(eg.values[k]);
        for (std::size_t j = 0; j < m; ++j) {
            t(k, j) = root * std::conj(eg.vectors(j, k));
            tplus(j, k) = eg.vectors(j, k) / root;
        }
    }

    GnsTriple triple;
    triple.rep_dim = d;
    triple.gram = gram;
    triple.pi.reserve(m);
    for (std::size_t bidx = 0; bidx < m; ++bidx) {
        // structure coefficients: b * basis[j] = sum_i S_ij basis[i]
        Matrix structure(m, m);
        for (std::size_t j = 0; j < m; ++j) {
            const Matrix coef = detail::expand_in_basis(basis, basis[bidx] * basis[j]);
            for (std::size_t i = 0; i < m; ++i) structure(i, j) = coef(i, 0);
        }
        triple.pi.push_back(t * structure * tplus);
    }
    // omega = class of the identity = T e_0
    triple.omega.resize(d);
    for (std::size_t k = 0; k < d; ++k) triple.omega[k] = t(k, 0);
    return triple;
}

inline cplx gns_expectation(const GnsTriple& g, std::size_t basis_index) {
    const Matrix om = g.omega_column();
    const Matrix r = om.adjoint() * (g.pi[basis_index] * om);
    return r(0, 0);
}

// Purity via Schur: the state is pure exactly when the commutant of the GNS
// representation is one-dimensional. witness holds a non-scalar commutant
// element when not pure.
struct PurityReport {
    bool pure = false;
    std::optional<Matrix> witness;
};

inline PurityReport is_pure(const State& s) {
    const GnsTriple g = gns_construct(s);
    std::vector<Matrix> gens = g.pi;
    for (const Matrix& p : g.pi) gens.push_back(p.adjoint());
    const CommutantReport rep = commutant(gens);
    PurityReport out;
    out.pure = rep.dimension == 1;
    if (!out.pure) {
        const Matrix id = Matrix::identity(g.rep_dim);
        for (const Matrix& x : rep.basis) {
            const cplx lam = trace(x) / cplx(double(g.rep_dim));
            const Matrix dev = x - id * lam;
            if (dev.max_abs() > 1e-6) {
                out.witness = dev;
                break;
            }
        }
    }
    return out;
}

// Finite-dimensional Sakai derivative: for positive t <= s, the unique
// A in the commutant of pi with 0 <= A <= I and t(b) = <omega, pi(b) A omega>.
// Solved by least squares over a computed commutant basis; the commutant
// membership is verified, not assumed.
struct RadonNikodymResult {
    Matrix derivative;     // acts on the GNS space
    double residual = 0.0; // max |t(b) - <omega, pi(b) A omega>|
};

inline RadonNikodymResult radon_nikodym(const State& s, const State& t, double tol = 1e-8) {
    s.validate();
    if (t.algebra.ambient_dim != s.algebra.ambient_dim ||
        t.algebra.basis.size() != s.algebra.basis.size())
        raise(errc::dim_mismatch, "functionals live on different algebras");

    // domination check on basis elements b*b and a few positive combinations
    const auto& basis = s.algebra.basis;
    for (const Matrix& b : basis) {
        const Matrix bb = b.adjoint() * b;
        if (std::real(t(bb)) > std::real(s(bb)) + tol)
            raise(errc::not_dominated, "t(b*b) exceeds s(b*b)");
    }
    const GnsTriple g = gns_construct(s);
    std::vector<Matrix> gens = g.pi;
    for (const Matrix& p : g.pi) gens.push_back(p.adjoint());
    const CommutantReport comm = commutant(gens);

    const std::size_t m = basis.size();
    const Matrix om = g.omega_column();
    Matrix a(m, comm.dimension);
    Matrix rhs(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < comm.dimension; ++j) {
            const Matrix val = om.adjoint() * (g.pi[i] * (comm.basis[j] * om));
            a(i, j) = val(0, 0);
        }
        rhs(i, 0) = t(basis[i]);
    }
    const Matrix coef = least_squares(a, rhs);

    Matrix deriv = Matrix::zero(g.rep_dim, g.rep_dim);
    for (std::size_t j = 0; j < comm.dimension; ++j) deriv = deriv + comm.basis[j] * coef(j, 0);
    deriv = (deriv + deriv.adjoint()) * cplx(0.5);

    RadonNikodymResult out;
    out.derivative = deriv;
    out.residual = (a * coef - rhs).max_abs();
    return out;
}

}  // namespace finop
