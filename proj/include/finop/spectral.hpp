#pragma once

#include <functional>
#include <vector>

#include "finop/eig.hpp"
#include "finop/matrix.hpp"

namespace finop {

// Finite projection-valued measure of a Hermitian matrix: strictly
// decreasing eigenvalue clusters with mutually orthogonal spectral
// projections summing to the identity. rank(P_i) = multiplicities[i].
struct SpectralData {
    std::vector<double> eigenvalues;        // strictly decreasing
    std::vector<Matrix> projections;        // one per cluster
    std::vector<std::size_t> multiplicities;

    std::size_t dim() const { return projections.empty() ? 0 : projections.front().rows(); }
};

// A = sum_k lambda_k P_k. Eigenvalues closer than group_tol are merged into
// one cluster so multiplicities of integer matrices come out exact.
// group_tol <= 0 picks the default 1e-8 * max(1, |A|_max).
inline SpectralData spectral_decompose(const Matrix& a, double group_tol = -1.0,
                                       Tolerance tol = {}) {
    if (!a.is_square()) raise(errc::non_square, "spectral_decompose needs a square matrix");
    if (!is_hermitian(a, tol)) raise(errc::not_hermitian, "spectral_decompose input");
    if (group_tol <= 0.0) group_tol = 1e-8 * std::max(1.0, a.max_abs());

    const EigResult e = eigh(a);
    const std::size_t n = a.rows();
    SpectralData s;
    std::size_t k = 0;
    while (k < n) {
        std::size_t end = k + 1;
        while (end < n && e.values[end - 1] - e.values[end] <= group_tol) ++end;
        Matrix p = Matrix::zero(n, n);
        double lambda = 0.0;
        for (std::size_t c = k; c < end; ++c) {
            lambda += e.values[c];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    p(i, j) += e.vectors(i, c) * std::conj(e.vectors(j, c));
        }
        s.eigenvalues.push_back(lambda / static_cast<double>(end - k));
        s.projections.push_back(std::move(p));
        s.multiplicities.push_back(end - k);
        k = end;
    }
    return s;
}

// P(E) = sum over eigenvalues in E of the spectral projections. P(empty)=0,
// P(R)=I, and P(E n F) = P(E) P(F) by orthogonality of the clusters.
inline Matrix pvm_evaluate(const SpectralData& s, const std::function<bool(double)>& member) {
    Matrix p = Matrix::zero(s.dim(), s.dim());
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k)
        if (member(s.eigenvalues[k])) p = p + s.projections[k];
    return p;
}

// f(A) = sum f(lambda_k) P_k.
inline Matrix functional_calculus(const SpectralData& s, const std::function<cplx(double)>& f) {
    Matrix r = Matrix::zero(s.dim(), s.dim());
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) r = r + s.projections[k] * f(s.eigenvalues[k]);
    return r;
}

inline Matrix reconstruct(const SpectralData& s) {
    return functional_calculus(s, [](double x) { return cplx(x); });
}

// Dyadic staircase s_n below f(x) = x: value i*2^-n on [i*2^-n, (i+1)*2^-n),
// clamped to n from x >= n on. Satisfies x - 2^-n < s_n(x) <= x and
// s_n <= s_{n+1}.
struct StepFunction {
    std::vector<double> breakpoints;
    std::vector<double> values;
    double cap = 0.0;  // the constant level for x >= cap
    int level = 1;

    double operator()(double x) const {
        if (x >= cap) return cap;
        if (x < 0.0) return 0.0;
        const double w = std::ldexp(1.0, -level);
        return std::floor(x / w) * w;
    }
};

// Breakpoints are tabulated over [0, min(M, n)]; evaluation works everywhere.
inline StepFunction approximate_by_steps(double m, int n) {
    if (n < 1) raise(errc::bad_level, "approximate_by_steps needs level >= 1");
    StepFunction s;
    s.level = n;
    s.cap = static_cast<double>(n);
    const double w = std::ldexp(1.0, -n);
    const double top = std::min(m, static_cast<double>(n));
    const auto count = static_cast<std::size_t>(std::ceil(std::max(top, 0.0) / w)) + 1;
    s.breakpoints.reserve(count);
    s.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        s.breakpoints.push_back(static_cast<double>(i) * w);
        s.values.push_back(std::min(static_cast<double>(i) * w, s.cap));
    }
    return s;
}

}  // namespace finop
