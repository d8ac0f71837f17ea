#pragma once

#include <cstdint>
#include <vector>

#include "finop/eig.hpp"
#include "finop/matrix.hpp"

namespace finop {

// Exact number of the form (a + b sqrt(2)) / 2^e. Haar amplitudes are
// 2^{k/2}, so every inner product and moment of the basis lives in this
// ring; entries with both levels of equal parity are plain dyadic rationals.
struct DyadicSqrt2 {
    std::int64_t rational = 0;  // a
    std::int64_t radical = 0;   // b, the coefficient of sqrt(2)
    int exponent = 0;           // dividing power of two, >= 0

    DyadicSqrt2() = default;
    DyadicSqrt2(std::int64_t a, std::int64_t b, int e) : rational(a), radical(b), exponent(e) {
        normalize();
    }
    static DyadicSqrt2 integer(std::int64_t a) { return DyadicSqrt2(a, 0, 0); }
    static DyadicSqrt2 dyadic(std::int64_t num, int e) { return DyadicSqrt2(num, 0, e); }
    // 2^{k/2} for k >= 0
    static DyadicSqrt2 half_power(int k) {
        if (k % 2 == 0) return DyadicSqrt2(std::int64_t(1) << (k / 2), 0, 0);
        return DyadicSqrt2(0, std::int64_t(1) << ((k - 1) / 2), 0);
    }

    void normalize() {
        while (exponent > 0 && rational % 2 == 0 && radical % 2 == 0) {
            rational /= 2;
            radical /= 2;
            --exponent;
        }
        if (rational == 0 && radical == 0) exponent = 0;
    }

    bool is_rational() const { return radical == 0; }

    double value() const {
        return (static_cast<double>(rational) +
                static_cast<double>(radical) * std::sqrt(2.0)) /
               std::ldexp(1.0, exponent);
    }

    friend DyadicSqrt2 operator+(DyadicSqrt2 x, DyadicSqrt2 y) {
        const int e = std::max(x.exponent, y.exponent);
        const std::int64_t sx = std::int64_t(1) << (e - x.exponent);
        const std::int64_t sy = std::int64_t(1) << (e - y.exponent);
        return DyadicSqrt2(x.rational * sx + y.rational * sy, x.radical * sx + y.radical * sy, e);
    }
    friend DyadicSqrt2 operator-(DyadicSqrt2 x, DyadicSqrt2 y) {
        return x + DyadicSqrt2(-y.rational, -y.radical, y.exponent);
    }
    friend DyadicSqrt2 operator*(DyadicSqrt2 x, DyadicSqrt2 y) {
        // (a + b r)(c + d r) = ac + 2bd + (ad + bc) r,  r = sqrt(2)
        return DyadicSqrt2(x.rational * y.rational + 2 * x.radical * y.radical,
                           x.rational * y.radical + x.radical * y.rational,
                           x.exponent + y.exponent);
    }
    friend bool operator==(DyadicSqrt2 x, DyadicSqrt2 y) {
        return x.rational == y.rational && x.radical == y.radical && x.exponent == y.exponent;
    }
};

// Orthonormal Haar family on [0,1] up to scale J: the scaling function and
// wavelets psi_{k,l} = 2^{k/2} (chi_[l 2^-k, (l+1/2) 2^-k) - chi_[(l+1/2) 2^-k, (l+1) 2^-k)).
// Everything is a step function on the 2^{J+1} dyadic cells of width
// 2^{-(J+1)}, stored exactly. Index 0 is the scaling function, then (k,l)
// lexicographic.
struct HaarBasis {
    int max_level = 0;  // J
    std::size_t cells = 0;
    std::vector<std::vector<DyadicSqrt2>> functions;
    std::vector<int> level;  // -1 for the scaling function, else k

    std::size_t size() const { return functions.size(); }

    // exact L^2 inner product of two cell-value vectors
    DyadicSqrt2 inner(const std::vector<DyadicSqrt2>& f, const std::vector<DyadicSqrt2>& g) const {
        DyadicSqrt2 acc;
        const int width_exp = max_level + 1;  // cell width 2^-(J+1)
        for (std::size_t c = 0; c < cells; ++c)
            acc = acc + f[c] * g[c] * DyadicSqrt2::dyadic(1, width_exp);
        return acc;
    }

    // exact first moment against t: sum_c f g int_cell t dt,
    // int over cell c is (2c+1) / 2^{2(J+1)+1}
    DyadicSqrt2 inner_with_t(const std::vector<DyadicSqrt2>& f,
                             const std::vector<DyadicSqrt2>& g) const {
        DyadicSqrt2 acc;
        const int e = 2 * (max_level + 1) + 1;
        for (std::size_t c = 0; c < cells; ++c)
            acc = acc + f[c] * g[c] * DyadicSqrt2::dyadic(2 * static_cast<std::int64_t>(c) + 1, e);
        return acc;
    }
};

inline HaarBasis haar_basis(int max_level) {
    if (max_level < 0) raise(errc::bad_level, "haar_basis needs level >= 0");
    HaarBasis basis;
    basis.max_level = max_level;
    basis.cells = std::size_t(1) << (max_level + 1);

    basis.functions.emplace_back(basis.cells, DyadicSqrt2::integer(1));
    basis.level.push_back(-1);

    for (int k = 0; k <= max_level; ++k) {
        const std::size_t translates = std::size_t(1) << k;
        const std::size_t cells_per_half = basis.cells / (2 * translates);
        for (std::size_t l = 0; l < translates; ++l) {
            std::vector<DyadicSqrt2> f(basis.cells);
            const DyadicSqrt2 amp = DyadicSqrt2::half_power(k);
            const std::size_t start = 2 * l * cells_per_half;
            for (std::size_t c = 0; c < cells_per_half; ++c) {
                f[start + c] = amp;
                f[start + cells_per_half + c] = DyadicSqrt2::integer(0) - amp;
            }
            basis.functions.push_back(std::move(f));
            basis.level.push_back(k);
        }
    }
    return basis;
}

// Matrix of multiplication by t in the Haar basis, with every entry exact.
struct OperatorMatrix {
    const HaarBasis* basis = nullptr;
    std::vector<std::vector<DyadicSqrt2>> entries;

    std::size_t size() const { return entries.size(); }

    Matrix to_matrix() const {
        Matrix m(entries.size(), entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i)
            for (std::size_t j = 0; j < entries.size(); ++j) m(i, j) = entries[i][j].value();
        return m;
    }
};

inline OperatorMatrix mt_matrix(const HaarBasis& basis) {
    OperatorMatrix m;
    m.basis = &basis;
    const std::size_t n = basis.size();
    m.entries.assign(n, std::vector<DyadicSqrt2>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            const DyadicSqrt2 v = basis.inner_with_t(basis.functions[a], basis.functions[b]);
            m.entries[a][b] = v;
            m.entries[b][a] = v;
        }
    return m;
}

// Split M_t into its diagonal and the off-diagonal remainder and record how
// the remainder decays across level pairs. slope is the least-squares fit of
// log2(max entry) against max(k, k'); the entries behave like
// 2^{-3 max(k,k')/2} so the fit lands near -3/2.
struct DecayReport {
    std::vector<double> diagonal;
    // (level a, level b, max |entry|) for a <= b over off-diagonal blocks
    struct LevelPair {
        int level_a;
        int level_b;
        double max_entry;
    };
    std::vector<LevelPair> pairs;
    double fitted_slope = 0.0;
    double max_off_diagonal = 0.0;
};

inline DecayReport diagonal_plus_compact_report(const OperatorMatrix& m) {
    DecayReport rep;
    const HaarBasis& basis = *m.basis;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) rep.diagonal.push_back(m.entries[i][i].value());

    const int levels = basis.max_level + 2;  // including the scaling slot (-1)
    std::vector<std::vector<double>> worst(levels, std::vector<double>(levels, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const int a = basis.level[i] + 1;
            const int b = basis.level[j] + 1;
            const double v = std::abs(m.entries[i][j].value());
            worst[std::min(a, b)][std::max(a, b)] = std::max(worst[std::min(a, b)][std::max(a, b)], v);
            rep.max_off_diagonal = std::max(rep.max_off_diagonal, v);
        }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (int a = 0; a < levels; ++a)
        for (int b = a; b < levels; ++b) {
            if (worst[a][b] <= 0.0) continue;
            rep.pairs.push_back({a - 1, b - 1, worst[a][b]});
            const double x = static_cast<double>(std::max(a - 1, b - 1));
            const double y = std::log2(worst[a][b]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++count;
        }
    if (count > 1) {
        const double denom = static_cast<double>(count) * sxx - sx * sx;
        if (denom != 0.0) rep.fitted_slope = (static_cast<double>(count) * sxy - sx * sy) / denom;
    }
    return rep;
}

// Expansion coefficients of a dyadic step function (given by its cell values
// at resolution 2^{-(J+1)}) against the basis; exact.
inline std::vector<DyadicSqrt2> haar_coefficients(const HaarBasis& basis,
                                                  const std::vector<DyadicSqrt2>& cell_values) {
    if (cell_values.size() != basis.cells) raise(errc::dim_mismatch, "cell count mismatch");
    std::vector<DyadicSqrt2> coefs(basis.size());
    for (std::size_t a = 0; a < basis.size(); ++a)
        coefs[a] = basis.inner(basis.functions[a], cell_values);
    return coefs;
}

}  // namespace finop
