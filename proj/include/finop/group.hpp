#pragma once

#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "finop/commutant.hpp"
#include "finop/matrix.hpp"

namespace finop {

// Finite group as a multiplication table over element indices 0..order-1.
// Group axioms are checked exhaustively at construction.
struct FiniteGroup {
    std::size_t order = 0;
    std::vector<std::vector<std::size_t>> mult;  // mult[g][h] = g h
    std::vector<std::size_t> inv;
    std::size_t identity = 0;
    std::vector<std::string> labels;

    std::size_t op(std::size_t g, std::size_t h) const { return mult[g][h]; }

    void validate() const {
        if (mult.size() != order) raise(errc::dim_mismatch, "multiplication table size");
        for (const auto& row : mult) {
            if (row.size() != order) raise(errc::dim_mismatch, "multiplication table row size");
            for (std::size_t v : row)
                if (v >= order) raise(errc::dim_mismatch, "table entry out of range");
        }
        for (std::size_t g = 0; g < order; ++g)
            if (mult[identity][g] != g || mult[g][identity] != g)
                raise(errc::not_an_action, "identity law fails");
        if (inv.size() != order) raise(errc::dim_mismatch, "inverse list size");
        for (std::size_t g = 0; g < order; ++g)
            if (mult[g][inv[g]] != identity || mult[inv[g]][g] != identity)
                raise(errc::not_an_action, "inverse law fails");
        for (std::size_t a = 0; a < order; ++a)
            for (std::size_t b = 0; b < order; ++b)
                for (std::size_t c = 0; c < order; ++c)
                    if (mult[mult[a][b]][c] != mult[a][mult[b][c]])
                        raise(errc::not_an_action, "associativity fails");
    }

    bool is_abelian() const {
        for (std::size_t a = 0; a < order; ++a)
            for (std::size_t b = a + 1; b < order; ++b)
                if (mult[a][b] != mult[b][a]) return false;
        return true;
    }

    std::vector<std::size_t> center() const {
        std::vector<std::size_t> z;
        for (std::size_t g = 0; g < order; ++g) {
            bool central = true;
            for (std::size_t h = 0; h < order && central; ++h)
                if (mult[g][h] != mult[h][g]) central = false;
            if (central) z.push_back(g);
        }
        return z;
    }

    static FiniteGroup from_table(std::vector<std::vector<std::size_t>> table,
                                  std::vector<std::string> labels = {}) {
        FiniteGroup g;
        g.order = table.size();
        g.mult = std::move(table);
        g.labels = std::move(labels);
        // locate the identity, then the inverses
        g.identity = g.order;
        for (std::size_t e = 0; e < g.order; ++e) {
            bool ok = true;
            for (std::size_t x = 0; x < g.order && ok; ++x)
                if (g.mult[e][x] != x || g.mult[x][e] != x) ok = false;
            if (ok) {
                g.identity = e;
                break;
            }
        }
        if (g.identity == g.order) raise(errc::not_an_action, "table has no identity");
        g.inv.assign(g.order, g.order);
        for (std::size_t x = 0; x < g.order; ++x)
            for (std::size_t y = 0; y < g.order; ++y)
                if (g.mult[x][y] == g.identity && g.mult[y][x] == g.identity) g.inv[x] = y;
        g.validate();
        return g;
    }
};

inline FiniteGroup cyclic_group(std::size_t n) {
    std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
    return FiniteGroup::from_table(std::move(table));
}

// Semidirect product H x| K for an action of K on H by automorphisms:
// (h1,k1)(h2,k2) = (h1 phi_{k1}(h2), k1 k2). Element (h,k) has index
// h * |K| + k. The action map is verified before use.
inline FiniteGroup semidirect_product(const FiniteGroup& h, const FiniteGroup& k,
                                      const std::vector<std::vector<std::size_t>>& action) {
    if (action.size() != k.order) raise(errc::not_an_action, "one permutation per K element");
    for (const auto& perm : action) {
        if (perm.size() != h.order) raise(errc::not_an_action, "action permutation size");
        std::vector<bool> seen(h.order, false);
        for (std::size_t v : perm) {
            if (v >= h.order || seen[v]) raise(errc::not_an_action, "action not a bijection");
            seen[v] = true;
        }
    }
    // each phi_k an automorphism of H
    for (std::size_t kk = 0; kk < k.order; ++kk)
        for (std::size_t a = 0; a < h.order; ++a)
            for (std::size_t b = 0; b < h.order; ++b)
                if (action[kk][h.mult[a][b]] != h.mult[action[kk][a]][action[kk][b]])
                    raise(errc::not_an_action, "action is not by automorphisms");
    // phi a homomorphism K -> Aut(H)
    for (std::size_t k1 = 0; k1 < k.order; ++k1)
        for (std::size_t k2 = 0; k2 < k.order; ++k2)
            for (std::size_t a = 0; a < h.order; ++a)
                if (action[k.mult[k1][k2]][a] != action[k1][action[k2][a]])
                    raise(errc::not_an_action, "action is not a homomorphism");

    const std::size_t n = h.order * k.order;
    auto idx = [&](std::size_t hh, std::size_t kk) { return hh * k.order + kk; };
    std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
    for (std::size_t h1 = 0; h1 < h.order; ++h1)
        for (std::size_t k1 = 0; k1 < k.order; ++k1)
            for (std::size_t h2 = 0; h2 < h.order; ++h2)
                for (std::size_t k2 = 0; k2 < k.order; ++k2)
                    table[idx(h1, k1)][idx(h2, k2)] =
                        idx(h.mult[h1][action[k1][h2]], k.mult[k1][k2]);
    return FiniteGroup::from_table(std::move(table));
}

// Heisenberg group over Z_p: triples (a,b,c) with
// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab'). Index = a p^2 + b p + c.
inline FiniteGroup heisenberg_group(std::size_t p) {
    if (p < 2) raise(errc::dim_mismatch, "heisenberg_group needs p >= 2");
    const std::size_t n = p * p * p;
    auto idx = [&](std::size_t a, std::size_t b, std::size_t c) { return (a * p + b) * p + c; };
    std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b)
            for (std::size_t c = 0; c < p; ++c)
                for (std::size_t a2 = 0; a2 < p; ++a2)
                    for (std::size_t b2 = 0; b2 < p; ++b2)
                        for (std::size_t c2 = 0; c2 < p; ++c2)
                            table[idx(a, b, c)][idx(a2, b2, c2)] =
                                idx((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
    std::vector<std::string> labels(n);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b)
            for (std::size_t c = 0; c < p; ++c)
                labels[idx(a, b, c)] = "(" + std::to_string(a) + "," + std::to_string(b) + "," +
                                       std::to_string(c) + ")";
    FiniteGroup g = FiniteGroup::from_table(std::move(table), std::move(labels));
    return g;
}

inline std::size_t heisenberg_index(std::size_t p, std::size_t a, std::size_t b, std::size_t c) {
    return (a * p + b) * p + c;
}

// ---- group algebra --------------------------------------------------------

struct GroupAlgebraElement {
    const FiniteGroup* group = nullptr;
    std::vector<cplx> coeffs;

    static GroupAlgebraElement delta(const FiniteGroup& g, std::size_t at) {
        GroupAlgebraElement e;
        e.group = &g;
        e.coeffs.assign(g.order, cplx(0.0));
        e.coeffs[at] = 1.0;
        return e;
    }
};

// (a b)(g') = sum_h a(g' h^-1) b(h); delta_e is the unit.
inline GroupAlgebraElement convolve(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
    if (a.group != b.group || a.group == nullptr)
        raise(errc::group_mismatch, "convolution needs elements of one group algebra");
    const FiniteGroup& g = *a.group;
    GroupAlgebraElement out;
    out.group = a.group;
    out.coeffs.assign(g.order, cplx(0.0));
    for (std::size_t gp = 0; gp < g.order; ++gp)
        for (std::size_t h = 0; h < g.order; ++h)
            out.coeffs[gp] += a.coeffs[g.mult[gp][g.inv[h]]] * b.coeffs[h];
    return out;
}

// a*(g) = conj(a(g^-1)).
inline GroupAlgebraElement involution(const GroupAlgebraElement& a) {
    GroupAlgebraElement out;
    out.group = a.group;
    out.coeffs.resize(a.coeffs.size());
    for (std::size_t g = 0; g < a.coeffs.size(); ++g)
        out.coeffs[g] = std::conj(a.coeffs[a.group->inv[g]]);
    return out;
}

// ---- representations ------------------------------------------------------

// Unitary representation: one matrix per group element. Validation checks
// unitarity and the homomorphism law on every pair (groups here are small).
struct Rep {
    const FiniteGroup* group = nullptr;
    std::size_t dim = 0;
    std::vector<Matrix> matrices;

    const Matrix& at(std::size_t g) const { return matrices[g]; }

    void validate(Tolerance tol = {}) const {
        if (group == nullptr || matrices.size() != group->order)
            raise(errc::dim_mismatch, "one matrix per group element");
        for (const Matrix& m : matrices)
            if (m.rows() != dim || m.cols() != dim)
                raise(errc::dim_mismatch, "representation dimension mismatch");
        const double thr = tol.at_scale(1.0) * 1e3;
        if ((matrices[group->identity] - Matrix::identity(dim)).max_abs() > thr)
            raise(errc::not_an_action, "identity not represented by I");
        for (std::size_t g = 0; g < group->order; ++g) {
            if (!is_unitary(matrices[g], Tolerance{thr, thr}))
                raise(errc::not_an_action, "representation matrix not unitary");
            if ((matrices[group->inv[g]] - matrices[g].adjoint()).max_abs() > thr)
                raise(errc::not_an_action, "pi(g^-1) != pi(g)*");
            for (std::size_t h = 0; h < group->order; ++h)
                if ((matrices[group->mult[g][h]] - matrices[g] * matrices[h]).max_abs() > thr)
                    raise(errc::not_an_action, "homomorphism law fails");
        }
    }

    // exhaustive character
    std::vector<cplx> character() const {
        std::vector<cplx> chi(matrices.size());
        for (std::size_t g = 0; g < matrices.size(); ++g) chi[g] = trace(matrices[g]);
        return chi;
    }
};

// ---- cyclic Fourier analysis ---------------------------------------------

// Uf(l) = (1/sqrt(N)) sum_k zeta^{kl} f(k), zeta = exp(i 2 pi / N). Unitary;
// with this normalization U(a conv b) = sqrt(N) (Ua).(Ub).
inline std::vector<cplx> dft_cyclic(const std::vector<cplx>& f) {
    const std::size_t n = f.size();
    if (n == 0) raise(errc::dim_mismatch, "dft of empty vector");
    std::vector<cplx> out(n, cplx(0.0));
    const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t l = 0; l < n; ++l) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            s += std::polar(1.0, w * static_cast<double>(k * l)) * f[k];
        out[l] = s / std::sqrt(static_cast<double>(n));
    }
    return out;
}

// ---- Gelfand transform on summable two-sided sequences ---------------------

// phi_z(a) = sum a_n z^n for |z| = 1; contractive and multiplicative from
// convolution to pointwise product.
inline cplx gelfand_l1(const std::map<int, cplx>& a, cplx z, Tolerance tol = {}) {
    if (std::abs(std::abs(z) - 1.0) > tol.at_scale(1.0) * 1e3)
        raise(errc::off_circle, "gelfand_l1 needs |z| = 1");
    cplx s = 0.0;
    for (const auto& [n, c] : a) s += c * std::pow(z, n);
    return s;
}

inline std::map<int, cplx> sequence_convolve(const std::map<int, cplx>& a,
                                             const std::map<int, cplx>& b) {
    std::map<int, cplx> out;
    for (const auto& [n, ca] : a)
        for (const auto& [m, cb] : b) out[n + m] += ca * cb;
    return out;
}

// ---- induced representations (finite Mackey machine) ------------------------

// Representation of G induced from a unitary representation of a subgroup,
// realized on functions over right cosets Gamma\G with f(xi g) = L_xi f(g).
// Coset representatives are the minimal element indices, so the matrices are
// deterministic. The finite counting measure is bi-invariant, so no
// rho-factor appears.
struct InducedRep {
    Rep rep;                                   // the induced representation of G
    std::vector<std::size_t> coset_reps;       // one representative per coset
    std::vector<std::size_t> coset_of;         // element -> coset index
    std::size_t sub_dim = 0;                   // dim of the inducing representation

    // Multiplication system P(psi) = blockdiag(psi(coset) I): the abelian
    // algebra of the imprimitivity theorem.
    Matrix multiplication_operator(const std::vector<cplx>& psi) const {
        if (psi.size() != coset_reps.size())
            raise(errc::dim_mismatch, "psi must assign one value per coset");
        const std::size_t d = rep.dim;
        Matrix p = Matrix::zero(d, d);
        for (std::size_t c = 0; c < coset_reps.size(); ++c)
            for (std::size_t v = 0; v < sub_dim; ++v)
                p(c * sub_dim + v, c * sub_dim + v) = psi[c];
        return p;
    }

    // psi translated by g: (psi . g)(x) = psi(coset of x g).
    std::vector<cplx> translate(const std::vector<cplx>& psi, std::size_t g) const {
        std::vector<cplx> out(psi.size());
        const FiniteGroup& grp = *rep.group;
        for (std::size_t c = 0; c < coset_reps.size(); ++c)
            out[c] = psi[coset_of[grp.mult[coset_reps[c]][g]]];
        return out;
    }
};

namespace detail {

inline void require_subgroup(const FiniteGroup& g, const std::vector<std::size_t>& gamma) {
    if (gamma.empty()) raise(errc::not_subgroup, "empty subgroup");
    std::vector<bool> member(g.order, false);
    for (std::size_t x : gamma) {
        if (x >= g.order) raise(errc::not_subgroup, "subgroup element out of range");
        member[x] = true;
    }
    if (!member[g.identity]) raise(errc::not_subgroup, "subgroup misses the identity");
    for (std::size_t x : gamma) {
        if (!member[g.inv[x]]) raise(errc::not_subgroup, "subgroup not closed under inverses");
        for (std::size_t y : gamma)
            if (!member[g.mult[x][y]]) raise(errc::not_subgroup, "subgroup not closed");
    }
}

}  // namespace detail

// L is indexed by position in gamma (L.matrices[i] represents gamma[i]).
inline InducedRep induce(const FiniteGroup& g, const std::vector<std::size_t>& gamma,
                         const Rep& l) {
    detail::require_subgroup(g, gamma);
    if (l.matrices.size() != gamma.size())
        raise(errc::dim_mismatch, "inducing representation size mismatch");
    for (const Matrix& m : l.matrices)
        if (!is_unitary(m, Tolerance{1e-8, 1e-8}))
            raise(errc::not_an_action, "inducing representation must be unitary");

    std::vector<std::size_t> gamma_pos(g.order, g.order);
    for (std::size_t i = 0; i < gamma.size(); ++i) gamma_pos[gamma[i]] = i;

    // right cosets Gamma x, represented by their minimal member
    std::vector<std::size_t> coset_of(g.order, g.order);
    std::vector<std::size_t> reps;
    for (std::size_t x = 0; x < g.order; ++x) {
        if (coset_of[x] != g.order) continue;
        const std::size_t c = reps.size();
        reps.push_back(x);
        for (std::size_t xi : gamma) coset_of[g.mult[xi][x]] = c;
    }

    const std::size_t v = l.dim;
    const std::size_t dim = reps.size() * v;
    InducedRep ind;
    ind.coset_reps = reps;
    ind.coset_of = coset_of;
    ind.sub_dim = v;
    ind.rep.group = &g;
    ind.rep.dim = dim;
    ind.rep.matrices.assign(g.order, Matrix::zero(dim, dim));

    // (U_g f)(x_c) = f(x_c g) = L_xi f(x_{c'}), xi = x_c g x_{c'}^{-1}
    for (std::size_t gg = 0; gg < g.order; ++gg) {
        Matrix& u = ind.rep.matrices[gg];
        for (std::size_t c = 0; c < reps.size(); ++c) {
            const std::size_t xg = g.mult[reps[c]][gg];
            const std::size_t cp = coset_of[xg];
            const std::size_t xi = g.mult[xg][g.inv[reps[cp]]];
            const std::size_t pos = gamma_pos[xi];
            if (pos == g.order) raise(errc::not_subgroup, "coset bookkeeping failed");
            const Matrix& block = l.matrices[pos];
            for (std::size_t a = 0; a < v; ++a)
                for (std::size_t b = 0; b < v; ++b) u(c * v + a, cp * v + b) = block(a, b);
        }
    }
    ind.rep.validate();
    return ind;
}

// Covariance residual max over group elements and a delta basis of psi:
// | U_g P(psi) U_g^-1 - P(psi . g) |_max. Zero is the imprimitivity relation.
inline double covariance_residual(const InducedRep& ind) {
    const FiniteGroup& g = *ind.rep.group;
    double worst = 0.0;
    for (std::size_t c = 0; c < ind.coset_reps.size(); ++c) {
        std::vector<cplx> psi(ind.coset_reps.size(), cplx(0.0));
        psi[c] = 1.0;
        const Matrix p = ind.multiplication_operator(psi);
        for (std::size_t gg = 0; gg < g.order; ++gg) {
            const Matrix lhs = ind.rep.at(gg) * p * ind.rep.at(g.inv[gg]);
            const Matrix rhs = ind.multiplication_operator(ind.translate(psi, gg));
            worst = std::max(worst, (lhs - rhs).max_abs());
        }
    }
    return worst;
}

// ---- coadjoint orbits of the ax+b Lie algebra action ------------------------

// The dual action is (xi, eta) -> (xi, a xi + eta); nonzero xi sweeps the
// vertical line x = xi, and xi = 0 is a fixed point.
struct CoadjointOrbit {
    bool fixed_point = false;
    double xi = 0.0, eta = 0.0;
    std::vector<std::pair<double, double>> samples;  // Ad*_g images over an a-grid
};

inline CoadjointOrbit coadjoint_orbit(double xi, double eta, std::size_t grid = 21,
                                      double a_range = 2.0) {
    CoadjointOrbit orbit;
    orbit.xi = xi;
    orbit.eta = eta;
    orbit.fixed_point = xi == 0.0;
    for (std::size_t k = 0; k < grid; ++k) {
        const double a =
            -a_range + 2.0 * a_range * static_cast<double>(k) / static_cast<double>(grid - 1);
        orbit.samples.emplace_back(xi, a * xi + eta);
    }
    return orbit;
}

// ---- ax+b group: numerical Haar invariance ---------------------------------

// Trapezoidal check of left/right Haar invariance for the ax+b group on a
// rectangle in (a, b) space. d lambda_L = da db / a^2, d lambda_R = da db / a,
// modular function 1/a. The test function must decay to ~0 on the boundary
// both before and after translation.
struct HaarCheckReport {
    double left_residual = 0.0;
    double right_residual = 0.0;
    double modular = 0.0;        // Delta(a', b') = 1 / a'
    double boundary_mass = 0.0;  // largest |f| sampled on the boundary
    // crude trapezoid bound area * (ha^2 Maa + hb^2 Mbb) / 12 with the second
    // derivatives of the weighted integrand estimated on the grid; reported
    // as documentation, not certified
    double quadrature_error_bound = 0.0;
};

struct QuadratureGrid {
    double a_min = 0.05, a_max = 10.0;
    double b_min = -5.0, b_max = 6.0;
    std::size_t na = 400, nb = 400;
};

inline HaarCheckReport axb_haar_check(const std::function<double(double, double)>& f,
                                      double ap, double bp, const QuadratureGrid& grid = {}) {
    if (ap <= 0.0) raise(errc::outside_domain, "group element needs a > 0");
    const double ha = (grid.a_max - grid.a_min) / static_cast<double>(grid.na);
    const double hb = (grid.b_max - grid.b_min) / static_cast<double>(grid.nb);

    // translated integrands: h^{-1} g = (a/a', (b-b')/a'), g h^{-1} = (a/a', b - a b'/a')
    auto left_translated = [&](double a, double b) { return f(a / ap, (b - bp) / ap); };
    auto right_translated = [&](double a, double b) { return f(a / ap, b - a * bp / ap); };

    double boundary = 0.0;
    for (std::size_t i = 0; i <= grid.na; ++i) {
        const double a = grid.a_min + ha * static_cast<double>(i);
        for (double b : {grid.b_min, grid.b_max})
            boundary = std::max({boundary, std::abs(f(a, b)), std::abs(left_translated(a, b)),
                                 std::abs(right_translated(a, b))});
    }
    for (std::size_t j = 0; j <= grid.nb; ++j) {
        const double b = grid.b_min + hb * static_cast<double>(j);
        for (double a : {grid.a_min, grid.a_max})
            boundary = std::max({boundary, std::abs(f(a, b)), std::abs(left_translated(a, b)),
                                 std::abs(right_translated(a, b))});
    }
    if (boundary > 1e-9) raise(errc::support_out_of_domain, "test function leaks off the grid");

    auto integrate = [&](auto&& fn, int weight_power) {
        double total = 0.0;
        for (std::size_t i = 0; i <= grid.na; ++i) {
            const double a = grid.a_min + ha * static_cast<double>(i);
            const double wa = (i == 0 || i == grid.na) ? 0.5 : 1.0;
            const double denom = weight_power == 2 ? a * a : a;
            double rowsum = 0.0;
            for (std::size_t j = 0; j <= grid.nb; ++j) {
                const double b = grid.b_min + hb * static_cast<double>(j);
                const double wb = (j == 0 || j == grid.nb) ? 0.5 : 1.0;
                rowsum += wb * fn(a, b);
            }
            total += wa * rowsum / denom;
        }
        return total * ha * hb;
    };

    HaarCheckReport rep;
    const double left_base = integrate(f, 2);
    const double left_shift = integrate(left_translated, 2);
    const double right_base = integrate(f, 1);
    const double right_shift = integrate(right_translated, 1);
    rep.left_residual = std::abs(left_shift - left_base);
    rep.right_residual = std::abs(right_shift - right_base);
    rep.modular = 1.0 / ap;
    rep.boundary_mass = boundary;

    double max_daa = 0.0, max_dbb = 0.0;
    for (std::size_t i = 1; i < grid.na; ++i) {
        const double a = grid.a_min + ha * static_cast<double>(i);
        for (std::size_t j = 1; j < grid.nb; ++j) {
            const double b = grid.b_min + hb * static_cast<double>(j);
            auto weighted = [&](double aa, double bb) { return f(aa, bb) / (aa * aa); };
            const double daa =
                (weighted(a + ha, b) - 2.0 * weighted(a, b) + weighted(a - ha, b)) / (ha * ha);
            const double dbb =
                (weighted(a, b + hb) - 2.0 * weighted(a, b) + weighted(a, b - hb)) / (hb * hb);
            max_daa = std::max(max_daa, std::abs(daa));
            max_dbb = std::max(max_dbb, std::abs(dbb));
        }
    }
    const double area = (grid.a_max - grid.a_min) * (grid.b_max - grid.b_min);
    rep.quadrature_error_bound = area * (ha * ha * max_daa + hb * hb * max_dbb) / 12.0;
    return rep;
}

}  // namespace finop
