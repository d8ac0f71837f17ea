#include <catch2/catch_amalgamated.hpp>

#include "finop/group.hpp"
#include "finop/rng.hpp"

using namespace finop;

namespace {

const cplx I{0.0, 1.0};

// Z3 x| Z2 with the inversion action: the symmetric group S3
FiniteGroup s3() {
    const FiniteGroup z3 = cyclic_group(3);
    const FiniteGroup z2 = cyclic_group(2);
    std::vector<std::vector<std::size_t>> action = {{0, 1, 2}, {0, 2, 1}};
    return semidirect_product(z3, z2, action);
}

Rep character_rep(const FiniteGroup* group, const std::vector<cplx>& values) {
    Rep r;
    r.group = group;
    r.dim = 1;
    for (const cplx& v : values) r.matrices.push_back(Matrix(1, 1, {v}));
    return r;
}

}  // namespace

TEST_CASE("cyclic groups satisfy the axioms", "[group]") {
    const FiniteGroup g = cyclic_group(6);
    CHECK(g.order == 6);
    CHECK(g.identity == 0);
    CHECK(g.is_abelian());
    CHECK(g.inv[2] == 4);
}

TEST_CASE("semidirect product with inversion action gives S3", "[group]") {
    const FiniteGroup g = s3();
    CHECK(g.order == 6);
    CHECK_FALSE(g.is_abelian());
    for (std::size_t x = 0; x < g.order; ++x) {
        std::size_t acc = x, ord = 1;
        while (acc != g.identity) {
            acc = g.mult[acc][x];
            ++ord;
        }
        CHECK((ord == 1 || ord == 2 || ord == 3));
    }
}

TEST_CASE("trivial action gives the direct product", "[group]") {
    const FiniteGroup z3 = cyclic_group(3);
    const FiniteGroup z2 = cyclic_group(2);
    std::vector<std::vector<std::size_t>> trivial = {{0, 1, 2}, {0, 1, 2}};
    const FiniteGroup g = semidirect_product(z3, z2, trivial);
    CHECK(g.order == 6);
    CHECK(g.is_abelian());
}

TEST_CASE("semidirect product rejects non-actions", "[group]") {
    const FiniteGroup z3 = cyclic_group(3);
    const FiniteGroup z2 = cyclic_group(2);
    std::vector<std::vector<std::size_t>> bad = {{0, 1, 2}, {1, 0, 2}};
    CHECK_THROWS_AS(semidirect_product(z3, z2, bad), error);
}

TEST_CASE("Heisenberg group over Z_p", "[group]") {
    const FiniteGroup h2 = heisenberg_group(2);
    CHECK(h2.order == 8);

    const FiniteGroup h3 = heisenberg_group(3);
    CHECK(h3.order == 27);
    const auto z = h3.center();
    CHECK(z.size() == 3);
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(std::find(z.begin(), z.end(), heisenberg_index(3, 0, 0, c)) != z.end());

    // conjugation: (a,b,c)(0,x,y)(a,b,c)^-1 = (0, x, ax+y)
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t x = 0; x < 3; ++x)
                    for (std::size_t y = 0; y < 3; ++y) {
                        const std::size_t g = heisenberg_index(3, a, b, c);
                        const std::size_t n = heisenberg_index(3, 0, x, y);
                        const std::size_t conj = h3.mult[h3.mult[g][n]][h3.inv[g]];
                        CHECK(conj == heisenberg_index(3, 0, x, (a * x + y) % 3));
                    }
}

TEST_CASE("Heisenberg group equals the semidirect-product construction", "[group]") {
    const std::size_t p = 3;
    const FiniteGroup zp = cyclic_group(p);
    std::vector<std::vector<std::size_t>> pair_table(p * p, std::vector<std::size_t>(p * p));
    auto pidx = [&](std::size_t c, std::size_t b) { return c * p + b; };
    for (std::size_t c1 = 0; c1 < p; ++c1)
        for (std::size_t b1 = 0; b1 < p; ++b1)
            for (std::size_t c2 = 0; c2 < p; ++c2)
                for (std::size_t b2 = 0; b2 < p; ++b2)
                    pair_table[pidx(c1, b1)][pidx(c2, b2)] = pidx((c1 + c2) % p, (b1 + b2) % p);
    const FiniteGroup zp2 = FiniteGroup::from_table(std::move(pair_table));
    std::vector<std::vector<std::size_t>> action(p, std::vector<std::size_t>(p * p));
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t c = 0; c < p; ++c)
            for (std::size_t b = 0; b < p; ++b) action[a][pidx(c, b)] = pidx((c + a * b) % p, b);
    const FiniteGroup semi = semidirect_product(zp2, zp, action);
    CHECK(semi.order == p * p * p);
    CHECK_FALSE(semi.is_abelian());
    CHECK(semi.center().size() == p);

    // isomorphism onto heisenberg_group(p): ((c,b),a) -> (a,b,c)
    const FiniteGroup heis = heisenberg_group(p);
    std::vector<std::size_t> phi(semi.order);
    for (std::size_t c = 0; c < p; ++c)
        for (std::size_t b = 0; b < p; ++b)
            for (std::size_t a = 0; a < p; ++a)
                phi[pidx(c, b) * p + a] = heisenberg_index(p, a, b, c);
    for (std::size_t x = 0; x < semi.order; ++x)
        for (std::size_t y = 0; y < semi.order; ++y)
            CHECK(phi[semi.mult[x][y]] == heis.mult[phi[x]][phi[y]]);
}

TEST_CASE("group algebra convolution", "[group]") {
    const FiniteGroup g = s3();
    for (std::size_t a = 0; a < g.order; ++a)
        for (std::size_t b = 0; b < g.order; ++b) {
            const auto d = convolve(GroupAlgebraElement::delta(g, a),
                                    GroupAlgebraElement::delta(g, b));
            for (std::size_t x = 0; x < g.order; ++x)
                CHECK(std::abs(d.coeffs[x] - (x == g.mult[a][b] ? cplx(1) : cplx(0))) < 1e-14);
        }

    const FiniteGroup z4 = cyclic_group(4);
    GroupAlgebraElement a;
    a.group = &z4;
    a.coeffs = {1, 1, 0, 0};
    const auto unit = GroupAlgebraElement::delta(z4, 0);
    const auto prod = convolve(a, unit);
    for (std::size_t x = 0; x < 4; ++x) CHECK(std::abs(prod.coeffs[x] - a.coeffs[x]) < 1e-14);

    Rng rng(5);
    GroupAlgebraElement u, v, w;
    u.group = v.group = w.group = &g;
    u.coeffs = rng.vector(g.order);
    v.coeffs = rng.vector(g.order);
    w.coeffs = rng.vector(g.order);
    const auto lhs = convolve(convolve(u, v), w);
    const auto rhs = convolve(u, convolve(v, w));
    for (std::size_t x = 0; x < g.order; ++x)
        CHECK(std::abs(lhs.coeffs[x] - rhs.coeffs[x]) < 1e-12);

    const auto uv_star = involution(convolve(u, v));
    const auto vstar_ustar = convolve(involution(v), involution(u));
    for (std::size_t x = 0; x < g.order; ++x)
        CHECK(std::abs(uv_star.coeffs[x] - vstar_ustar.coeffs[x]) < 1e-12);

    GroupAlgebraElement z4elt;
    z4elt.group = &z4;
    z4elt.coeffs = {1, 2, 3, 4};
    CHECK_THROWS_AS(convolve(u, z4elt), error);
}

TEST_CASE("cyclic DFT values and Parseval", "[group]") {
    const auto two = dft_cyclic({1, 0});
    CHECK(std::abs(two[0] - cplx(1.0 / std::sqrt(2.0))) < 1e-14);
    CHECK(std::abs(two[1] - cplx(1.0 / std::sqrt(2.0))) < 1e-14);

    const auto four = dft_cyclic({0, 1, 0, 0});
    CHECK(std::abs(four[0] - cplx(0.5)) < 1e-14);
    CHECK(std::abs(four[1] - cplx(0.5) * I) < 1e-14);
    CHECK(std::abs(four[2] + cplx(0.5)) < 1e-14);
    CHECK(std::abs(four[3] + cplx(0.5) * I) < 1e-14);

    Rng rng(7);
    const auto f = rng.vector(8);
    const auto uf = dft_cyclic(f);
    double n1 = 0.0, n2 = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
        n1 += std::norm(f[k]);
        n2 += std::norm(uf[k]);
    }
    CHECK(std::abs(n1 - n2) < 1e-12);
}

TEST_CASE("DFT turns cyclic convolution into products", "[group]") {
    const FiniteGroup z8 = cyclic_group(8);
    Rng rng(9);
    GroupAlgebraElement a, b;
    a.group = b.group = &z8;
    a.coeffs = rng.vector(8);
    b.coeffs = rng.vector(8);
    const auto conv = convolve(a, b);
    const auto ua = dft_cyclic(a.coeffs);
    const auto ub = dft_cyclic(b.coeffs);
    const auto uconv = dft_cyclic(conv.coeffs);
    for (std::size_t l = 0; l < 8; ++l)
        CHECK(std::abs(uconv[l] - std::sqrt(8.0) * ua[l] * ub[l]) < 1e-12);
}

TEST_CASE("gelfand transform on summable sequences", "[group]") {
    std::map<int, cplx> delta0 = {{0, cplx(1.0)}};
    CHECK(std::abs(gelfand_l1(delta0, std::polar(1.0, 0.7)) - cplx(1.0)) < 1e-14);

    std::map<int, cplx> delta1 = {{1, cplx(1.0)}};
    CHECK(std::abs(gelfand_l1(delta1, I) - I) < 1e-14);

    std::map<int, cplx> a = {{0, cplx(1.0)}, {1, cplx(1.0)}};
    std::map<int, cplx> b = {{0, cplx(1.0)}, {1, cplx(1.0)}};
    const auto ab = sequence_convolve(a, b);
    for (int k = 0; k < 16; ++k) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / 16.0);
        CHECK(std::abs(gelfand_l1(ab, z) - gelfand_l1(a, z) * gelfand_l1(b, z)) < 1e-12);
    }

    std::map<int, cplx> mixed = {{-2, cplx(0.3, -0.4)}, {0, cplx(2.0)}, {5, I}};
    double l1norm = 0.0;
    for (const auto& [n, c] : mixed) l1norm += std::abs(c);
    for (int k = 0; k < 8; ++k) {
        const cplx z = std::polar(1.0, 0.9 * k);
        CHECK(std::abs(gelfand_l1(mixed, z)) <= l1norm + 1e-12);
    }

    CHECK_THROWS_AS(gelfand_l1(delta0, cplx(0.5)), error);
}

TEST_CASE("inducing the sign character of {0,2} in Z4 gives the odd characters", "[group]") {
    const FiniteGroup z4 = cyclic_group(4);
    const Rep sign = character_rep(nullptr, {cplx(1.0), cplx(-1.0)});
    const InducedRep ind = induce(z4, {0, 2}, sign);
    CHECK(ind.rep.dim == 2);

    const auto chi = ind.rep.character();
    for (std::size_t l = 0; l < 4; ++l) {
        cplx ip = 0.0;
        for (std::size_t k = 0; k < 4; ++k)
            ip += chi[k] * std::conj(std::polar(1.0, 2.0 * std::numbers::pi * double(k * l) / 4.0));
        ip /= 4.0;
        const double expect = (l % 2 == 1) ? 1.0 : 0.0;
        CHECK(std::abs(ip - cplx(expect)) < 1e-12);
    }
}

TEST_CASE("inducing from the whole group returns the representation", "[group]") {
    const FiniteGroup z4 = cyclic_group(4);
    const Rep chi = character_rep(&z4, {cplx(1.0), I, cplx(-1.0), -I});
    const InducedRep ind = induce(z4, {0, 1, 2, 3}, chi);
    CHECK(ind.rep.dim == 1);
    for (std::size_t g = 0; g < 4; ++g)
        CHECK((ind.rep.at(g) - chi.at(g)).max_abs() < 1e-12);
}

TEST_CASE("induced dimension is the index times the inducing dimension", "[group]") {
    const FiniteGroup g = s3();
    std::vector<std::size_t> gamma = {0, 2, 4};
    const Rep triv = character_rep(nullptr, {cplx(1.0), cplx(1.0), cplx(1.0)});
    const InducedRep ind = induce(g, gamma, triv);
    CHECK(ind.rep.dim == (g.order / gamma.size()) * triv.dim);
}

TEST_CASE("inducing a nontrivial central character of Heisenberg(3)", "[group]") {
    const FiniteGroup h3 = heisenberg_group(3);
    // every nontrivial central parameter gives an irreducible 3-dim induction
    for (std::size_t h = 1; h < 3; ++h) {
        std::vector<std::size_t> gamma;
        std::vector<cplx> values;
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c) {
                gamma.push_back(heisenberg_index(3, 0, b, c));
                values.push_back(
                    std::polar(1.0, 2.0 * std::numbers::pi * double(h * c) / 3.0));
            }
        const Rep l = character_rep(nullptr, values);
        const InducedRep ind = induce(h3, gamma, l);
        CHECK(ind.rep.dim == 3);
        CHECK(is_irreducible(ind.rep.matrices));
        CHECK(covariance_residual(ind) < 1e-12);
    }
}

TEST_CASE("covariance relation for the Z4 induced representation", "[group]") {
    const FiniteGroup z4 = cyclic_group(4);
    const Rep sign = character_rep(nullptr, {cplx(1.0), cplx(-1.0)});
    const InducedRep ind = induce(z4, {0, 2}, sign);
    CHECK(covariance_residual(ind) < 1e-12);
}

TEST_CASE("inducing the trivial character of {e} gives the regular representation",
          "[group]") {
    const FiniteGroup z6 = cyclic_group(6);
    const Rep triv = character_rep(nullptr, {cplx(1.0)});
    const InducedRep ind = induce(z6, {0}, triv);
    CHECK(ind.rep.dim == 6);

    for (std::size_t g = 0; g < 6; ++g)
        for (std::size_t c = 0; c < 6; ++c)
            for (std::size_t d = 0; d < 6; ++d)
                if (std::abs(ind.rep.at(g)(c, d)) > 0.5) CHECK(d == z6.mult[c][g]);

    Matrix fourier(6, 6);
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t l = 0; l < 6; ++l)
            fourier(k, l) =
                std::polar(1.0 / std::sqrt(6.0), 2.0 * std::numbers::pi * double(k * l) / 6.0);
    for (std::size_t g = 0; g < 6; ++g) {
        const Matrix d = fourier.adjoint() * ind.rep.at(g) * fourier;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                if (i != j) CHECK(std::abs(d(i, j)) < 1e-12);
        for (std::size_t l = 0; l < 6; ++l)
            CHECK(std::abs(d(l, l) -
                           std::polar(1.0, 2.0 * std::numbers::pi * double(l) * double(g) / 6.0)) <
                  1e-12);
    }
}

TEST_CASE("induce validates the subgroup", "[group]") {
    const FiniteGroup z4 = cyclic_group(4);
    const Rep sign = character_rep(nullptr, {cplx(1.0), cplx(-1.0)});
    CHECK_THROWS_AS(induce(z4, {0, 1}, sign), error);
}

TEST_CASE("coadjoint orbits of the ax+b action", "[group]") {
    const CoadjointOrbit line = coadjoint_orbit(1.0, 0.0);
    CHECK_FALSE(line.fixed_point);
    for (const auto& [x, y] : line.samples) CHECK(x == 1.0);
    CHECK(line.samples.front().second != line.samples.back().second);

    const CoadjointOrbit fixed = coadjoint_orbit(0.0, 5.0);
    CHECK(fixed.fixed_point);
    for (const auto& [x, y] : fixed.samples) {
        CHECK(x == 0.0);
        CHECK(y == 5.0);
    }

    const CoadjointOrbit orbit = coadjoint_orbit(2.0, 3.0, 3, 1.0);  // a in {-1, 0, 1}
    CHECK(orbit.samples[2].first == 2.0);
    CHECK(orbit.samples[2].second == 5.0);
}

TEST_CASE("ax+b Haar invariance under translation", "[group]") {
    auto bump = [](double a, double b) {
        const double da = (a - 2.5) / 0.3, db = b / 0.3;
        return std::exp(-0.5 * (da * da + db * db));
    };

    const HaarCheckReport id = axb_haar_check(bump, 1.0, 0.0);
    CHECK(id.left_residual < 1e-12);
    CHECK(id.right_residual < 1e-12);
    CHECK(id.modular == 1.0);

    const HaarCheckReport shifted = axb_haar_check(bump, 2.0, 1.0);
    CHECK(shifted.left_residual < 1e-6);
    CHECK(shifted.right_residual < 1e-6);
    CHECK(shifted.modular == 0.5);
    CHECK(shifted.quadrature_error_bound > 0.0);

    auto fat = [](double a, double) { return 1.0 / (1.0 + a); };
    CHECK_THROWS_AS(axb_haar_check(fat, 2.0, 1.0), error);
}
