#include <random>

#include "doctest.h"
#include "statdisc/symbol.hpp"
#include "support.hpp"

using namespace statdisc;
using namespace statdisc::testing;

namespace {

const ExactLaurent Z = ExactLaurent::zeta(), ONE(1L);
const ExactLaurent ZB = ExactLaurent::zeta(-1);

ExactLaurent mono(long c, int n) { return ExactLaurent::monomial(GaussRational(c), n); }

}  // namespace

TEST_CASE("toy linearization matrix") {
    const Model m = toy_model();
    const ExactDisc f0 = initial_lift(m, rat(1, 2), rat(1, 3));
    const SymbolMatrix G = build_G(m, f0);
    const ExactLaurent abs2 = (ONE - Z) * (ONE - ZB);

    // rho~3 against conj z1
    CHECK(G(2, 2) == mono(2, 3) * abs2 + ZB.pow(3) * (ONE - Z).pow(2));
    CHECK(G(2, 2) == (ONE - ZB).pow(2) * (mono(-2, 4) + ZB));
    CHECK(G(3, 2) == (mono(2, 3) * abs2 - ZB.pow(3) * (ONE - Z).pow(2)) * GaussRational::i());
    CHECK(G(4, 3) == mono(3, 3) * abs2.pow(2) + mono(2, -3) * abs2 * (ONE - Z).pow(2));
    CHECK(G(4, 3) == (ONE - ZB).pow(4) * (mono(3, 5) - ONE * GaussRational(2)));
    CHECK(G(2, 4) == ONE);
    CHECK(G(3, 4) == ExactLaurent(-GaussRational::i()));

    // block shape: (1/2) I, G2, -i zeta^k0 I on the diagonal and zeros below
    CHECK(G.is_block_upper_triangular({2, 4, 2}));
    CHECK(G(0, 0) == ExactLaurent(rat(1, 2)));
    CHECK(G(1, 1) == ExactLaurent(rat(1, 2)));
    CHECK(G(0, 1).is_zero());
    CHECK(G(6, 6) == ExactLaurent::monomial(-GaussRational::i(), 3));
    CHECK(G(7, 7) == ExactLaurent::monomial(-GaussRational::i(), 3));
    CHECK(G(6, 7).is_zero());
}

TEST_CASE("toy Q/S data and the factorization of G2") {
    const Model m = toy_model();
    const ExactDisc f0 = initial_lift(m, rat(1, 2), rat(1, 3));
    const auto fac = factor_G2(m, f0);
    const auto& qs = fac.qs;
    CHECK(qs.blocks[0].Q == mono(-2, 4));
    CHECK(qs.blocks[0].S == mono(1, 3));
    CHECK(qs.blocks[1].Q == mono(3, 5));
    CHECK(qs.blocks[1].S == mono(-2, 4));
    CHECK(qs.blocks[0].q_degree_bound == 4);
    CHECK(qs.blocks[0].q_divisor_power == 4);

    CHECK(fac.D == SymbolMatrix::diagonal({(ONE - ZB).pow(2), ONE, (ONE - ZB).pow(4), ONE}));
    const GaussRational i = GaussRational::i();
    const SymbolMatrix expect = SymbolMatrix::from_rows({
        {mono(-2, 4) + ZB, ONE, {}, {}},
        {(mono(-2, 4) - ZB) * i, ExactLaurent(-i), {}, {}},
        {{}, {}, mono(3, 5) - mono(2, 0), ONE},
        {{}, {}, (mono(3, 5) + mono(2, 0)) * i, ExactLaurent(-i)},
    });
    CHECK(fac.G2_tilde == expect);
    CHECK(fac.G2_tilde * fac.D == fac.G2);
    CHECK(fac.G2_tilde.determinant() == mono(24, 9));
    CHECK(fac.G2_tilde.block(0, 0, 2, 2).determinant() == ExactLaurent::monomial(GaussRational(0, 4), 4));
    CHECK(fac.G2_tilde.block(2, 2, 2, 2).determinant() == ExactLaurent::monomial(GaussRational(0, -6), 5));
}

TEST_CASE("vanishing Laplacian on the circle is rejected") {
    // P = z^3 conj z + z conj z^3 has Laplacian 3(z^2 + conj z^2) / ... vanishing on four rays.
    const Model m(HomogPoly(4, 3, {{3, GaussRational(1)}, {1, GaussRational(1)}}), HomogPoly(4, 2, {{2, GaussRational(1)}}));
    const ExactDisc f0 = initial_lift(m, GaussRational(1), GaussRational(1));
    try {
        factor_G2(m, f0);
        FAIL("expected a singular symbol");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularSymbol);
        CHECK(std::string(e.what()).find("Laplacian") != std::string::npos);
    }
}

TEST_CASE("determinant and adjugate") {
    const SymbolMatrix A = SymbolMatrix::from_rows({{ONE + Z, ZB}, {mono(3, 2), ONE - Z}});
    const ExactLaurent det = (ONE + Z) * (ONE - Z) - ZB * mono(3, 2);
    CHECK(A.determinant() == det);
    CHECK(A * A.adjugate() == SymbolMatrix::identity(2) * det);
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> c(-3, 3), e(-2, 2);
    for (int t = 0; t < 10; ++t) {
        SymbolMatrix B(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) B(i, j) = mono(c(rng), e(rng)) + mono(c(rng), e(rng));
        const ExactLaurent d = B.determinant();
        CHECK(B * B.adjugate() == SymbolMatrix::identity(4) * d);
        const cplx z = std::polar(1.0, 0.7);
        CHECK(std::abs(d(z) - B(z).determinant()) < 1e-9 * (1 + std::abs(d(z))));
    }
}

TEST_CASE("property: Q/S certificates on random models") {
    std::mt19937 rng(17);
    for (int t = 0; t < 25; ++t) {
        const Model m = random_model(rng);
        const auto [c1, c2] = random_multipliers(rng);
        const ExactDisc f0 = initial_lift(m, c1, c2);
        const auto fac = factor_G2(m, f0);
        CHECK(fac.G2_tilde * fac.D == fac.G2);
        for (int s = 0; s < 2; ++s) {
            const auto& b = fac.qs.blocks[static_cast<size_t>(s)];
            CHECK(b.Q.is_holomorphic());
            CHECK(b.Q.max_exp() <= b.q_degree_bound);
            CHECK(b.Q.min_exp() >= b.q_divisor_power);
        }
        // conjugate folding never leaves negative exponents in the lift
        CHECK(f0.is_holomorphic());
    }
}

TEST_CASE("float linearization agrees with the exact one") {
    const Model m = toy_model();
    const ExactDisc f0 = initial_lift(m, rat(1, 2), rat(1, 3));
    const SymbolMatrix G = build_G(m, f0);
    for (int k = 0; k < 5; ++k) {
        const cplx z = std::polar(1.0, 0.3 + 1.1 * k);
        CHECK((G_at(m, f0.to_float(), z) - G(z)).norm() < 1e-12);
    }
}
