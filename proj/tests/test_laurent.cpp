#include <random>

#include "doctest.h"
#include "statdisc/laurent.hpp"

using namespace statdisc;

namespace {

using Vec = std::map<int, cplx>;

// Independent reference arithmetic on plain exponent maps.
Vec convolve(const Vec& a, const Vec& b) {
    Vec r;
    for (const auto& [n, c] : a)
        for (const auto& [m, d] : b) r[n + m] += c * d;
    return r;
}

cplx eval_ref(const Vec& a, cplx z) {
    cplx s = 0.0;
    for (const auto& [n, c] : a) s += c * std::pow(z, n);
    return s;
}

int winding_ref(const ExactLaurent& p, int samples) {
    double total = 0.0;
    cplx prev = p(1.0);
    for (int k = 1; k <= samples; ++k) {
        cplx cur = p(std::polar(1.0, 2.0 * std::numbers::pi * k / samples));
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

ExactLaurent random_exact(std::mt19937& rng, int lo, int hi) {
    std::uniform_int_distribution<int> c(-5, 5);
    ExactLaurent p;
    for (int n = lo; n <= hi; ++n) p.add_term(n, GaussRational(mpq_class(c(rng)), mpq_class(c(rng))));
    return p;
}

bool float_close(const FloatLaurent& a, const FloatLaurent& b, double tol) {
    return (a - b).max_abs_coeff() <= tol;
}

const ExactLaurent Z = ExactLaurent::zeta();
const ExactLaurent ONE(1L);

}  // namespace

TEST_CASE("canonical form drops zero coefficients") {
    ExactLaurent p = Z + ONE;
    p -= Z;
    CHECK(p.terms().size() == 1);
    CHECK((Z - Z).is_zero());
}

TEST_CASE("circle_conj basics") {
    CHECK(circle_conj(Z) == ExactLaurent::zeta(-1));
    CHECK(circle_conj(ONE - Z) == ONE - ExactLaurent::zeta(-1));
    // 1 - zeta = -zeta * conj(1 - zeta) as a ring identity
    CHECK(ONE - Z == -(Z * circle_conj(ONE - Z)));

    const ExactLaurent q = ExactLaurent::monomial(GaussRational(-2), 4);
    const ExactLaurent expect = ExactLaurent::monomial(GaussRational(-2), -4);
    CHECK(circle_conj(q) == expect);
    for (int k = 0; k < 16; ++k) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / 16);
        CHECK(std::abs(circle_conj(q)(z) - std::conj(q(z))) < 1e-12);
    }
}

TEST_CASE("riesz_holo against convolution") {
    CHECK(riesz_holo(TrigPoly<GaussRational>(ONE)) == ONE);
    const Vec base{{-1, -1.0}, {0, 2.0}, {1, -1.0}};  // |1 - zeta|^2
    Vec sq = convolve(base, base), cube = convolve(sq, base);
    auto expect_from = [](const Vec& u) {
        ExactLaurent h;
        for (const auto& [n, c] : u) {
            if (n == 0) h.add_term(0, GaussRational(std::lround(c.real())));
            if (n > 0) h.add_term(n, GaussRational(2 * std::lround(c.real())));
        }
        return h;
    };
    const ExactLaurent abs2 = (ONE - Z) * circle_conj(ONE - Z);
    const auto h4 = riesz_holo(TrigPoly<GaussRational>(abs2.pow(2)));
    const auto h6 = riesz_holo(TrigPoly<GaussRational>(abs2.pow(3)));
    CHECK(h4 == expect_from(sq));
    CHECK(h6 == expect_from(cube));
    CHECK(h4 == ExactLaurent::from_terms({{0, 6}, {1, -8}, {2, 2}}));
    CHECK(h6 == ExactLaurent::from_terms({{0, 20}, {1, -30}, {2, 12}, {3, -2}}));
}

TEST_CASE("TrigPoly rejects non-real input") {
    CHECK_THROWS_AS(TrigPoly<GaussRational>{Z}, Error);
}

TEST_CASE("winding numbers") {
    CHECK(winding_number(ExactLaurent::monomial(GaussRational(3, 1), 7)) == 7);
    CHECK(winding_number(ExactLaurent::monomial(GaussRational(-1), -3)) == -3);
    const ExactLaurent m8 = ExactLaurent::monomial(GaussRational(-1), 8);
    CHECK(winding_number(m8) == 8);
    CHECK(winding_ref(m8, 1024) == 8);
    CHECK(winding_number(m8.to_float()) == 8);
    // (zeta - 1/2)(zeta - 3): one root inside
    const ExactLaurent two_roots = (Z - ExactLaurent(GaussRational(mpq_class(1, 2)))) * (Z - ExactLaurent(3L));
    CHECK(winding_number(two_roots) == 1);
    CHECK_THROWS_AS(winding_number(ONE - Z), Error);
    CHECK_THROWS_AS(winding_number((ONE - Z).to_float()), Error);
}

TEST_CASE("divide_by examples") {
    const ExactLaurent f = ONE - ExactLaurent::zeta(-1);
    const ExactLaurent q = ExactLaurent::monomial(GaussRational(-2), 4);
    CHECK(divide_by(f.pow(2) * q, f.pow(2)) == q);
    CHECK(divide_by(q, ONE) == q);
    const ExactLaurent a = Z.pow(3) * (ONE - Z);
    CHECK(divide_by(a * f.pow(2), f.pow(2)) == a);
    CHECK_THROWS_AS(divide_by(Z + ExactLaurent(2L), ONE - Z), Error);
    // float backend round trip
    CHECK(float_close(divide_by((a * f.pow(2)).to_float(), f.pow(2).to_float()), a.to_float(), 1e-12));
}

TEST_CASE("property: circle_conj, winding additivity, backend agreement") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const ExactLaurent a = random_exact(rng, -3, 3), b = random_exact(rng, -2, 4);
        CHECK(circle_conj(circle_conj(a)) == a);
        CHECK(circle_conj(a * b) == circle_conj(a) * circle_conj(b));
        for (int k = 0; k < 256; k += 17) {
            const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / 256);
            CHECK(std::abs(circle_conj(a)(z) - std::conj(a(z))) < 1e-9);
            Vec ref;
            for (const auto& [n, c] : a.terms()) ref[n] = c.to_complex();
            CHECK(std::abs(a(z) - eval_ref(ref, z)) < 1e-9);
        }
        // backends agree
        CHECK(float_close((a * b).to_float(), a.to_float() * b.to_float(), 1e-9));
        CHECK(float_close((a + b).to_float(), a.to_float() + b.to_float(), 1e-9));
        CHECK(float_close(divide_by(a * b, b).to_float(), a.to_float(), 1e-9));
        // riesz_holo reproduces the real part
        const ExactLaurent u = a + circle_conj(a);
        const ExactLaurent h = riesz_holo(TrigPoly<GaussRational>(u));
        CHECK(h.is_holomorphic());
        CHECK(h + circle_conj(h) == u * GaussRational(2));
        // winding
        int wa = 0, wb = 0;
        try {
            wa = winding_number(a);
            wb = winding_number(b);
        } catch (const Error&) {
            continue;
        }
        CHECK(wa == winding_ref(a, 4096));
        CHECK(winding_number(a * b) == wa + wb);
        CHECK(winding_number(a.to_float()) == wa);
    }
}

TEST_CASE("exact number parsing") {
    CHECK(GaussRational::parse_real("0.0015") == GaussRational(mpq_class(3, 2000)));
    CHECK(GaussRational::parse_real("1e-3") == GaussRational(mpq_class(1, 1000)));
    CHECK(GaussRational::parse_real("-2.5E1") == GaussRational(-25));
    CHECK(GaussRational::parse_real("010") == GaussRational(10));
    CHECK(GaussRational::parse_real("03/012") == GaussRational(mpq_class(1, 4)));
    CHECK(GaussRational::parse_real("+7") == GaussRational(7));
    CHECK_THROWS(GaussRational::parse_real(""));
}
