#include <random>

#include "doctest.h"
#include "statdisc/lift.hpp"
#include "support.hpp"

using namespace statdisc;
using namespace statdisc::testing;

TEST_CASE("initial lift of the toy model") {
    const Model m = toy_model();
    const ExactDisc f = initial_lift(m, rat(1, 2), rat(1, 3));
    const ExactLaurent Z = ExactLaurent::zeta(), ONE(1L);
    CHECK(f[H1] == ONE - Z);
    CHECK(f[H2] == ONE - Z);
    CHECK(f[GT1] == ExactLaurent::zeta(3) * rat(1, 4));
    CHECK(f[GT2] == ExactLaurent::zeta(3) * rat(1, 6));
    CHECK(f[G1] == ExactLaurent::from_terms({{0, 6}, {1, -8}, {2, 2}}));
    CHECK(f[G2] == ExactLaurent::from_terms({{0, 20}, {1, -30}, {2, 12}, {3, -2}}));
    // The conormal component carries the sign that makes X_1 vanish: -zeta (1 - zeta)^3.
    CHECK(f[HT1] == -(Z * (ONE - Z).pow(3)));
    CHECK(vanishing_order_at_one(f[HT1]) == 3);
    CHECK(vanishing_order_at_one(f[HT2]) == 5);
    CHECK(f[HT2] == (ONE - Z).pow(5) * rat(1, 1));

    const auto cert = verify_stationary(m, f, 1e-12);
    CHECK(cert.exact_checked);
    CHECK(cert.exact_zero);
    REQUIRE(cert.multipliers_exact.has_value());
    CHECK((*cert.multipliers_exact)[0] == ExactLaurent(rat(1, 2)));
    CHECK((*cert.multipliers_exact)[1] == ExactLaurent(rat(1, 3)));
    CHECK(cert.max_residual() < 1e-12);
    CHECK(cert.margin > 0.1);
}

TEST_CASE("vanishing order examples") {
    const ExactLaurent Z = ExactLaurent::zeta(), ONE(1L);
    CHECK(vanishing_order_at_one((ONE - Z).pow(3)) == 3);
    CHECK(vanishing_order_at_one(ONE + Z) == 0);
    CHECK(vanishing_order_at_one(((ONE - Z).pow(3) * (ONE + Z)).to_float()) == 3);
    CHECK(vanishing_order_at_one((ONE + Z).to_float()) == 0);
    CHECK_THROWS_AS(vanishing_order_at_one(ExactLaurent()), Error);
    // zeta^3 (1 - zeta)^2 (1 - 1/zeta)^3 has order 5
    CHECK(vanishing_order_at_one(Z.pow(3) * (ONE - Z).pow(2) * circle_conj(ONE - Z).pow(3)) == 5);
}

TEST_CASE("certificate failures") {
    const Model m = toy_model();
    const ExactDisc f = initial_lift(m, rat(1, 2), rat(1, 3));

    ExactDisc zero;
    try {
        verify_stationary(m, zero, 1e-12);
        FAIL("expected a degenerate lift");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Degenerate);
    }
    CHECK_THROWS_AS(initial_lift(m, GaussRational(0), GaussRational(0)), Error);

    ExactDisc rotated = f;
    rotated[GT1] = rotated[GT1] * GaussRational::i();
    auto cert = certify(m, rotated, 1e-12);
    REQUIRE(cert.failure.has_value());
    CHECK(*cert.failure == ErrorKind::NotConormal);

    ExactDisc moved = f;
    moved[G1] += ExactLaurent(rat(1, 100)) * (ExactLaurent(1L) - ExactLaurent::zeta());
    cert = certify(m, moved, 1e-12);
    REQUIRE(cert.failure.has_value());
    CHECK(*cert.failure == ErrorKind::NotAttached);

    ExactDisc shallow = f;
    shallow[HT1] = ExactLaurent::zeta() * (ExactLaurent(1L) - ExactLaurent::zeta()).pow(2);
    cert = certify(m, shallow, 1e-12);
    REQUIRE(cert.failure.has_value());
    CHECK(*cert.failure == ErrorKind::YStructure);
    CHECK(cert.message.find("d1-1") != std::string::npos);
}

TEST_CASE("reordering of coordinates leaves the certificate unchanged") {
    const Model m = toy_model();
    const ExactDisc f = initial_lift(m, rat(1, 2), rat(1, 3));
    const auto a = certify(m, f, 1e-12);
    const auto b = certify(m, reordered(f), 1e-12);
    CHECK(a.residuals == b.residuals);
    CHECK(a.exact_zero == b.exact_zero);
    CHECK(b.valid());
    CHECK(reordered(reordered(f)) == f);
}

TEST_CASE("disc serialization round trip") {
    const Model m = toy_model();
    const ExactDisc f = initial_lift(m, rat(1, 2), rat(1, 3));
    const auto j = disc_to_json(f);
    CHECK(j["schema_version"] == 1);
    CHECK(disc_from_json(nlohmann::json::parse(j.dump())) == f);
    auto bad = j;
    bad["components"].erase(0);
    CHECK_THROWS_AS(disc_from_json(bad), Error);
}

TEST_CASE("property: scaling the multipliers") {
    const Model m = toy_model();
    const ExactDisc f = initial_lift(m, rat(1, 2), rat(1, 3));
    const ExactDisc g = initial_lift(m, rat(-3, 2), GaussRational(-1));
    for (int k = 0; k < 4; ++k) CHECK(f[k] == g[k]);
    for (int k = 4; k < 8; ++k) CHECK(g[k] == f[k] * GaussRational(-3));
}

TEST_CASE("property: random models certify with zero exact residual") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const Model m = random_model(rng);
        const auto [c1, c2] = random_multipliers(rng);
        const ExactDisc f = initial_lift(m, c1, c2);
        const auto cert = certify(m, f, 1e-9);
        CHECK(cert.valid());
        CHECK(cert.exact_zero);
        CHECK(cert.orders[HT1] >= m.d(1) - 1);
        CHECK(cert.orders[HT2] >= m.d(2) - 1);
        CHECK(f.is_holomorphic());
    }
}
