#include <doctest.h>

#include <random>
#include <sstream>

#include "statdisc/errors.hpp"
#include "statdisc/indices.hpp"
#include "statdisc/rh_solver.hpp"
#include "statdisc/symbol.hpp"
#include "support.hpp"

using namespace statdisc;
using namespace statdisc::testing;

namespace {

Model perturbed_toy(long num, long den) {
    Perturbation p;
    p.amplitude = rat(num, den);
    PerturbationTerm t;
    t.ell = 1;
    t.I = {5, 0};
    p.terms = {t};
    const Model m = toy_model();
    return Model(m.P(1), m.P(2), p);
}

// Lift slot differentiated by column j of G_at.
constexpr std::array<int, 8> kColumnSlot{G1, G2, H1, H2, HT1, HT2, GT1, GT2};

// 2 Re(conj(G) df) sampled on the grid, assembled from the 8x8 matrix alone.
Eigen::VectorXd contraction(const DiscretizedProblem& dp, const FloatDisc& f, const FloatDisc& df) {
    const int M = dp.grid_size();
    Eigen::VectorXd out(8 * M);
    for (int j = 0; j < M; ++j) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / M);
        const Eigen::MatrixXcd G = G_at(dp.model(), f, z);
        for (int i = 0; i < 8; ++i) {
            cplx s = 0;
            for (int c = 0; c < 8; ++c) s += std::conj(G(i, c)) * df[kColumnSlot[static_cast<size_t>(c)]](z);
            out(8 * j + i) = 2.0 * s.real();
        }
    }
    return out;
}

std::pair<Model, ExactDisc> sweep_instance(std::mt19937& rng) {
    const Model m = random_model(rng);
    const auto [c1, c2] = random_multipliers(rng);
    return {m, initial_lift(m, c1, c2)};
}

}  // namespace

TEST_CASE("discretization parametrizes the vanishing orders") {
    const Model m = toy_model();
    const DiscretizedProblem dp(m, 24);
    CHECK(dp.n_modes() == 24);
    CHECK(dp.unknowns() == 16 * 24);
    CHECK(dp.grid_size() > 2 * dp.n_modes());
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    Eigen::VectorXd x(dp.unknowns());
    for (auto& v : x) v = g(rng);
    const FloatDisc f = dp.to_disc(x);
    const auto req = required_orders(m);
    for (int k = 0; k < 8; ++k) CHECK(vanishing_order_at_one(f[k]) >= req[static_cast<size_t>(k)]);
    CHECK((dp.from_disc(f) - x).cwiseAbs().maxCoeff() < 1e-8);

    const ExactDisc f0 = initial_lift(m, rat(1, 2), rat(1, 3));
    CHECK(dp.residual(dp.from_disc(f0)).cwiseAbs().maxCoeff() < 1e-13);
    FloatDisc bad = f0.to_float();
    bad[HT1] = bad[HT1] + FloatLaurent::monomial(cplx(1e-3), 1);
    CHECK_THROWS_AS(dp.from_disc(bad), Error);
}

TEST_CASE("linearization matches finite differences and the assembled contraction") {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    std::vector<std::pair<Model, ExactDisc>> cases{{toy_model(), initial_lift(toy_model(), rat(1, 2), rat(1, 3))}};
    while (cases.size() < 10) cases.push_back(sweep_instance(rng));
    for (const auto& [m, f0] : cases) {
        const DiscretizedProblem dp(m, 16);
        const Eigen::VectorXd x0 = dp.from_disc(f0);
        const Eigen::MatrixXd J = linearize(dp, f0.to_float());
        CHECK((J - dp.jacobian(x0)).norm() <= 1e-10 * J.norm());
        double worst_fd = 0, worst_g = 0;
        for (int dir = 0; dir < 50; ++dir) {
            Eigen::VectorXd v(dp.unknowns());
            for (auto& c : v) c = g(rng);
            v /= v.norm();
            const double h = 1e-5;
            const Eigen::VectorXd fd = (dp.residual(x0 + h * v) - dp.residual(x0 - h * v)) / (2 * h);
            const Eigen::VectorXd lin = J * v;
            worst_fd = std::max(worst_fd, (fd - lin).norm() / lin.norm());
            const Eigen::VectorXd asm_ = contraction(dp, f0.to_float(), dp.to_disc(v));
            worst_g = std::max(worst_g, (asm_ - lin).norm() / lin.norm());
        }
        CHECK(worst_fd < 1e-6);
        CHECK(worst_g < 1e-8);
    }
}

TEST_CASE("toy kernel dimension is 20 and refinement-stable") {
    const Model m = toy_model();
    const ExactDisc f0 = initial_lift(m, rat(1, 2), rat(1, 3));
    const DiscretizedProblem dp(m, 24);
    CHECK(numeric_kernel_dimension(dp, f0.to_float()) == 20);
    CHECK(stable_kernel_dimension(m, f0.to_float(), 24) == 20);

    // The weighted system has a clear spectral gap; the raw one is onto as well.
    const Eigen::MatrixXd J = dp.weights().asDiagonal() * linearize(dp, f0.to_float());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const auto& s = svd.singularValues();
    const Eigen::Index rank = s.size() - 20;
    CHECK(s(rank - 1) > 1e-5 * s(0));
    CHECK(s(rank) < 1e-10 * s(0));
    CHECK(rank == dp.unknowns() - 20);
}

TEST_CASE("tangent basis is orthonormal and spans the scaling direction") {
    const Model m = toy_model();
    const GaussRational c1 = rat(1, 2), c2 = rat(1, 3);
    const ExactDisc f0 = initial_lift(m, c1, c2);
    const DiscretizedProblem dp(m, 24);
    const auto basis = tangent_basis(dp, f0.to_float());
    REQUIRE(basis.size() == 20);
    Eigen::MatrixXd B(dp.unknowns(), 20);
    for (int k = 0; k < 20; ++k) B.col(k) = dp.from_disc(basis[static_cast<size_t>(k)]);
    CHECK((B.transpose() * B - Eigen::MatrixXd::Identity(20, 20)).norm() < 1e-8);

    // The lift is affine in (c1, c2), so an exact difference is the derivative.
    for (int which = 0; which < 2; ++which) {
        const ExactDisc f1 = which == 0 ? initial_lift(m, c1 + rat(1, 7), c2) : initial_lift(m, c1, c2 + rat(1, 7));
        const ExactDisc f2 = which == 0 ? initial_lift(m, c1 + rat(2, 7), c2) : initial_lift(m, c1, c2 + rat(2, 7));
        Eigen::VectorXd x0 = dp.from_disc(f0), x1 = dp.from_disc(f1), x2 = dp.from_disc(f2);
        CHECK((x2 - 2 * x1 + x0).norm() < 1e-12);
        Eigen::VectorXd dir = x1 - x0;
        dir /= dir.norm();
        const Eigen::MatrixXd J = dp.weights().asDiagonal() * linearize(dp, f0.to_float());
        CHECK((J * dir).norm() < 1e-9 * J.norm());
        CHECK((B * (B.transpose() * dir) - dir).norm() < 1e-8);
    }
}

TEST_CASE("numeric kernel agrees with the index formula on random models") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
        const auto [m, f0] = sweep_instance(rng);
        const IndexReport rep = analyze_indices(m, f0, false);
        const int n = 2 * (m.d(2) + m.k0());
        CAPTURE(m.d(1));
        CAPTURE(m.d(2));
        CAPTURE(m.k0());
        CHECK(stable_kernel_dimension(m, f0.to_float(), n) == rep.kernel_dim);
        CHECK(rep.kernel_dim == rep.formula_kernel_dim);
    }
}

TEST_CASE("zero amplitude returns the initial lift bit for bit") {
    const Model m = toy_model();
    const ExactDisc f0 = initial_lift(m, rat(1, 2), rat(1, 3));
    SolveOptions o;
    o.n_modes = 24;
    const SolveResult pure = solve(m, f0, o);
    CHECK(pure.disc == f0.to_float());
    CHECK(pure.newton_steps == 0);
    CHECK(pure.trace.empty());
    CHECK(pure.kernel_dim == 20);
    const SolveResult zero = solve(perturbed_toy(0, 1), f0, o);
    CHECK(zero.disc == f0.to_float());
    CHECK(zero.newton_steps == 0);
}

TEST_CASE("small perturbation of the toy converges to a certified lift") {
    const Model m = perturbed_toy(1, 1000);
    const ExactDisc f0 = initial_lift(toy_model(), rat(1, 2), rat(1, 3));
    SolveOptions o;
    o.n_modes = 24;
    const SolveResult r = solve(m, f0, o);
    CHECK(r.epsilon == doctest::Approx(1e-3));
    CHECK(r.residual < 1e-12);
    CHECK(r.refined_residual < 1e-10);
    CHECK(r.kernel_dim == 20);
    CHECK(r.distance > 0);
    CHECK(r.distance < 1.0);
    CHECK(r.newton_steps > 0);
    const auto cert = certify<cplx>(m, r.disc, 1e-9);
    CHECK(cert.valid());
    // The unperturbed equations no longer hold at the new lift.
    CHECK_FALSE(certify<cplx>(toy_model(), r.disc, 1e-9).valid());
    // Same inputs, same bits.
    const SolveResult again = solve(m, f0, o);
    CHECK(again.disc == r.disc);

    std::ostringstream csv;
    write_trace_csv(csv, r);
    const std::string text = csv.str();
    CHECK(text.rfind("step,epsilon,iterations,residual,accepted\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(r.trace.size()) + 1);
}

TEST_CASE("solver failures are classified") {
    const ExactDisc f0 = initial_lift(toy_model(), rat(1, 2), rat(1, 3));
    SolveOptions o;
    o.n_modes = 16;
    o.max_iter = 6;
    o.min_step = 1e-2;
    o.kernel = false;
    try {
        (void)solve(perturbed_toy(1000, 1), f0, o);
        FAIL("expected a failure");
    } catch (const Error& e) {
        CHECK((e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::StepCollapse));
        CHECK(exit_code(e.kind()) == 4);
    }
    SolveOptions bad;
    bad.tol = -1;
    CHECK_THROWS_AS((void)solve(perturbed_toy(1, 1000), f0, bad), Error);
}
