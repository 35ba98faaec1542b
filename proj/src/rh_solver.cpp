#include "statdisc/rh_solver.hpp"

#include <cmath>
#include <numbers>

#include "statdisc/indices.hpp"
#include "statdisc/jet.hpp"

namespace statdisc {

namespace {

using J16 = Jet<cplx, 16>;

int default_modes(const Model& m) { return 8 * (m.d(2) + m.k0()); }

// Points needed so that the sampled linearization determines 2 Re(conj(G) f).
int default_extra(const Model& m) { return 2 * (m.d(2) - 1 + 2 * (m.d(2) + m.k0())) + 8; }

std::vector<cplx> circle_grid(int points, double offset = 0.0) {
    std::vector<cplx> g(static_cast<size_t>(points));
    for (int j = 0; j < points; ++j)
        g[static_cast<size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * (j + offset) / points);
    return g;
}

FloatLaurent one_minus_zeta_pow(int m) { return FloatLaurent::one_minus_zeta().pow(static_cast<unsigned>(m)); }

double sup_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

DiscretizedProblem::DiscretizedProblem(const Model& m, int n_modes, int extra_points)
    : DiscretizedProblem(m, n_modes > 0 ? n_modes : default_modes(m), extra_points > 0 ? extra_points : default_extra(m),
                         true) {
    if (n_modes < 0 || extra_points < 0) throw Error(ErrorKind::Validation, "solver.n_modes must be positive");
}

DiscretizedProblem::DiscretizedProblem(const Model& m, int n_modes, int extra, bool)
    : model_(m), n_modes_(n_modes), extra_(extra), orders_(required_orders(m)), grid_(circle_grid(2 * n_modes + extra, 0.5)) {
    const std::array<int, 8> row_orders{1, 1, m.d(1) - 1, m.d(1) - 1, m.d(2) - 1, m.d(2) - 1, 0, 0};
    weights_.resize(residuals());
    for (size_t j = 0; j < grid_.size(); ++j)
        for (size_t i = 0; i < 8; ++i)
            weights_(static_cast<Eigen::Index>(8 * j + i)) = std::pow(std::abs(1.0 - grid_[j]), -row_orders[i]);
    for (size_t k = 0; k < 8; ++k) {
        auto& B = basis_[k];
        B.resize(static_cast<Eigen::Index>(grid_.size()), n_modes_);
        for (size_t j = 0; j < grid_.size(); ++j) {
            const cplx z = grid_[j];
            cplx v = std::pow(1.0 - z, orders_[k]);
            for (int n = 0; n < n_modes_; ++n) {
                B(static_cast<Eigen::Index>(j), n) = v;
                v *= z;
            }
        }
    }
}

DiscretizedProblem DiscretizedProblem::with_model(const Model& m) const {
    DiscretizedProblem dp = *this;
    dp.model_ = m;
    if (required_orders(m) != orders_) throw Error(ErrorKind::Internal, "models differ in their vanishing orders");
    return dp;
}

void DiscretizedProblem::evaluate(const Eigen::VectorXd& x, std::array<Eigen::VectorXcd, 8>& values) const {
    if (x.size() != unknowns()) throw Error(ErrorKind::Internal, "unknown vector has the wrong size");
    for (int k = 0; k < 8; ++k) {
        Eigen::VectorXcd a(n_modes_);
        for (int n = 0; n < n_modes_; ++n) a(n) = cplx(x(2 * (k * n_modes_ + n)), x(2 * (k * n_modes_ + n) + 1));
        values[static_cast<size_t>(k)] = basis_[static_cast<size_t>(k)] * a;
    }
}

Eigen::VectorXd DiscretizedProblem::residual(const Eigen::VectorXd& x) const {
    std::array<Eigen::VectorXcd, 8> v;
    evaluate(x, v);
    const auto eqs = conormal_equations(model_);
    const auto& E = eqs.floating();
    Eigen::VectorXd r(residuals());
    for (size_t j = 0; j < grid_.size(); ++j) {
        std::array<cplx, 8> p, pb;
        for (size_t k = 0; k < 8; ++k) {
            p[k] = v[k](static_cast<Eigen::Index>(j));
            pb[k] = std::conj(p[k]);
        }
        const cplx zk = std::pow(grid_[j], model_.k0());
        const auto e = E.evaluate<cplx>(p, pb, zk, std::conj(zk));
        for (size_t i = 0; i < 8; ++i) r(static_cast<Eigen::Index>(8 * j + i)) = e[i].real();
    }
    return r;
}

Eigen::MatrixXd DiscretizedProblem::jacobian(const Eigen::VectorXd& x) const {
    std::array<Eigen::VectorXcd, 8> v;
    evaluate(x, v);
    return jacobian_from_values(v);
}

Eigen::MatrixXd DiscretizedProblem::jacobian_at(const FloatDisc& input) const {
    const FloatDisc f = canonical_layout(input);
    std::array<Eigen::VectorXcd, 8> v;
    for (size_t k = 0; k < 8; ++k) {
        v[k].resize(grid_size());
        for (size_t j = 0; j < grid_.size(); ++j) v[k](static_cast<Eigen::Index>(j)) = f.components[k](grid_[j]);
    }
    return jacobian_from_values(v);
}

Eigen::MatrixXd DiscretizedProblem::jacobian_from_values(const std::array<Eigen::VectorXcd, 8>& v) const {
    const auto eqs = conormal_equations(model_);
    const auto& E = eqs.floating();
    Eigen::MatrixXd Jm = Eigen::MatrixXd::Zero(residuals(), unknowns());
    const cplx I(0.0, 1.0);
    for (size_t j = 0; j < grid_.size(); ++j) {
        std::array<J16, 8> p, pb;
        for (size_t k = 0; k < 8; ++k) {
            const cplx val = v[k](static_cast<Eigen::Index>(j));
            p[k] = J16::variable(val, static_cast<int>(k));
            pb[k] = J16::variable(std::conj(val), static_cast<int>(8 + k));
        }
        const cplx zk = std::pow(grid_[j], model_.k0());
        const auto e = E.evaluate<J16>(p, pb, J16(zk), J16(std::conj(zk)));
        for (size_t i = 0; i < 8; ++i) {
            const auto row = static_cast<Eigen::Index>(8 * j + i);
            for (size_t k = 0; k < 8; ++k) {
                const cplx g = e[i].grad[k], gb = e[i].grad[8 + k];
                if (g == cplx(0.0) && gb == cplx(0.0)) continue;
                for (int n = 0; n < n_modes_; ++n) {
                    const cplx phi = basis_[k](static_cast<Eigen::Index>(j), n);
                    const cplx a = g * phi, b = gb * std::conj(phi);
                    const auto col = static_cast<Eigen::Index>(2 * (static_cast<int>(k) * n_modes_ + n));
                    Jm(row, col) = (a + b).real();
                    Jm(row, col + 1) = (I * a - I * b).real();
                }
            }
        }
    }
    return Jm;
}

FloatDisc DiscretizedProblem::to_disc(const Eigen::VectorXd& x) const {
    if (x.size() != unknowns()) throw Error(ErrorKind::Internal, "unknown vector has the wrong size");
    FloatDisc f;
    for (int k = 0; k < 8; ++k) {
        FloatLaurent q;
        for (int n = 0; n < n_modes_; ++n) q.add_term(n, cplx(x(2 * (k * n_modes_ + n)), x(2 * (k * n_modes_ + n) + 1)));
        f[k] = q * one_minus_zeta_pow(orders_[static_cast<size_t>(k)]);
    }
    return f;
}

Eigen::VectorXd DiscretizedProblem::from_disc(const FloatDisc& input) const {
    const FloatDisc f = canonical_layout(input);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(unknowns());
    for (int k = 0; k < 8; ++k) {
        if (f[k].is_zero()) continue;
        FloatLaurent q;
        try {
            q = divide_by(f[k], one_minus_zeta_pow(orders_[static_cast<size_t>(k)]), 1e-9);
        } catch (const Error&) {
            throw Error(ErrorKind::Validation, "lift component " + std::to_string(k) + " lacks the required vanishing order");
        }
        if (!q.is_holomorphic() || q.max_exp() >= n_modes_)
            throw Error(ErrorKind::Validation, "lift component " + std::to_string(k) + " does not fit in n_modes");
        for (const auto& [n, c] : q.terms()) {
            x(2 * (k * n_modes_ + n)) = c.real();
            x(2 * (k * n_modes_ + n) + 1) = c.imag();
        }
    }
    return x;
}

Eigen::VectorXd DiscretizedProblem::from_disc(const ExactDisc& input) const {
    const ExactDisc f = canonical_layout(input);
    FloatDisc quot;
    for (int k = 0; k < 8; ++k) {
        if (f[k].is_zero()) continue;
        ExactLaurent q;
        try {
            q = divide_by(f[k], ExactLaurent::one_minus_zeta().pow(static_cast<unsigned>(orders_[static_cast<size_t>(k)])));
        } catch (const Error&) {
            throw Error(ErrorKind::Validation, "lift component " + std::to_string(k) + " lacks the required vanishing order");
        }
        quot[k] = q.to_float();
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(unknowns());
    for (int k = 0; k < 8; ++k) {
        if (quot[k].is_zero()) continue;
        if (!quot[k].is_holomorphic() || quot[k].max_exp() >= n_modes_)
            throw Error(ErrorKind::Validation, "lift component " + std::to_string(k) + " does not fit in n_modes");
        for (const auto& [n, c] : quot[k].terms()) {
            x(2 * (k * n_modes_ + n)) = c.real();
            x(2 * (k * n_modes_ + n) + 1) = c.imag();
        }
    }
    return x;
}

Eigen::MatrixXd linearize(const DiscretizedProblem& dp, const FloatDisc& f) { return dp.jacobian_at(f); }

int numeric_kernel_dimension(const Eigen::MatrixXd& Jm, double rel_tol) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Jm);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > rel_tol * s(0)) ++rank;
    return static_cast<int>(Jm.cols()) - rank;
}

int numeric_kernel_dimension(const DiscretizedProblem& dp, const FloatDisc& f, double rel_tol) {
    return numeric_kernel_dimension(dp.weights().asDiagonal() * linearize(dp, f), rel_tol);
}

std::vector<FloatDisc> tangent_basis(const DiscretizedProblem& dp, const FloatDisc& f, double rel_tol) {
    const Eigen::MatrixXd Jm = dp.weights().asDiagonal() * linearize(dp, f);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Jm, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > rel_tol * s(0)) ++rank;
    std::vector<FloatDisc> out;
    for (Eigen::Index c = rank; c < Jm.cols(); ++c) out.push_back(dp.to_disc(svd.matrixV().col(c)));
    return out;
}

int stable_kernel_dimension(const Model& m, const FloatDisc& f, int n_modes) {
    const int n = n_modes > 0 ? n_modes : default_modes(m);
    const int coarse = numeric_kernel_dimension(DiscretizedProblem(m, n), f);
    const int fine = numeric_kernel_dimension(DiscretizedProblem(m, 2 * n), f);
    if (coarse != fine)
        throw Error(ErrorKind::RankUnstable, "kernel dimension " + std::to_string(coarse) + " at n_modes " +
                                                 std::to_string(n) + " but " + std::to_string(fine) + " at " +
                                                 std::to_string(2 * n));
    return fine;
}

double residual_sup(const Model& m, const FloatDisc& input, int points) {
    const FloatDisc f = canonical_layout(input);
    const auto eqs = conormal_equations(m);
    double sup = 0.0;
    for (const cplx z : circle_grid(points)) {
        std::array<cplx, 8> p, pb;
        for (size_t k = 0; k < 8; ++k) {
            p[k] = f.components[k](z);
            pb[k] = std::conj(p[k]);
        }
        const cplx zk = std::pow(z, m.k0());
        for (const cplx e : eqs.floating().evaluate<cplx>(p, pb, zk, std::conj(zk))) sup = std::max(sup, std::abs(e));
    }
    return sup;
}

double weighted_distance(const FloatDisc& a_in, const FloatDisc& b_in) {
    const FloatDisc a = canonical_layout(a_in), b = canonical_layout(b_in);
    double d = 0.0;
    for (size_t k = 0; k < 8; ++k) {
        const FloatLaurent diff = a.components[k] - b.components[k];
        for (const auto& [n, c] : diff.terms()) d = std::max(d, (1.0 + std::abs(n)) * std::abs(c));
    }
    return d;
}

namespace {

struct NewtonOutcome {
    bool converged = false;
    int iterations = 0;
    double residual = 0;
};

NewtonOutcome gauss_newton(const DiscretizedProblem& dp, Eigen::VectorXd& x, const SolveOptions& opts) {
    NewtonOutcome out;
    Eigen::VectorXd r = dp.residual(x);
    out.residual = sup_abs(r);
    const double start = out.residual;
    for (int it = 0; it < opts.max_iter; ++it) {
        if (out.residual < opts.tol) {
            out.converged = true;
            return out;
        }
        const auto& w = dp.weights();
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(w.asDiagonal() * dp.jacobian(x));
        cod.setThreshold(1e-10);
        const Eigen::VectorXd step = cod.solve(w.cwiseProduct(r));
        Eigen::VectorXd trial = x - step;
        const Eigen::VectorXd rt = dp.residual(trial);
        const double nr = sup_abs(rt);
        ++out.iterations;
        if (!std::isfinite(nr) || nr > 10.0 * std::max(start, opts.tol)) {
            out.residual = nr;
            return out;
        }
        x = std::move(trial);
        r = rt;
        out.residual = nr;
    }
    out.converged = out.residual < opts.tol;
    return out;
}

}  // namespace

SolveResult solve(const Model& m, const ExactDisc& f0, const SolveOptions& opts) {
    if (opts.tol <= 0 || opts.max_iter <= 0 || opts.min_step <= 0)
        throw Error(ErrorKind::Validation, "solver options must be positive");
    const Model base = m.pure();
    const IndexReport rep = analyze_indices(base, f0, false);
    if (!rep.surjectivity.surjective)
        throw Error(ErrorKind::SurjectivityFailed, "the linearization at the initial lift is not onto");

    SolveResult res;
    const DiscretizedProblem dp0(base, opts.n_modes);
    res.n_modes = dp0.n_modes();
    const mpq_class& amplitude = m.perturbation().amplitude.re();
    const double target = amplitude.get_num().get_d() / amplitude.get_den().get_d();
    const FloatDisc start = f0.to_float();

    if (m.is_pure() || target == 0.0) {
        res.disc = start;
        res.residual = residual_sup(base, start, dp0.grid_size());
        res.refined_residual = residual_sup(base, start, 4 * dp0.grid_size());
        if (opts.kernel) res.kernel_dim = numeric_kernel_dimension(dp0, start);
        return res;
    }

    Eigen::VectorXd x = dp0.from_disc(f0);
    double eps = 0.0, step = target;
    DiscretizedProblem current = dp0;
    while (eps < target) {
        step = std::min(step, target - eps);
        const double trial_eps = (target - eps - step <= 1e-15 * target) ? target : eps + step;
        const Model mt = trial_eps == target ? m : m.with_amplitude(GaussRational(mpq_class(trial_eps)));
        const DiscretizedProblem dp = dp0.with_model(mt);
        Eigen::VectorXd xt = x;
        const NewtonOutcome nw = gauss_newton(dp, xt, opts);
        res.trace.push_back({trial_eps, nw.iterations, nw.residual, nw.converged});
        res.newton_steps += nw.iterations;
        if (nw.converged) {
            x = std::move(xt);
            eps = trial_eps;
            current = dp;
            step *= 2.0;
        } else {
            step /= 2.0;
            if (step < opts.min_step) {
                if (eps == 0.0)
                    throw Error(ErrorKind::NoConvergence, "Gauss-Newton did not converge for any epsilon > 0 (last good epsilon 0)");
                throw Error(ErrorKind::StepCollapse,
                            "continuation step fell below " + std::to_string(opts.min_step) + " (last good epsilon " + std::to_string(eps) + ")");
            }
        }
    }
    res.epsilon = eps;
    res.disc = current.to_disc(x);
    res.residual = sup_abs(current.residual(x));
    res.refined_residual = residual_sup(current.model(), res.disc, 4 * current.grid_size());
    res.distance = weighted_distance(res.disc, start);
    if (opts.kernel) res.kernel_dim = numeric_kernel_dimension(current.weights().asDiagonal() * current.jacobian(x));
    return res;
}

void write_trace_csv(std::ostream& os, const SolveResult& r) {
    os << "step,epsilon,iterations,residual,accepted\n";
    for (size_t k = 0; k < r.trace.size(); ++k) {
        const auto& s = r.trace[k];
        os << k << ',' << s.epsilon << ',' << s.iterations << ',' << s.residual << ',' << (s.accepted ? 1 : 0) << '\n';
    }
}

}  // namespace statdisc
