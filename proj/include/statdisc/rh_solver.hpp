#pragma once

// Collocation solver for the nonlinear boundary problem r~(f) = 0 near a
// stationary lift, with epsilon continuation and Gauss-Newton correction.

#include <array>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "statdisc/lift.hpp"

namespace statdisc {

/// Component k is (1 - zeta)^{m_k} * sum_{n < n_modes} a_{k,n} zeta^n, so the
/// vanishing orders at 1 hold by construction. Unknowns are (Re a, Im a)
/// interleaved, component-major. The grid is offset by half a cell so that it
/// avoids zeta = 1.
///
/// Equation rows vanish at 1 to orders (1, 1, d1-1, d1-1, d2-1, d2-1, 0, 0) on
/// the parametrized space; weights() divides them out, which keeps the
/// smallest nonzero singular values bounded away from 0 as n_modes grows.
class DiscretizedProblem {
public:
    /// n_modes = 0 picks 8 (d2 + k0). grid = 2 n_modes + extra, extra = 0
    /// picks enough points to resolve the linearization exactly.
    DiscretizedProblem(const Model& m, int n_modes = 0, int extra_points = 0);

    const Model& model() const { return model_; }
    int n_modes() const { return n_modes_; }
    int grid_size() const { return static_cast<int>(grid_.size()); }
    int unknowns() const { return 16 * n_modes_; }
    int residuals() const { return 8 * grid_size(); }
    const std::array<int, 8>& orders() const { return orders_; }

    /// Same discretization for another model (e.g. a different amplitude).
    DiscretizedProblem with_model(const Model& m) const;

    Eigen::VectorXd residual(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
    /// Jacobian at any disc sharing the vanishing orders (only its grid values are used).
    Eigen::MatrixXd jacobian_at(const FloatDisc& f) const;
    /// Row weights |1 - zeta|^{-order} for the residual vector.
    const Eigen::VectorXd& weights() const { return weights_; }

    FloatDisc to_disc(const Eigen::VectorXd& x) const;
    /// Throws Validation when f does not fit the parametrization.
    Eigen::VectorXd from_disc(const FloatDisc& f) const;
    Eigen::VectorXd from_disc(const ExactDisc& f) const;

private:
    DiscretizedProblem(const Model& m, int n_modes, int extra, bool);
    void evaluate(const Eigen::VectorXd& x, std::array<Eigen::VectorXcd, 8>& values) const;
    Eigen::MatrixXd jacobian_from_values(const std::array<Eigen::VectorXcd, 8>& values) const;

    Model model_;
    int n_modes_ = 0;
    int extra_ = 0;
    std::array<int, 8> orders_{};
    std::vector<cplx> grid_;
    std::array<Eigen::MatrixXcd, 8> basis_;  // grid x n_modes values of the basis functions
    Eigen::VectorXd weights_;
};

/// Jacobian of the sampled residual; the linearization 2 Re(conj(G) f) at a stationary lift.
Eigen::MatrixXd linearize(const DiscretizedProblem& dp, const FloatDisc& f);

/// Singular values below rel_tol * sigma_max.
int numeric_kernel_dimension(const Eigen::MatrixXd& J, double rel_tol = 1e-9);

/// Kernel dimension of the weighted linearization at f.
int numeric_kernel_dimension(const DiscretizedProblem& dp, const FloatDisc& f, double rel_tol = 1e-9);

/// Orthonormal (in the unknown coordinates) basis of the numeric kernel.
std::vector<FloatDisc> tangent_basis(const DiscretizedProblem& dp, const FloatDisc& f, double rel_tol = 1e-9);

/// Kernel dimension at n_modes and 2 n_modes; throws RankUnstable on disagreement.
int stable_kernel_dimension(const Model& m, const FloatDisc& f, int n_modes = 0);

struct SolveOptions {
    int n_modes = 0;
    double tol = 1e-12;      // sup-norm of the sampled residual
    int max_iter = 12;       // Gauss-Newton iterations per continuation step
    double min_step = 1e-12; // continuation step floor
    bool kernel = true;      // compute the kernel dimension at the solution
};

struct ContinuationStep {
    double epsilon = 0;
    int iterations = 0;
    double residual = 0;
    bool accepted = false;
};

struct SolveResult {
    FloatDisc disc;
    double epsilon = 0;
    double residual = 0;          // sup over the solve grid
    double refined_residual = 0;  // sup over a grid four times finer
    double distance = 0;          // sup_n (1 + n) |coefficient difference| to f0
    int kernel_dim = -1;
    int n_modes = 0;
    int newton_steps = 0;
    std::vector<ContinuationStep> trace;
};

/// Continues from the pure model (amplitude 0) to m's amplitude, starting at f0.
SolveResult solve(const Model& m, const ExactDisc& f0, const SolveOptions& opts = {});

/// Sup over `points` equispaced circle points of the eight equations.
double residual_sup(const Model& m, const FloatDisc& f, int points);

/// sup_n (1 + n) |a_n - b_n| over all components.
double weighted_distance(const FloatDisc& a, const FloatDisc& b);

void write_trace_csv(std::ostream& os, const SolveResult& r);

}  // namespace statdisc
