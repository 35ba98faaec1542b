#pragma once

// Matrix symbols on the unit circle and the linearization of the conormal
// equations along a stationary lift.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "statdisc/lift.hpp"

namespace statdisc {

/// Square or rectangular matrix of exact Laurent polynomials, read on the circle.
class SymbolMatrix {
public:
    SymbolMatrix() = default;
    SymbolMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols)) {}

    static SymbolMatrix identity(int n);
    static SymbolMatrix diagonal(const std::vector<ExactLaurent>& d);
    /// Builds from rows of entries.
    static SymbolMatrix from_rows(const std::vector<std::vector<ExactLaurent>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    ExactLaurent& operator()(int i, int j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
    const ExactLaurent& operator()(int i, int j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

    friend SymbolMatrix operator*(const SymbolMatrix& a, const SymbolMatrix& b);
    friend SymbolMatrix operator+(const SymbolMatrix& a, const SymbolMatrix& b);
    friend SymbolMatrix operator-(const SymbolMatrix& a, const SymbolMatrix& b);
    friend SymbolMatrix operator*(const SymbolMatrix& a, const ExactLaurent& s);
    friend bool operator==(const SymbolMatrix& a, const SymbolMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    /// Entrywise circle conjugation (the pointwise conjugate on the circle).
    SymbolMatrix conj() const;
    SymbolMatrix transpose() const;
    SymbolMatrix block(int r0, int c0, int nr, int nc) const;
    SymbolMatrix with_columns(const std::vector<int>& order) const;
    SymbolMatrix shifted(int k) const;

    /// Fraction-free elimination; exact.
    ExactLaurent determinant() const;
    SymbolMatrix adjugate() const;

    bool is_zero() const;
    bool is_holomorphic() const;
    bool is_antiholomorphic() const;
    int min_exp() const;
    int max_exp() const;

    /// True when every entry outside the diagonal blocks of the given sizes
    /// and below them vanishes (block upper-triangular shape).
    bool is_block_upper_triangular(const std::vector<int>& sizes) const;

    Eigen::MatrixXcd operator()(cplx zeta) const;

    std::string str() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<ExactLaurent> a_;
};

/// The linearization G = d(rho~)/d(conjugate coordinates) along a lift, with
/// columns ordered (w1, w2, z1, z2, zt1, zt2, wt1, wt2); rows are the eight equations.
SymbolMatrix build_G(const Model& m, const ExactDisc& f0);

/// The same matrix in floating point for an arbitrary (possibly perturbed) model.
Eigen::MatrixXcd G_at(const Model& m, const FloatDisc& f, cplx zeta);

struct QSBlock {
    ExactLaurent Q, S;
    int q_degree_bound = 0, q_divisor_power = 0;
    int s_degree_bound = 0, s_divisor_power = 0;
};

struct QSData {
    std::array<QSBlock, 2> blocks;
};

/// Q_l and S_l with their degree and divisibility certificates checked.
QSData extract_QS(const Model& m, const ExactDisc& f0);

struct G2Factorization {
    SymbolMatrix G2;        // middle block with columns (z1, zt1, z2, zt2)
    SymbolMatrix G2_tilde;  // G2 = G2_tilde * D
    SymbolMatrix D;
    QSData qs;
};

/// Splits the vanishing factors (1 - conj zeta)^(d_l - 2) off the middle block.
G2Factorization factor_G2(const Model& m, const ExactDisc& f0);

/// The full 8x8 matrix with the same factors divided out of its z columns.
SymbolMatrix desingularized_G(const Model& m, const ExactDisc& f0);

}  // namespace statdisc
