#pragma once

// Partial indices, Maslov index and the kernel-dimension count for matrix
// symbols of the form -conj(A)^{-1} A on the unit circle.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "statdisc/symbol.hpp"

namespace statdisc {

/// num / den with a scalar denominator. det_factors, when present, lists
/// polynomials whose product (with multiplicities) is det(num) up to a unit
/// c zeta^k; it lets root finding work on the small factors.
struct RationalSymbol {
    SymbolMatrix num;
    ExactLaurent den{1L};
    std::vector<std::pair<ExactLaurent, int>> det_factors;

    int size() const { return num.rows(); }
};

/// -conj(A)^{-1} A, normalized so that a monomial denominator is absorbed.
RationalSymbol symbol_of(const SymbolMatrix& A);

/// A polynomial symbol with denominator 1.
RationalSymbol as_symbol(const SymbolMatrix& S);

enum class IndexMethod { Exact, Numeric };
const char* to_string(IndexMethod m);

struct PartialIndices {
    std::vector<int> values;  // sorted ascending
    IndexMethod method = IndexMethod::Exact;
};

/// Indices kappa_j of a factorization S = B+ diag(zeta^kappa_j) B-, with B+
/// holomorphic and invertible on the closed disc and B- on its exterior.
PartialIndices partial_indices(const RationalSymbol& S);

/// Indices of -conj(A)^{-1} A, splitting A into its diagonal blocks first.
/// The result keeps the block order; each block's indices are sorted.
std::vector<PartialIndices> block_partial_indices(const SymbolMatrix& A);

/// Winding number of det S.
int maslov_index(const RationalSymbol& S);

struct SurjectivityVerdict {
    bool surjective = false;
    std::array<int, 2> thresholds{};  // m_l - 1 per block
};

/// True iff every index of block l is at least m_l - 1.
SurjectivityVerdict surjectivity_verdict(const std::vector<int>& block1, const std::vector<int>& block2, int m1, int m2);

/// kappa + 8 - sum N_j m_j
int kernel_dimension(int maslov, const std::array<int, 4>& m, const std::array<int, 4>& N);

struct FactorizationCheck {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Checks S = B+ Lambda B- clause by clause.
FactorizationCheck explicit_factorization_check(const RationalSymbol& S, const SymbolMatrix& b_plus,
                                                const SymbolMatrix& lambda, const SymbolMatrix& b_minus);

struct IndexReport {
    std::array<std::vector<int>, 2> block_indices;  // middle-block symbol, per 2x2 block
    std::vector<int> partial_indices;                // union, sorted
    std::vector<int> full_indices;                   // full 8x8 symbol (empty when not requested)
    int maslov = 0;                                  // winding of det of the full symbol
    int g2_det_winding = 0;                          // winding of det of the middle-block symbol
    std::array<int, 2> q_indices{};                  // ind(-conj(Q_l)^{-1} Q_l)
    int formula_maslov = 0;                          // q_indices sum + 4 k0
    std::array<int, 2> theta_bounds{};               // k0 + k_l - 2
    bool theta_bounds_hold = false;
    SurjectivityVerdict surjectivity;
    int kernel_dim = 0;
    int formula_kernel_dim = 0;
    IndexMethod method = IndexMethod::Exact;
    QSData qs;
};

IndexReport analyze_indices(const Model& m, const ExactDisc& f0, bool full_indices = true);

}  // namespace statdisc
