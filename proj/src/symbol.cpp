#include "statdisc/symbol.hpp"

#include "statdisc/jet.hpp"

namespace statdisc {

SymbolMatrix SymbolMatrix::identity(int n) {
    SymbolMatrix r(n, n);
    for (int i = 0; i < n; ++i) r(i, i) = ExactLaurent(1L);
    return r;
}

SymbolMatrix SymbolMatrix::diagonal(const std::vector<ExactLaurent>& d) {
    const int n = static_cast<int>(d.size());
    SymbolMatrix r(n, n);
    for (int i = 0; i < n; ++i) r(i, i) = d[static_cast<size_t>(i)];
    return r;
}

SymbolMatrix SymbolMatrix::from_rows(const std::vector<std::vector<ExactLaurent>>& rows) {
    const int n = static_cast<int>(rows.size());
    const int m = n ? static_cast<int>(rows[0].size()) : 0;
    SymbolMatrix r(n, m);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != m)
            throw Error(ErrorKind::Validation, "SymbolMatrix: ragged rows");
        for (int j = 0; j < m; ++j) r(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    return r;
}

SymbolMatrix operator*(const SymbolMatrix& a, const SymbolMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::Internal, "SymbolMatrix: shape mismatch in product");
    SymbolMatrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int k = 0; k < a.cols_; ++k) {
            if (a(i, k).is_zero()) continue;
            for (int j = 0; j < b.cols_; ++j)
                if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

SymbolMatrix operator+(const SymbolMatrix& a, const SymbolMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::Internal, "SymbolMatrix: shape mismatch");
    SymbolMatrix r = a;
    for (size_t k = 0; k < r.a_.size(); ++k) r.a_[k] += b.a_[k];
    return r;
}

SymbolMatrix operator-(const SymbolMatrix& a, const SymbolMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::Internal, "SymbolMatrix: shape mismatch");
    SymbolMatrix r = a;
    for (size_t k = 0; k < r.a_.size(); ++k) r.a_[k] -= b.a_[k];
    return r;
}

SymbolMatrix operator*(const SymbolMatrix& a, const ExactLaurent& s) {
    SymbolMatrix r = a;
    for (auto& e : r.a_) e = e * s;
    return r;
}

SymbolMatrix SymbolMatrix::conj() const {
    SymbolMatrix r = *this;
    for (auto& e : r.a_) e = circle_conj(e);
    return r;
}

SymbolMatrix SymbolMatrix::transpose() const {
    SymbolMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

SymbolMatrix SymbolMatrix::block(int r0, int c0, int nr, int nc) const {
    SymbolMatrix r(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
}

SymbolMatrix SymbolMatrix::with_columns(const std::vector<int>& order) const {
    SymbolMatrix r(rows_, static_cast<int>(order.size()));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < r.cols_; ++j) r(i, j) = (*this)(i, order[static_cast<size_t>(j)]);
    return r;
}

SymbolMatrix SymbolMatrix::shifted(int k) const {
    SymbolMatrix r = *this;
    for (auto& e : r.a_) e = e.shifted(k);
    return r;
}

ExactLaurent SymbolMatrix::determinant() const {
    if (rows_ != cols_) throw Error(ErrorKind::Internal, "determinant of a non-square symbol");
    const int n = rows_;
    if (n == 0) return ExactLaurent(1L);
    std::vector<ExactLaurent> m = a_;
    auto at = [&](int i, int j) -> ExactLaurent& { return m[static_cast<size_t>(i * n + j)]; };
    bool negate = false;
    ExactLaurent prev(1L);
    for (int k = 0; k < n; ++k) {
        // Prefer the sparsest nonzero pivot to keep intermediate entries small.
        int best = -1;
        for (int r = k; r < n; ++r)
            if (!at(r, k).is_zero() && (best < 0 || at(r, k).terms().size() < at(best, k).terms().size())) best = r;
        if (best < 0) return ExactLaurent();
        if (best != k) {
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(best, j));
            negate = !negate;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) at(i, j) = divide_by(at(i, j) * at(k, k) - at(i, k) * at(k, j), prev);
            at(i, k) = ExactLaurent();
        }
        prev = at(k, k);
    }
    return negate ? -at(n - 1, n - 1) : at(n - 1, n - 1);
}

SymbolMatrix SymbolMatrix::adjugate() const {
    const int n = rows_;
    SymbolMatrix r(n, n);
    if (n == 1) {
        r(0, 0) = ExactLaurent(1L);
        return r;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            SymbolMatrix minor(n - 1, n - 1);
            for (int p = 0, mp = 0; p < n; ++p) {
                if (p == j) continue;
                for (int q = 0, mq = 0; q < n; ++q) {
                    if (q == i) continue;
                    minor(mp, mq++) = (*this)(p, q);
                }
                ++mp;
            }
            const ExactLaurent d = minor.determinant();
            r(i, j) = (i + j) % 2 ? -d : d;
        }
    return r;
}

bool SymbolMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const auto& e) { return e.is_zero(); });
}

bool SymbolMatrix::is_holomorphic() const {
    return std::all_of(a_.begin(), a_.end(), [](const auto& e) { return e.is_holomorphic(); });
}

bool SymbolMatrix::is_antiholomorphic() const {
    return std::all_of(a_.begin(), a_.end(), [](const auto& e) { return e.is_zero() || e.max_exp() <= 0; });
}

int SymbolMatrix::min_exp() const {
    int m = 0;
    bool first = true;
    for (const auto& e : a_)
        if (!e.is_zero()) {
            m = first ? e.min_exp() : std::min(m, e.min_exp());
            first = false;
        }
    return m;
}

int SymbolMatrix::max_exp() const {
    int m = 0;
    bool first = true;
    for (const auto& e : a_)
        if (!e.is_zero()) {
            m = first ? e.max_exp() : std::max(m, e.max_exp());
            first = false;
        }
    return m;
}

bool SymbolMatrix::is_block_upper_triangular(const std::vector<int>& sizes) const {
    std::vector<int> owner;
    for (size_t b = 0; b < sizes.size(); ++b) owner.insert(owner.end(), static_cast<size_t>(sizes[b]), static_cast<int>(b));
    if (static_cast<int>(owner.size()) != rows_ || rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (owner[static_cast<size_t>(i)] > owner[static_cast<size_t>(j)] && !(*this)(i, j).is_zero()) return false;
    return true;
}

Eigen::MatrixXcd SymbolMatrix::operator()(cplx zeta) const {
    Eigen::MatrixXcd r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j)(zeta);
    return r;
}

std::string SymbolMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << "[";
        for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
        os << "]\n";
    }
    return os.str();
}

namespace {

// Column j of G differentiates with respect to the conjugate of lift slot kColumnSlot[j].
constexpr std::array<int, 8> kColumnSlot{G1, G2, H1, H2, HT1, HT2, GT1, GT2};

ExactLaurent one_minus_zeta_bar_pow(int k) { return ExactLaurent::one_minus_zeta_bar().pow(static_cast<unsigned>(k)); }

}  // namespace

SymbolMatrix build_G(const Model& m, const ExactDisc& input) {
    using J = Jet<ExactLaurent, 16>;
    const ExactDisc f0 = canonical_layout(input);
    const auto eqs = conormal_equations(m);
    std::array<J, 8> x, xb;
    for (int k = 0; k < 8; ++k) {
        x[static_cast<size_t>(k)] = J::variable(f0[k], k);
        xb[static_cast<size_t>(k)] = J::variable(circle_conj(f0[k]), 8 + k);
    }
    const J zk(ExactLaurent::zeta(m.k0())), zkb(ExactLaurent::zeta(-m.k0()));
    const auto val = eqs.exact().evaluate<J>(x, xb, zk, zkb);
    SymbolMatrix G(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) G(i, j) = val[static_cast<size_t>(i)].grad[static_cast<size_t>(8 + kColumnSlot[static_cast<size_t>(j)])];
    return G;
}

Eigen::MatrixXcd G_at(const Model& m, const FloatDisc& input, cplx zeta) {
    using J = Jet<cplx, 16>;
    const FloatDisc f = canonical_layout(input);
    const auto eqs = conormal_equations(m);
    std::array<J, 8> x, xb;
    for (int k = 0; k < 8; ++k) {
        const cplx v = f[k](zeta);
        x[static_cast<size_t>(k)] = J::variable(v, k);
        xb[static_cast<size_t>(k)] = J::variable(std::conj(v), 8 + k);
    }
    const cplx zk = std::pow(zeta, m.k0());
    const auto val = eqs.floating().evaluate<J>(x, xb, J(zk), J(std::conj(zk)));
    Eigen::MatrixXcd G(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) G(i, j) = val[static_cast<size_t>(i)].grad[static_cast<size_t>(8 + kColumnSlot[static_cast<size_t>(j)])];
    return G;
}

namespace {

G2Factorization split_G2(const Model& m, const SymbolMatrix& G) {
    G2Factorization out;
    // Rows 3-6, columns (z1, z2, zt1, zt2), then reordered to (z1, zt1, z2, zt2).
    out.G2 = G.block(2, 2, 4, 4).with_columns({0, 2, 1, 3});
    out.D = SymbolMatrix::diagonal(
        {one_minus_zeta_bar_pow(m.d(1) - 2), ExactLaurent(1L), one_minus_zeta_bar_pow(m.d(2) - 2), ExactLaurent(1L)});
    out.G2_tilde = out.G2;
    for (int s = 0; s < 2; ++s) {
        const ExactLaurent f = one_minus_zeta_bar_pow(m.d(s + 1) - 2);
        for (int i = 0; i < 4; ++i) {
            try {
                out.G2_tilde(i, 2 * s) = divide_by(out.G2(i, 2 * s), f);
            } catch (const Error&) {
                throw Error(ErrorKind::Internal, "G2 column is not divisible by (1 - conj zeta)^(d-2)");
            }
        }
    }
    if (!(out.G2_tilde * out.D == out.G2)) throw Error(ErrorKind::Internal, "G2 != G2_tilde * D");

    const GaussRational i = GaussRational::i(), half(mpq_class(1, 2));
    for (int s = 0; s < 2; ++s) {
        const int ell = s + 1, d = m.d(ell), k = m.k(ell), k0 = m.k0();
        const ExactLaurent& a = out.G2_tilde(2 * s, 2 * s);
        const ExactLaurent& b = out.G2_tilde(2 * s + 1, 2 * s);
        QSBlock& blk = out.qs.blocks[static_cast<size_t>(s)];
        blk.Q = (a - b * i) * half;
        blk.S = circle_conj(((a + b * i) * half).shifted(2 - d));
        blk.q_degree_bound = k0 + k - 1;
        blk.q_divisor_power = k0 - k + d - 1;
        blk.s_degree_bound = k0 + k - 2;
        blk.s_divisor_power = k0 - k + d - 2;
        auto within = [](const ExactLaurent& p, int lo, int hi) {
            return p.is_zero() || (p.min_exp() >= lo && p.max_exp() <= hi);
        };
        if (!within(blk.Q, blk.q_divisor_power, blk.q_degree_bound))
            throw Error(ErrorKind::Internal, "Q" + std::to_string(ell) + " violates its degree/divisibility bounds: " +
                                                 blk.Q.str());
        if (!within(blk.S, std::max(blk.s_divisor_power, 0), blk.s_degree_bound))
            throw Error(ErrorKind::Internal, "S" + std::to_string(ell) + " violates its degree/divisibility bounds: " +
                                                 blk.S.str());
    }
    return out;
}

}  // namespace

QSData extract_QS(const Model& m, const ExactDisc& f0) { return split_G2(m, build_G(m, f0)).qs; }

G2Factorization factor_G2(const Model& m, const ExactDisc& f0) {
    G2Factorization out = split_G2(m, build_G(m, f0));
    for (int s = 0; s < 2; ++s) {
        const ExactLaurent& Q = out.qs.blocks[static_cast<size_t>(s)].Q;
        const std::string name = "Q" + std::to_string(s + 1);
        if (Q.is_zero())
            throw Error(ErrorKind::SingularSymbol, "Laplacian hypothesis violated: " + name + " vanishes identically");
        try {
            (void)winding_number(Q);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::VanishingSymbol) throw;
            throw Error(ErrorKind::SingularSymbol,
                        "Laplacian hypothesis violated: " + name + " vanishes on the unit circle");
        }
    }
    const ExactLaurent expect =
        out.qs.blocks[0].Q * out.qs.blocks[1].Q * ExactLaurent(GaussRational(-4));
    if (out.G2_tilde.determinant() != expect) throw Error(ErrorKind::Internal, "det G2_tilde != -4 Q1 Q2");
    return out;
}

SymbolMatrix desingularized_G(const Model& m, const ExactDisc& f0) {
    SymbolMatrix G = build_G(m, f0);
    for (int s = 0; s < 2; ++s) {
        const ExactLaurent f = one_minus_zeta_bar_pow(m.d(s + 1) - 2);
        for (int i = 0; i < 8; ++i) G(i, 2 + s) = divide_by(G(i, 2 + s), f);
    }
    return G;
}

}  // namespace statdisc
