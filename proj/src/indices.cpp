#include "statdisc/indices.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace statdisc {

namespace {

// ---------------------------------------------------------------------------
// Arithmetic modulo primes p = 1 (mod 4), where i maps to a square root of -1.

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct Field {
    u64 p = 0;
    u64 root_minus_one = 0;

    u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }
    u64 add(u64 a, u64 b) const {
        const u64 s = a + b;
        return s >= p ? s - p : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
    u64 pow(u64 b, u64 e) const {
        u64 r = 1;
        while (e) {
            if (e & 1U) r = mul(r, b);
            b = mul(b, b);
            e >>= 1U;
        }
        return r;
    }
    u64 inv(u64 a) const { return pow(a, p - 2); }

    u64 of(const mpq_class& q) const {
        const u64 num = mpz_fdiv_ui(q.get_num_mpz_t(), p);
        const u64 den = mpz_fdiv_ui(q.get_den_mpz_t(), p);
        if (den == 0) throw Error(ErrorKind::Internal, "denominator divisible by the modulus");
        return mul(num, inv(den));
    }
    u64 of(const GaussRational& c) const { return add(of(c.re()), mul(of(c.im()), root_minus_one)); }
};

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL})
        if (n % q == 0) return n == q;
    Field f{n, 0};
    u64 d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = f.pow(a, d);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = f.mul(x, x);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

const std::array<Field, 2>& moduli() {
    static const std::array<Field, 2> fields = [] {
        std::array<Field, 2> out;
        u64 n = (1ULL << 61U) - 1;
        for (auto& f : out) {
            while (n % 4 != 1 || !is_prime(n)) --n;
            f.p = n;
            for (u64 g = 2;; ++g) {
                const u64 x = f.pow(g, (n - 1) / 4);
                if (f.mul(x, x) == n - 1) {
                    f.root_minus_one = x;
                    break;
                }
            }
            --n;
        }
        return out;
    }();
    return fields;
}

// Ranks of the trailing row blocks t >= m (m = 0..a) of the block
// lower-triangular Toeplitz matrix of multiplication by M on (C[z]/z^a)^N.
std::vector<int> tail_ranks(const SymbolMatrix& M, int a, const Field& F) {
    const int n = M.rows();
    const int cols = n * a;
    std::vector<u64> coef(static_cast<size_t>(n * n * a), 0);
    auto C = [&](int i, int j, int t) -> u64& { return coef[static_cast<size_t>((i * n + j) * a + t)]; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto& [e, c] : M(i, j).terms())
                if (e < a) C(i, j, e) = F.of(c);

    std::vector<std::vector<u64>> basis;
    std::vector<int> pivots;
    std::vector<int> tail(static_cast<size_t>(a) + 1, 0);
    std::vector<u64> row(static_cast<size_t>(cols));
    for (int t = a - 1; t >= 0; --t) {
        for (int i = 0; i < n; ++i) {
            for (int u = 0; u < a; ++u)
                for (int j = 0; j < n; ++j) row[static_cast<size_t>(u * n + j)] = u <= t ? C(i, j, t - u) : 0;
            for (size_t b = 0; b < basis.size(); ++b) {
                const u64 x = row[static_cast<size_t>(pivots[b])];
                if (x == 0) continue;
                const auto& br = basis[b];
                for (int k = 0; k < cols; ++k)
                    if (br[static_cast<size_t>(k)]) row[static_cast<size_t>(k)] = F.sub(row[static_cast<size_t>(k)], F.mul(x, br[static_cast<size_t>(k)]));
            }
            int pc = -1;
            for (int k = 0; k < cols; ++k)
                if (row[static_cast<size_t>(k)]) {
                    pc = k;
                    break;
                }
            if (pc < 0) continue;
            const u64 s = F.inv(row[static_cast<size_t>(pc)]);
            for (auto& v : row) v = F.mul(v, s);
            basis.push_back(row);
            pivots.push_back(pc);
        }
        tail[static_cast<size_t>(t)] = static_cast<int>(basis.size());
    }
    return tail;
}

// dim of {p : deg p < m, M^{-1} p holomorphic on the disc} for m = 0..a+1,
// when the only root of det M inside the disc is 0 (of order a).
std::vector<int> kernel_counts_exact(const SymbolMatrix& M, int a) {
    const int n = M.rows();
    std::vector<int> tail(static_cast<size_t>(a) + 1, 0);
    for (const auto& F : moduli()) {
        const auto t = tail_ranks(M, a, F);
        for (size_t k = 0; k < tail.size(); ++k) tail[k] = std::max(tail[k], t[k]);
    }
    std::vector<int> K(static_cast<size_t>(a) + 2);
    for (int m = 0; m <= a + 1; ++m)
        K[static_cast<size_t>(m)] = m <= a ? tail[0] - tail[static_cast<size_t>(m)] : n * m + tail[0] - n * a;
    return K;
}

// ---------------------------------------------------------------------------
// Floating point variant for inner roots away from 0.

struct Cluster {
    cplx centre;
    int mult = 0;
};

std::vector<cplx> roots_of(const ExactLaurent& p) {
    const ExactLaurent q = p.shifted(-p.min_exp());
    const int n = q.max_exp();
    std::vector<cplx> out;
    if (n <= 0) return out;
    const cplx lead = q.coeff(n).to_complex();
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        comp(0, k) = -q.coeff(n - 1 - k).to_complex() / lead;
        if (k + 1 < n) comp(k + 1, k) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.push_back(es.eigenvalues()(k));
    return out;
}

std::vector<Cluster> cluster(const std::vector<std::pair<cplx, int>>& roots, double tol) {
    std::vector<Cluster> out;
    for (const auto& [r, mult] : roots) {
        bool merged = false;
        for (auto& c : out)
            if (std::abs(c.centre - r) < tol) {
                c.centre = (c.centre * static_cast<double>(c.mult) + r * static_cast<double>(mult)) /
                           static_cast<double>(c.mult + mult);
                c.mult += mult;
                merged = true;
                break;
            }
        if (!merged) out.push_back({r, mult});
    }
    return out;
}

// Ranks of the trailing rows of multiplication by M on (C[z]/h)^N, h the
// monic polynomial with the given roots, in the Newton basis
// w_b = prod_{c<b}(z - x_c). Multiplication by z is then bidiagonal.
std::vector<int> kernel_counts_numeric(const SymbolMatrix& M, const std::vector<cplx>& nodes) {
    const int n = M.rows();
    const int T = static_cast<int>(nodes.size());
    Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(T, T);
    for (int b = 0; b < T; ++b) {
        Z(b, b) = nodes[static_cast<size_t>(b)];
        if (b + 1 < T) Z(b + 1, b) = 1.0;
    }
    Eigen::MatrixXcd Mhat = Eigen::MatrixXcd::Zero(n * T, n * T);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const ExactLaurent& e = M(i, j);
            if (e.is_zero()) continue;
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(T, T);
            for (int k = e.max_exp(); k >= 0; --k) {
                acc = acc * Z;
                acc.diagonal().array() += e.coeff(k).to_complex();
            }
            Mhat.block(i * T, j * T, T, T) = acc;
        }
    const double scale = Mhat.norm();
    auto rank_from = [&](int m) {
        if (m >= T) return 0;
        Eigen::MatrixXcd rows(n * (T - m), n * T);
        for (int i = 0; i < n; ++i) rows.middleRows(i * (T - m), T - m) = Mhat.middleRows(i * T + m, T - m);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rows);
        const auto& sv = svd.singularValues();
        int r = 0;
        for (Eigen::Index k = 0; k < sv.size(); ++k)
            if (sv(k) > 1e-9 * scale) ++r;
        return r;
    };
    const int r0 = rank_from(0);
    std::vector<int> K(static_cast<size_t>(T) + 2);
    for (int m = 0; m <= T + 1; ++m)
        K[static_cast<size_t>(m)] = m <= T ? r0 - rank_from(m) : n * m + r0 - n * T;
    return K;
}

int wind_or_singular(const ExactLaurent& p, const char* what) {
    try {
        return winding_number(p);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::VanishingSymbol) throw;
        throw Error(ErrorKind::SingularSymbol, std::string(what) + " vanishes on the unit circle");
    }
}

}  // namespace

const char* to_string(IndexMethod m) { return m == IndexMethod::Exact ? "exact" : "numeric"; }

RationalSymbol symbol_of(const SymbolMatrix& A) {
    if (A.rows() != A.cols()) throw Error(ErrorKind::Internal, "symbol_of needs a square matrix");
    const SymbolMatrix Ab = A.conj();
    const ExactLaurent det_ab = Ab.determinant();
    if (det_ab.is_zero()) throw Error(ErrorKind::SingularSymbol, "matrix is singular");
    (void)wind_or_singular(det_ab, "determinant");
    RationalSymbol S;
    S.num = Ab.adjugate() * A * ExactLaurent(-1L);
    S.den = det_ab;
    const int n = A.rows();
    S.det_factors = {{circle_conj(det_ab), 1}};
    if (n > 1) S.det_factors.emplace_back(det_ab, n - 1);
    if (det_ab.is_monomial()) {
        const auto& [e, c] = *det_ab.terms().begin();
        S.num = S.num.shifted(-e) * ExactLaurent(GaussRational(1) / c);
        S.den = ExactLaurent(1L);
    }
    return S;
}

RationalSymbol as_symbol(const SymbolMatrix& S) {
    RationalSymbol r;
    r.num = S;
    return r;
}

int maslov_index(const RationalSymbol& S) {
    const ExactLaurent det = S.num.determinant();
    if (det.is_zero()) throw Error(ErrorKind::SingularSymbol, "symbol is singular");
    return wind_or_singular(det, "symbol determinant") - S.size() * wind_or_singular(S.den, "symbol denominator");
}

PartialIndices partial_indices(const RationalSymbol& S) {
    const int n = S.size();
    const SymbolMatrix T = S.num.transpose();
    const int shift = -T.min_exp();
    const SymbolMatrix M = T.shifted(shift);
    const ExactLaurent det = M.determinant();
    if (det.is_zero()) throw Error(ErrorKind::SingularSymbol, "symbol is singular");
    const int den_wind = wind_or_singular(S.den, "symbol denominator");
    const int a = det.min_exp();
    const ExactLaurent q = det.shifted(-a);
    const int inner = wind_or_singular(q, "symbol determinant");
    const int total = a + inner;

    PartialIndices out;
    std::vector<int> K;
    if (inner == 0) {
        out.method = IndexMethod::Exact;
        K = kernel_counts_exact(M, a);
    } else {
        out.method = IndexMethod::Numeric;
        std::vector<std::pair<cplx, int>> roots;
        int found = 0;
        for (const auto& [f, mult] : S.det_factors)
            for (const cplx r : roots_of(f))
                if (std::abs(r) < 1.0) {
                    roots.emplace_back(r, mult);
                    found += mult;
                }
        if (found != inner) {
            roots.clear();
            for (const cplx r : roots_of(q))
                if (std::abs(r) < 1.0) roots.emplace_back(r, 1);
        }
        std::vector<std::pair<cplx, int>> all;
        if (a > 0) all.emplace_back(cplx(0.0), a);
        all.insert(all.end(), roots.begin(), roots.end());
        std::vector<cplx> nodes;
        for (const auto& c : cluster(all, 1e-6))
            for (int k = 0; k < c.mult; ++k) nodes.push_back(c.centre);
        if (static_cast<int>(nodes.size()) != total)
            throw Error(ErrorKind::NonConvergent, "inner roots of the determinant not resolved");
        K = kernel_counts_numeric(M, nodes);
    }

    // #{kappa' <= m} = K_{m+1} - K_m
    int prev = 0;
    for (int m = 0; m + 1 < static_cast<int>(K.size()) && static_cast<int>(out.values.size()) < n; ++m) {
        const int le = K[static_cast<size_t>(m) + 1] - K[static_cast<size_t>(m)];
        for (int c = prev; c < le && static_cast<int>(out.values.size()) < n; ++c) out.values.push_back(m);
        prev = std::max(prev, le);
    }
    int sum = 0;
    for (int v : out.values) sum += v;
    if (static_cast<int>(out.values.size()) != n || sum != total)
        throw Error(ErrorKind::NonConvergent, "partial index ranks are inconsistent (" + std::to_string(sum) + " vs " +
                                                  std::to_string(total) + ")");
    for (int& v : out.values) v -= shift + den_wind;
    std::sort(out.values.begin(), out.values.end());
    return out;
}

std::vector<PartialIndices> block_partial_indices(const SymbolMatrix& A) {
    const int n = A.rows();
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!A(i, j).is_zero()) parent[static_cast<size_t>(find(i))] = find(j);
    std::vector<std::vector<int>> groups;
    std::vector<int> label(static_cast<size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (label[static_cast<size_t>(r)] < 0) {
            label[static_cast<size_t>(r)] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<size_t>(label[static_cast<size_t>(r)])].push_back(i);
    }
    std::vector<PartialIndices> out;
    for (const auto& g : groups) {
        const int k = static_cast<int>(g.size());
        SymbolMatrix sub(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) sub(i, j) = A(g[static_cast<size_t>(i)], g[static_cast<size_t>(j)]);
        out.push_back(partial_indices(symbol_of(sub)));
    }
    return out;
}

SurjectivityVerdict surjectivity_verdict(const std::vector<int>& block1, const std::vector<int>& block2, int m1, int m2) {
    SurjectivityVerdict v;
    v.thresholds = {m1 - 1, m2 - 1};
    auto all_at_least = [](const std::vector<int>& b, int t) {
        return std::all_of(b.begin(), b.end(), [t](int k) { return k >= t; });
    };
    v.surjective = all_at_least(block1, v.thresholds[0]) && all_at_least(block2, v.thresholds[1]);
    return v;
}

int kernel_dimension(int maslov, const std::array<int, 4>& m, const std::array<int, 4>& N) {
    int s = 0;
    for (size_t j = 0; j < 4; ++j) s += N[j] * m[j];
    return maslov + 8 - s;
}

FactorizationCheck explicit_factorization_check(const RationalSymbol& S, const SymbolMatrix& b_plus,
                                                const SymbolMatrix& lambda, const SymbolMatrix& b_minus) {
    FactorizationCheck out;
    auto fail = [&](std::string why) {
        out.ok = false;
        out.failures.push_back(std::move(why));
    };
    const int n = S.size();
    auto square = [n](const SymbolMatrix& X) { return X.rows() == n && X.cols() == n; };
    if (!square(b_plus) || !square(lambda) || !square(b_minus)) {
        fail("factor dimensions do not match the symbol");
        return out;
    }
    bool diagonal = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& e = lambda(i, j);
            if (i != j ? !e.is_zero() : !(e.is_monomial() && e.terms().begin()->second == GaussRational(1)))
                diagonal = false;
        }
    if (!diagonal) fail("Λ is not a diagonal matrix of powers of ζ");

    if (!b_plus.is_holomorphic()) {
        fail("B⁺ not holomorphic on Δ");
    } else {
        const ExactLaurent d = b_plus.determinant();
        bool invertible = !d.is_zero();
        if (invertible) {
            try {
                invertible = winding_number(d) == 0;
            } catch (const Error&) {
                invertible = false;
            }
        }
        if (!invertible) fail("B⁺ not invertible on Δ");
    }
    if (!b_minus.is_antiholomorphic()) {
        fail("B⁻ not holomorphic outside Δ");
    } else {
        const ExactLaurent d = b_minus.determinant();
        bool invertible = !d.is_zero();
        if (invertible) {
            try {
                invertible = winding_number(d.reflected()) == 0;
            } catch (const Error&) {
                invertible = false;
            }
        }
        if (!invertible) fail("B⁻ not invertible outside Δ");
    }
    if (!(b_plus * lambda * b_minus * S.den == S.num)) fail("S ≠ B⁺ Λ B⁻");
    return out;
}

IndexReport analyze_indices(const Model& m, const ExactDisc& f0, bool full_indices) {
    IndexReport r;
    const auto fac = factor_G2(m, f0);
    r.qs = fac.qs;
    bool numeric = false;
    std::vector<int> all;
    for (int s = 0; s < 2; ++s) {
        const auto pi = partial_indices(symbol_of(fac.G2_tilde.block(2 * s, 2 * s, 2, 2)));
        numeric = numeric || pi.method == IndexMethod::Numeric;
        r.block_indices[static_cast<size_t>(s)] = pi.values;
        all.insert(all.end(), pi.values.begin(), pi.values.end());
    }
    std::sort(all.begin(), all.end());
    r.partial_indices = all;
    r.g2_det_winding = maslov_index(symbol_of(fac.G2_tilde));

    const RationalSymbol full = symbol_of(desingularized_G(m, f0));
    r.maslov = maslov_index(full);
    if (full_indices) {
        const auto pi = partial_indices(full);
        numeric = numeric || pi.method == IndexMethod::Numeric;
        r.full_indices = pi.values;
    }
    for (int s = 0; s < 2; ++s) {
        const ExactLaurent& Q = fac.qs.blocks[static_cast<size_t>(s)].Q;
        r.q_indices[static_cast<size_t>(s)] = wind_or_singular(Q, "Q") - wind_or_singular(circle_conj(Q), "Q");
    }
    r.formula_maslov = r.q_indices[0] + r.q_indices[1] + 4 * m.k0();
    r.theta_bounds_hold = true;
    for (int s = 0; s < 2; ++s) {
        r.theta_bounds[static_cast<size_t>(s)] = m.k0() + m.k(s + 1) - 2;
        for (int k : r.block_indices[static_cast<size_t>(s)])
            if (k < r.theta_bounds[static_cast<size_t>(s)]) r.theta_bounds_hold = false;
    }
    r.surjectivity = surjectivity_verdict(r.block_indices[0], r.block_indices[1], m.d(1) - 1, m.d(2) - 1);
    r.kernel_dim = kernel_dimension(r.maslov, {1, m.d(1) - 1, m.d(2) - 1, 0}, {2, 2, 2, 2});
    r.formula_kernel_dim = r.formula_maslov + 10 - 2 * (m.d(1) + m.d(2));
    r.method = numeric ? IndexMethod::Numeric : IndexMethod::Exact;
    return r;
}

}  // namespace statdisc
