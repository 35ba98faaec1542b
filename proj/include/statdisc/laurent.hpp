#pragma once

// Laurent polynomials in one variable zeta, restricted to the unit circle.
//
// Two coefficient backends share one template: GaussRational (exact) and
// std::complex<double> (float). On the circle conj(zeta) = 1/zeta, so complex
// conjugation of a boundary function is exponent reflection plus coefficient
// conjugation; it is never done numerically on samples.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "statdisc/errors.hpp"
#include "statdisc/gauss_rational.hpp"

namespace statdisc {

using cplx = std::complex<double>;

template <typename C>
struct CoeffTraits;

template <>
struct CoeffTraits<GaussRational> {
    static constexpr bool exact = true;
    static GaussRational conj(const GaussRational& c) { return c.conj(); }
    static bool is_zero(const GaussRational& c) { return c.is_zero(); }
    static cplx to_complex(const GaussRational& c) { return c.to_complex(); }
    static GaussRational i() { return GaussRational::i(); }
    static double magnitude(const GaussRational& c) { return std::abs(c.to_complex()); }
};

template <>
struct CoeffTraits<cplx> {
    static constexpr bool exact = false;
    static cplx conj(const cplx& c) { return std::conj(c); }
    static bool is_zero(const cplx& c) { return c == cplx(0.0, 0.0); }
    static cplx to_complex(const cplx& c) { return c; }
    static cplx i() { return {0.0, 1.0}; }
    static double magnitude(const cplx& c) { return std::abs(c); }
};

template <typename C>
class LaurentPoly {
public:
    using Coeff = C;
    using Traits = CoeffTraits<C>;

    LaurentPoly() = default;
    LaurentPoly(const C& constant) { add_term(0, constant); }  // NOLINT(google-explicit-constructor)
    LaurentPoly(long constant) { add_term(0, C(constant)); }    // NOLINT(google-explicit-constructor)

    static LaurentPoly monomial(const C& c, int exponent) {
        LaurentPoly p;
        p.add_term(exponent, c);
        return p;
    }
    static LaurentPoly zeta(int exponent = 1) { return monomial(C(1), exponent); }
    static LaurentPoly one_minus_zeta() { return LaurentPoly(C(1)) - zeta(); }
    static LaurentPoly one_minus_zeta_bar() { return LaurentPoly(C(1)) - zeta(-1); }
    static LaurentPoly from_terms(const std::vector<std::pair<int, C>>& terms) {
        LaurentPoly p;
        for (const auto& [n, c] : terms) p.add_term(n, c);
        return p;
    }

    const std::map<int, C>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    int min_exp() const { return terms_.empty() ? 0 : terms_.begin()->first; }
    int max_exp() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
    bool is_holomorphic() const { return terms_.empty() || min_exp() >= 0; }

    C coeff(int n) const {
        auto it = terms_.find(n);
        return it == terms_.end() ? C(0) : it->second;
    }

    void add_term(int n, const C& c) {
        if (Traits::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(n, c);
        if (!inserted) {
            it->second += c;
            if (Traits::is_zero(it->second)) terms_.erase(it);
        }
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [n, c] : o.terms_) add_term(n, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [n, c] : o.terms_) add_term(n, -c);
        return *this;
    }
    LaurentPoly& operator*=(const C& s) {
        if (Traits::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [n, c] : terms_) c *= s;
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator-(const LaurentPoly& a) { return LaurentPoly() - a; }
    friend LaurentPoly operator*(LaurentPoly a, const C& s) { return a *= s; }
    friend LaurentPoly operator*(const C& s, LaurentPoly a) { return a *= s; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (const auto& [n, c] : a.terms_)
            for (const auto& [m, d] : b.terms_) r.add_term(n + m, c * d);
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    /// Exact quotient for the exact backend; tolerance-checked for floats.
    friend LaurentPoly operator/(const LaurentPoly& a, const LaurentPoly& b) { return divide_by(a, b, 1e-9); }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    LaurentPoly pow(unsigned k) const {
        LaurentPoly result(C(1)), base = *this;
        while (k) {
            if (k & 1U) result *= base;
            k >>= 1U;
            if (k) base *= base;
        }
        return result;
    }

    /// Multiplication by zeta^k.
    LaurentPoly shifted(int k) const {
        LaurentPoly r;
        for (const auto& [n, c] : terms_) r.terms_.emplace(n + k, c);
        return r;
    }

    /// zeta -> 1/zeta without conjugating coefficients.
    LaurentPoly reflected() const {
        LaurentPoly r;
        for (const auto& [n, c] : terms_) r.terms_.emplace(-n, c);
        return r;
    }

    cplx operator()(cplx z) const {
        if (terms_.empty()) return {0.0, 0.0};
        // Horner in z over [min, max], then scale by z^min.
        cplx acc(0.0, 0.0);
        int prev = max_exp();
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            for (int k = prev; k > it->first; --k) acc *= z;
            acc += Traits::to_complex(it->second);
            prev = it->first;
        }
        return acc * std::pow(z, prev);
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [n, c] : terms_) m = std::max(m, Traits::magnitude(c));
        return m;
    }

    /// Drops float coefficients below tol * max_abs_coeff().
    LaurentPoly pruned(double rel_tol) const {
        if constexpr (Traits::exact) {
            return *this;
        } else {
            const double cut = rel_tol * max_abs_coeff();
            LaurentPoly r;
            for (const auto& [n, c] : terms_)
                if (std::abs(c) > cut) r.terms_.emplace(n, c);
            return r;
        }
    }

    LaurentPoly<cplx> to_float() const {
        LaurentPoly<cplx> r;
        for (const auto& [n, c] : terms_) r.add_term(n, Traits::to_complex(c));
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [n, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c << ")";
            if (n != 0) os << "z^" << n;
        }
        return os.str();
    }
    friend std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.str(); }

private:
    std::map<int, C> terms_;
};

using ExactLaurent = LaurentPoly<GaussRational>;
using FloatLaurent = LaurentPoly<cplx>;

/// Sum of conj(c_n) zeta^{-n}: pointwise conj(L(zeta)) on the unit circle.
template <typename C>
LaurentPoly<C> circle_conj(const LaurentPoly<C>& p) {
    LaurentPoly<C> r;
    for (const auto& [n, c] : p.terms()) r.add_term(-n, CoeffTraits<C>::conj(c));
    return r;
}

/// Exact division in the Laurent ring. The float backend accepts a remainder
/// below rel_tol relative to the dividend.
template <typename C>
LaurentPoly<C> divide_by(const LaurentPoly<C>& num, const LaurentPoly<C>& den, double rel_tol = 1e-9) {
    using Traits = CoeffTraits<C>;
    if (den.is_zero()) throw Error(ErrorKind::NotDivisible, "division by the zero Laurent polynomial");
    if (num.is_zero()) return {};
    const int num_lo = num.min_exp(), den_lo = den.min_exp();
    const int num_deg = num.max_exp() - num_lo, den_deg = den.max_exp() - den_lo;
    std::vector<C> rem(static_cast<size_t>(num_deg) + 1, C(0));
    for (const auto& [n, c] : num.terms()) rem[static_cast<size_t>(n - num_lo)] = c;
    std::vector<C> d(static_cast<size_t>(den_deg) + 1, C(0));
    for (const auto& [n, c] : den.terms()) d[static_cast<size_t>(n - den_lo)] = c;

    LaurentPoly<C> q;
    // Both are normalized to polynomials with nonzero constant term, so the
    // quotient is a polynomial; divide from the low end (power series style)
    // which is the natural direction for (1 - 1/zeta)-type factors.
    const C d0 = d[0];
    const int qdeg = num_deg - den_deg;
    if (qdeg < 0) throw Error(ErrorKind::NotDivisible, "divisor has larger span than dividend");
    for (int k = 0; k <= qdeg; ++k) {
        C coef = rem[static_cast<size_t>(k)] / d0;
        if (Traits::is_zero(coef)) continue;
        for (int j = 0; j <= den_deg; ++j) rem[static_cast<size_t>(k + j)] -= coef * d[static_cast<size_t>(j)];
        q.add_term(k + num_lo - den_lo, coef);
    }
    double worst = 0.0;
    bool nonzero = false;
    for (int k = qdeg + 1; k <= num_deg; ++k) {
        const auto& r = rem[static_cast<size_t>(k)];
        if (!Traits::is_zero(r)) nonzero = true;
        worst = std::max(worst, Traits::magnitude(r));
    }
    if constexpr (Traits::exact) {
        if (nonzero) throw Error(ErrorKind::NotDivisible, "nonzero remainder");
    } else {
        if (worst > rel_tol * std::max(1.0, num.max_abs_coeff()))
            throw Error(ErrorKind::NotDivisible, "remainder above tolerance");
    }
    return q;
}

/// Real-valued trigonometric polynomial: coefficient(-n) = conj(coefficient(n)).
template <typename C>
class TrigPoly {
public:
    TrigPoly() = default;
    explicit TrigPoly(LaurentPoly<C> p, double tol = 1e-12) : p_(std::move(p)) {
        if constexpr (CoeffTraits<C>::exact) {
            if (circle_conj(p_) != p_) throw Error(ErrorKind::Validation, "TrigPoly is not real on the circle");
        } else {
            auto diff = (circle_conj(p_) - p_).max_abs_coeff();
            if (diff > tol * std::max(1.0, p_.max_abs_coeff()))
                throw Error(ErrorKind::Validation, "TrigPoly is not real on the circle");
        }
    }
    const LaurentPoly<C>& laurent() const { return p_; }
    double operator()(double t) const { return p_(std::polar(1.0, t)).real(); }

private:
    LaurentPoly<C> p_;
};

/// Holomorphic polynomial H with Re H = u on the circle and Im H(0) = 0.
template <typename C>
LaurentPoly<C> riesz_holo(const TrigPoly<C>& u) {
    LaurentPoly<C> h;
    for (const auto& [n, c] : u.laurent().terms()) {
        if (n == 0) {
            if constexpr (CoeffTraits<C>::exact)
                h.add_term(0, c);
            else
                h.add_term(0, C(c.real()));
        } else if (n > 0) {
            h.add_term(n, c * C(2));
        }
    }
    return h;
}

namespace detail {

/// Number of roots of a polynomial (coefficients low to high, p[0] != 0)
/// strictly inside the unit disc, by the Schur-Cohn recursion. Returns -1 when
/// the recursion degenerates (a root on the circle, or a reflection-symmetric
/// factor), leaving the caller to decide.
int schur_cohn_inside(std::vector<GaussRational> p);

/// Fallback for degenerate Schur-Cohn runs: numerical roots, with a root
/// within 1e-7 of the circle reported as VanishingSymbol.
int root_count_inside(const std::vector<GaussRational>& p);

/// Argument-principle winding of t -> L(e^{it}) with a min-modulus guard.
int float_winding(const FloatLaurent& p, int samples = 4096, double rel_margin = 1e-8);

}  // namespace detail

/// Index of t -> L(e^{it}) about the origin.
template <typename C>
int winding_number(const LaurentPoly<C>& p) {
    if (p.is_zero()) throw Error(ErrorKind::VanishingSymbol, "zero symbol");
    if constexpr (CoeffTraits<C>::exact) {
        const int lo = p.min_exp();
        std::vector<GaussRational> coeffs(static_cast<size_t>(p.max_exp() - lo) + 1, GaussRational(0));
        for (const auto& [n, c] : p.terms()) coeffs[static_cast<size_t>(n - lo)] = c;
        int inside = detail::schur_cohn_inside(coeffs);
        if (inside < 0) inside = detail::root_count_inside(coeffs);
        return lo + inside;
    } else {
        return detail::float_winding(p);
    }
}

}  // namespace statdisc
