#pragma once

// Polynomials in the four coordinates (z1, z2, w1, w2) of C^4 and their
// conjugates, treated as eight independent variables. Differentiation with
// respect to any of them is exact; conjugation swaps the two halves.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "statdisc/laurent.hpp"

namespace statdisc {

enum Var : int { Z1 = 0, Z2 = 1, W1 = 2, W2 = 3, ZB1 = 4, ZB2 = 5, WB1 = 6, WB2 = 7 };
inline constexpr int kNumVars = 8;

inline constexpr int conj_var(int v) { return v < 4 ? v + 4 : v - 4; }

template <typename C>
class MultiPoly {
public:
    using Exponents = std::array<std::uint8_t, kNumVars>;
    using Traits = CoeffTraits<C>;

    MultiPoly() = default;
    explicit MultiPoly(const C& constant) { add_term(Exponents{}, constant); }

    static MultiPoly variable(int v) {
        Exponents e{};
        e[static_cast<size_t>(v)] = 1;
        MultiPoly p;
        p.add_term(e, C(1));
        return p;
    }
    static MultiPoly monomial(const C& c, const Exponents& e) {
        MultiPoly p;
        p.add_term(e, c);
        return p;
    }

    const std::map<Exponents, C>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponents& e, const C& c) {
        if (Traits::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (Traits::is_zero(it->second)) terms_.erase(it);
        }
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const C& s) {
        MultiPoly r;
        for (const auto& [e, c] : a.terms_) r.add_term(e, c * s);
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r;
        for (const auto& [e, c] : a.terms_)
            for (const auto& [f, d] : b.terms_) {
                Exponents g{};
                for (size_t k = 0; k < kNumVars; ++k) g[k] = static_cast<std::uint8_t>(e[k] + f[k]);
                r.add_term(g, c * d);
            }
        return r;
    }
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

    MultiPoly pow(unsigned k) const {
        MultiPoly r(C(1));
        for (unsigned j = 0; j < k; ++j) r = r * *this;
        return r;
    }

    MultiPoly derivative(int v) const {
        MultiPoly r;
        for (const auto& [e, c] : terms_) {
            const auto p = e[static_cast<size_t>(v)];
            if (p == 0) continue;
            Exponents f = e;
            f[static_cast<size_t>(v)] = static_cast<std::uint8_t>(p - 1);
            r.add_term(f, c * C(static_cast<long>(p)));
        }
        return r;
    }

    /// The polynomial whose values are the complex conjugates of this one.
    MultiPoly conj() const {
        MultiPoly r;
        for (const auto& [e, c] : terms_) {
            Exponents f{};
            for (int k = 0; k < kNumVars; ++k) f[static_cast<size_t>(conj_var(k))] = e[static_cast<size_t>(k)];
            r.add_term(f, Traits::conj(c));
        }
        return r;
    }

    /// True when the polynomial takes real values (it equals its conjugate).
    bool is_real() const { return conj() == *this; }

    int max_degree(int v) const {
        int m = 0;
        for (const auto& [e, c] : terms_) m = std::max(m, static_cast<int>(e[static_cast<size_t>(v)]));
        return m;
    }

    MultiPoly<cplx> to_float() const {
        MultiPoly<cplx> r;
        for (const auto& [e, c] : terms_) r.add_term(e, Traits::to_complex(c));
        return r;
    }

    /// Evaluates with `vars` holding (z1, z2, w1, w2, conj z1, ..., conj w2).
    /// T must support T + T, T * T and T * C.
    template <typename T>
    T eval(const std::array<T, kNumVars>& vars) const {
        std::array<std::vector<T>, kNumVars> powers;
        for (int v = 0; v < kNumVars; ++v) {
            const int deg = max_degree(v);
            auto& pw = powers[static_cast<size_t>(v)];
            pw.reserve(static_cast<size_t>(deg) + 1);
            pw.push_back(T(C(1)));
            for (int k = 1; k <= deg; ++k) pw.push_back(pw.back() * vars[static_cast<size_t>(v)]);
        }
        T acc = T(C(0));
        for (const auto& [e, c] : terms_) {
            T term = T(C(1)) * c;
            for (size_t v = 0; v < kNumVars; ++v)
                if (e[v]) term = term * powers[v][e[v]];
            acc = acc + term;
        }
        return acc;
    }

    std::string str() const;

private:
    std::map<Exponents, C> terms_;
};

template <typename C>
std::string MultiPoly<C>::str() const {
    static const char* names[kNumVars] = {"z1", "z2", "w1", "w2", "cz1", "cz2", "cw1", "cw2"};
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ")";
        for (size_t v = 0; v < kNumVars; ++v) {
            if (e[v] == 0) continue;
            os << "*" << names[v];
            if (e[v] > 1) os << "^" << static_cast<int>(e[v]);
        }
    }
    return os.str();
}

}  // namespace statdisc
