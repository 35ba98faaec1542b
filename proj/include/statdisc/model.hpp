#pragma once

// Decoupled model submanifolds {Re w_l = P_l(z_l, conj z_l)} of C^4, their
// admissible perturbations, and the eight conormal defining equations of the
// lifted boundary condition.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "statdisc/multipoly.hpp"

namespace statdisc {

/// Real homogeneous polynomial sum_j alpha_j z^j conj(z)^(d-j).
class HomogPoly {
public:
    HomogPoly() = default;
    /// Validates degree, reality, nonvanishing, the Laplacian and the band
    /// d/2 <= k <= d-1 with coefficients supported on [d-k, k].
    HomogPoly(int degree, int top_index, std::map<int, GaussRational> alpha, const std::string& field = "P");
    /// Same, with k taken as the largest index carrying a nonzero coefficient.
    static HomogPoly with_derived_top(int degree, std::map<int, GaussRational> alpha, const std::string& field = "P");

    int degree() const { return degree_; }
    int top_index() const { return top_; }
    const std::map<int, GaussRational>& alpha() const { return alpha_; }

    /// The polynomial in (z_l, conj z_l) for slot l in {0, 1}.
    MultiPoly<GaussRational> as_multipoly(int slot) const;

    /// P(z, conj z) at a point, as a Laurent polynomial when z is one.
    template <typename T>
    T eval(const T& z, const T& zb, int dz = 0, int dzb = 0) const;

private:
    int degree_ = 0;
    int top_ = 0;
    std::map<int, GaussRational> alpha_;
};

struct PerturbationTerm {
    int ell = 1;                  // which defining function, 1 or 2
    std::array<int, 2> I{};       // powers of z1, z2
    std::array<int, 2> J{};       // powers of conj z1, conj z2
    std::array<int, 2> l{};       // powers of Im w1, Im w2
    GaussRational coeff{1};
};

struct PerturbationViolation {
    size_t index = 0;
    int ell = 1;
    int weight = 0;
    int required = 0;
};

/// theta_l = amplitude * Re(sum of c z^I conj(z)^J (Im w)^l over the terms of l).
struct Perturbation {
    std::vector<PerturbationTerm> terms;
    GaussRational amplitude{0};

    bool is_zero() const { return amplitude.is_zero() || terms.empty(); }
};

class Model {
public:
    Model(HomogPoly p1, HomogPoly p2, Perturbation theta = {});

    const HomogPoly& P(int ell) const { return ell == 1 ? p1_ : p2_; }
    int d(int ell) const { return P(ell).degree(); }
    int k(int ell) const { return P(ell).top_index(); }
    int k0() const { return std::max(p1_.top_index(), p2_.top_index()); }
    const Perturbation& perturbation() const { return theta_; }
    bool is_pure() const { return theta_.is_zero(); }

    Model with_amplitude(const GaussRational& eps) const;
    Model pure() const { return Model(p1_, p2_); }

private:
    HomogPoly p1_, p2_;
    Perturbation theta_;
};

/// Every term whose weighted order (z weight 1, Im w weight d_l) is below d_l + 1.
std::vector<PerturbationViolation> validate_perturbation(const Perturbation& p, const Model& m);

/// r = rho + theta with rho_l = Re w_l - P_l.
std::array<MultiPoly<GaussRational>, 2> defining_functions(const Model& m);

/// Index of a disc/lift component in the layout (z1, z2, w1, w2, zt1, zt2, wt1, wt2).
enum Slot : int { H1 = 0, H2 = 1, G1 = 2, G2 = 3, HT1 = 4, HT2 = 5, GT1 = 6, GT2 = 7 };
inline constexpr int kNumSlots = 8;

/// The eight real boundary functionals whose common zero set on the circle
/// is the lifted conormal condition zeta^k0 N*M minus zero:
///   1-2: r_1, r_2
///   3-6: X_j + conj X_j, i X_j - i conj X_j with X_j = zt_j - zeta^k0 sum_l c_l dr_l/dz_j
///   7-8: i c_l/2 - i conj(c_l)/2, where wt = zeta^k0 (dr/dw) c defines c.
template <typename C>
class EquationSet {
public:
    EquationSet() = default;
    EquationSet(const std::array<MultiPoly<C>, 2>& r, int k0);

    int k0() const { return k0_; }
    const MultiPoly<C>& r(int ell) const { return r_[static_cast<size_t>(ell)]; }

    /// x and xb hold the eight lift coordinates and their conjugates;
    /// zeta_k0 = zeta^k0 and zetab_k0 = conj(zeta)^k0.
    template <typename T>
    std::array<T, 8> evaluate(const std::array<T, 8>& x, const std::array<T, 8>& xb, const T& zeta_k0,
                              const T& zetab_k0) const;

    /// The complex multipliers c_l (real exactly on stationary lifts).
    template <typename T>
    std::array<T, 2> multipliers(const std::array<T, 8>& x, const std::array<T, 8>& xb, const T& zetab_k0) const;

    /// Gradient (dr_l/dz1, dr_l/dz2, dr_l/dw1, dr_l/dw2) at a base point.
    std::array<MultiPoly<C>, 4> gradient(int ell) const {
        return {dz_[0][static_cast<size_t>(ell)], dz_[1][static_cast<size_t>(ell)],
                dw_[0][static_cast<size_t>(ell)], dw_[1][static_cast<size_t>(ell)]};
    }

private:
    int k0_ = 0;
    std::array<MultiPoly<C>, 2> r_;
    // [j][l] = d r_l / d z_j  (resp. w_j), and their conjugate functions.
    std::array<std::array<MultiPoly<C>, 2>, 2> dz_, dw_, dz_conj_, dw_conj_;
};

class ConormalEquations {
public:
    explicit ConormalEquations(const Model& m);

    const EquationSet<GaussRational>& exact() const { return exact_; }
    const EquationSet<cplx>& floating() const { return float_; }
    int k0() const { return exact_.k0(); }

private:
    EquationSet<GaussRational> exact_;
    EquationSet<cplx> float_;
};

ConormalEquations conormal_equations(const Model& m);

// ---------------------------------------------------------------------------

template <typename T>
T HomogPoly::eval(const T& z, const T& zb, int dz, int dzb) const {
    T acc = T(GaussRational(0));
    for (const auto& [j, a] : alpha_) {
        const int pz = j - dz, pzb = degree_ - j - dzb;
        if (pz < 0 || pzb < 0) continue;
        long factor = 1;
        for (int t = 0; t < dz; ++t) factor *= j - t;
        for (int t = 0; t < dzb; ++t) factor *= degree_ - j - t;
        T term = T(a * GaussRational(factor));
        for (int t = 0; t < pz; ++t) term = term * z;
        for (int t = 0; t < pzb; ++t) term = term * zb;
        acc = acc + term;
    }
    return acc;
}

template <typename C>
EquationSet<C>::EquationSet(const std::array<MultiPoly<C>, 2>& r, int k0) : k0_(k0), r_(r) {
    for (size_t j = 0; j < 2; ++j)
        for (size_t l = 0; l < 2; ++l) {
            dz_[j][l] = r_[l].derivative(static_cast<int>(Z1 + j));
            dw_[j][l] = r_[l].derivative(static_cast<int>(W1 + j));
            dz_conj_[j][l] = dz_[j][l].conj();
            dw_conj_[j][l] = dw_[j][l].conj();
        }
}

template <typename C>
template <typename T>
std::array<T, 2> EquationSet<C>::multipliers(const std::array<T, 8>& x, const std::array<T, 8>& xb,
                                             const T& zetab_k0) const {
    const std::array<T, kNumVars> base{x[0], x[1], x[2], x[3], xb[0], xb[1], xb[2], xb[3]};
    std::array<std::array<T, 2>, 2> a;
    for (size_t j = 0; j < 2; ++j)
        for (size_t l = 0; l < 2; ++l) a[j][l] = dw_[j][l].eval(base);
    const T det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const T& wt1 = x[GT1];
    const T& wt2 = x[GT2];
    return {zetab_k0 * (a[1][1] * wt1 - a[0][1] * wt2) / det, zetab_k0 * (a[0][0] * wt2 - a[1][0] * wt1) / det};
}

template <typename C>
template <typename T>
std::array<T, 8> EquationSet<C>::evaluate(const std::array<T, 8>& x, const std::array<T, 8>& xb, const T& zeta_k0,
                                          const T& zetab_k0) const {
    const std::array<T, kNumVars> base{x[0], x[1], x[2], x[3], xb[0], xb[1], xb[2], xb[3]};
    std::array<std::array<T, 2>, 2> a, ab, dz, dzb;
    for (size_t j = 0; j < 2; ++j)
        for (size_t l = 0; l < 2; ++l) {
            a[j][l] = dw_[j][l].eval(base);
            ab[j][l] = dw_conj_[j][l].eval(base);
            dz[j][l] = dz_[j][l].eval(base);
            dzb[j][l] = dz_conj_[j][l].eval(base);
        }
    const T det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const T detb = ab[0][0] * ab[1][1] - ab[0][1] * ab[1][0];
    const std::array<T, 2> c{zetab_k0 * (a[1][1] * x[GT1] - a[0][1] * x[GT2]) / det,
                             zetab_k0 * (a[0][0] * x[GT2] - a[1][0] * x[GT1]) / det};
    const std::array<T, 2> cb{zeta_k0 * (ab[1][1] * xb[GT1] - ab[0][1] * xb[GT2]) / detb,
                              zeta_k0 * (ab[0][0] * xb[GT2] - ab[1][0] * xb[GT1]) / detb};
    std::array<T, 2> X, Xb;
    for (size_t j = 0; j < 2; ++j) {
        X[j] = x[HT1 + j] - zeta_k0 * (c[0] * dz[j][0] + c[1] * dz[j][1]);
        Xb[j] = xb[HT1 + j] - zetab_k0 * (cb[0] * dzb[j][0] + cb[1] * dzb[j][1]);
    }
    const C i = CoeffTraits<C>::i();
    const C half = C(1) / C(2);
    return {r_[0].eval(base),
            r_[1].eval(base),
            X[0] + Xb[0],
            (X[0] - Xb[0]) * i,
            X[1] + Xb[1],
            (X[1] - Xb[1]) * i,
            (c[0] - cb[0]) * (i * half),
            (c[1] - cb[1]) * (i * half)};
}

}  // namespace statdisc
