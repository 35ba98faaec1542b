#include "statdisc/model.hpp"

#include <sstream>

namespace statdisc {

namespace {

using Exps = MultiPoly<GaussRational>::Exponents;

MultiPoly<GaussRational> var(int v) { return MultiPoly<GaussRational>::variable(v); }

}  // namespace

HomogPoly::HomogPoly(int degree, int top_index, std::map<int, GaussRational> alpha, const std::string& field)
    : degree_(degree), top_(top_index) {
    if (degree < 2) throw Error(ErrorKind::Validation, field + ".degree must be >= 2");
    for (auto& [j, a] : alpha) {
        if (j < 0 || j > degree)
            throw Error(ErrorKind::Validation, field + ".coefficients: index " + std::to_string(j) + " outside [0, degree]");
        if (!a.is_zero()) alpha_.emplace(j, a);
    }
    for (const auto& [j, a] : alpha_) {
        auto it = alpha_.find(degree - j);
        if (it == alpha_.end() || it->second != a.conj())
            throw Error(ErrorKind::Validation,
                        field + ".coefficients: not real-valued (alpha_" + std::to_string(degree - j) +
                            " must be conj(alpha_" + std::to_string(j) + "))");
    }
    if (alpha_.empty()) throw Error(ErrorKind::Validation, field + ".coefficients: all zero");
    // Only z^d and conj(z)^d terms survive in a harmonic P; its Laplacian is identically zero.
    bool harmonic = true;
    for (const auto& [j, a] : alpha_)
        if (j > 0 && j < degree) harmonic = false;
    if (harmonic) throw Error(ErrorKind::SingularSymbol, field + ": Laplacian hypothesis violated (P is harmonic)");
    if (2 * top_index < degree || top_index > degree - 1)
        throw Error(ErrorKind::Validation, field + ".k must satisfy degree/2 <= k <= degree-1");
    for (const auto& [j, a] : alpha_)
        if (j < degree - top_index || j > top_index)
            throw Error(ErrorKind::Validation,
                        field + ".coefficients: index " + std::to_string(j) + " outside [degree-k, k]");
}

HomogPoly HomogPoly::with_derived_top(int degree, std::map<int, GaussRational> alpha, const std::string& field) {
    int top = 0;
    for (const auto& [j, a] : alpha)
        if (!a.is_zero()) top = std::max(top, j);
    return HomogPoly(degree, top, std::move(alpha), field);
}

MultiPoly<GaussRational> HomogPoly::as_multipoly(int slot) const {
    MultiPoly<GaussRational> p;
    for (const auto& [j, a] : alpha_) {
        Exps e{};
        e[static_cast<size_t>(Z1 + slot)] = static_cast<std::uint8_t>(j);
        e[static_cast<size_t>(ZB1 + slot)] = static_cast<std::uint8_t>(degree_ - j);
        p.add_term(e, a);
    }
    return p;
}

Model::Model(HomogPoly p1, HomogPoly p2, Perturbation theta)
    : p1_(std::move(p1)), p2_(std::move(p2)), theta_(std::move(theta)) {
    if (p1_.degree() > p2_.degree()) throw Error(ErrorKind::Validation, "model: P1.degree must not exceed P2.degree");
    if (!theta_.amplitude.is_real() || sgn(theta_.amplitude.re()) < 0)
        throw Error(ErrorKind::Validation, "perturbation.epsilon must be a nonnegative real");
    for (size_t t = 0; t < theta_.terms.size(); ++t) {
        const auto& term = theta_.terms[t];
        const std::string where = "perturbation.terms[" + std::to_string(t) + "]";
        if (term.ell != 1 && term.ell != 2) throw Error(ErrorKind::Validation, where + ".ell must be 1 or 2");
        for (int v : {term.I[0], term.I[1], term.J[0], term.J[1], term.l[0], term.l[1]})
            if (v < 0 || v > 60) throw Error(ErrorKind::Validation, where + ": exponents must lie in [0, 60]");
    }
    const auto bad = validate_perturbation(theta_, *this);
    if (!bad.empty()) {
        std::ostringstream os;
        os << "perturbation.terms[" << bad.front().index << "]: weighted order " << bad.front().weight << " below "
           << bad.front().required;
        throw Error(ErrorKind::Validation, os.str());
    }
}

Model Model::with_amplitude(const GaussRational& eps) const {
    Perturbation t = theta_;
    t.amplitude = eps;
    return Model(p1_, p2_, std::move(t));
}

std::vector<PerturbationViolation> validate_perturbation(const Perturbation& p, const Model& m) {
    std::vector<PerturbationViolation> out;
    for (size_t t = 0; t < p.terms.size(); ++t) {
        const auto& term = p.terms[t];
        const int ell = term.ell == 2 ? 2 : 1;
        const int weight = term.I[0] + term.I[1] + term.J[0] + term.J[1] + m.d(1) * term.l[0] + m.d(2) * term.l[1];
        const int required = m.d(ell) + 1;
        if (weight < required) out.push_back({t, term.ell, weight, required});
    }
    return out;
}

std::array<MultiPoly<GaussRational>, 2> defining_functions(const Model& m) {
    const GaussRational half = GaussRational(mpq_class(1, 2));
    std::array<MultiPoly<GaussRational>, 2> r;
    for (int ell = 1; ell <= 2; ++ell) {
        const int s = ell - 1;
        r[static_cast<size_t>(s)] = (var(W1 + s) + var(WB1 + s)) * half - m.P(ell).as_multipoly(s);
    }
    const auto& theta = m.perturbation();
    if (theta.is_zero()) return r;
    // Im w_j = -(i/2)(w_j - conj w_j)
    const GaussRational minus_half_i = GaussRational(0, mpq_class(-1, 2));
    std::array<MultiPoly<GaussRational>, 2> im_w{(var(W1) - var(WB1)) * minus_half_i, (var(W2) - var(WB2)) * minus_half_i};
    std::array<MultiPoly<GaussRational>, 2> sum;
    for (const auto& term : theta.terms) {
        Exps e{};
        e[Z1] = static_cast<std::uint8_t>(term.I[0]);
        e[Z2] = static_cast<std::uint8_t>(term.I[1]);
        e[ZB1] = static_cast<std::uint8_t>(term.J[0]);
        e[ZB2] = static_cast<std::uint8_t>(term.J[1]);
        auto mono = MultiPoly<GaussRational>::monomial(term.coeff, e) * im_w[0].pow(static_cast<unsigned>(term.l[0])) *
                    im_w[1].pow(static_cast<unsigned>(term.l[1]));
        sum[static_cast<size_t>(term.ell - 1)] += mono;
    }
    const GaussRational scale = theta.amplitude * half;
    for (size_t s = 0; s < 2; ++s) r[s] += (sum[s] + sum[s].conj()) * scale;
    return r;
}

ConormalEquations::ConormalEquations(const Model& m) {
    const auto r = defining_functions(m);
    exact_ = EquationSet<GaussRational>(r, m.k0());
    float_ = EquationSet<cplx>({r[0].to_float(), r[1].to_float()}, m.k0());
}

ConormalEquations conormal_equations(const Model& m) { return ConormalEquations(m); }

}  // namespace statdisc
