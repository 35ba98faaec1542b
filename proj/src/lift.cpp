#include "statdisc/lift.hpp"

#include <cmath>
#include <limits>

namespace statdisc {

namespace {

const char* const kEquationNames[8] = {"r1", "r2", "Re X1", "Im X1", "Re X2", "Im X2", "Im c1", "Im c2"};
const char* const kComponentNames[8] = {"h1", "h2", "g1", "g2", "ht1", "ht2", "gt1", "gt2"};

// Falling factorial n (n-1) ... (n-m+1), valid for negative n.
double falling(int n, int m) {
    double r = 1.0;
    for (int t = 0; t < m; ++t) r *= static_cast<double>(n - t);
    return r;
}

bool is_binary_fraction(const mpq_class& q) {
    const mpz_class& den = q.get_den();
    if (mpz_popcount(den.get_mpz_t()) != 1) return false;
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) <= 53 && mpz_sizeinbase(den.get_mpz_t(), 2) <= 1000;
}

nlohmann::json rational_json(const mpq_class& q) {
    if (is_binary_fraction(q)) return q.get_d();
    return q.get_str();
}

}  // namespace

std::array<int, 8> required_orders(const Model& m) { return {1, 1, 1, 1, m.d(1) - 1, m.d(2) - 1, 0, 0}; }

template <typename C>
int vanishing_order_at_one(const LaurentPoly<C>& p, double rel_tol) {
    if (p.is_zero()) throw Error(ErrorKind::ZeroInput, "vanishing order of the zero polynomial");
    if constexpr (CoeffTraits<C>::exact) {
        const LaurentPoly<C> factor = LaurentPoly<C>(C(1)) - LaurentPoly<C>::zeta();
        int order = 0;
        LaurentPoly<C> q = p;
        while (true) {
            try {
                q = divide_by(q, factor);
            } catch (const Error&) {
                return order;
            }
            ++order;
        }
    } else {
        const int span = p.max_exp() - p.min_exp();
        for (int m = 0; m <= span; ++m) {
            cplx value = 0.0;
            double scale = 0.0;
            for (const auto& [n, c] : p.terms()) {
                const double f = falling(n, m);
                value += c * f;
                scale += std::abs(c) * std::abs(f);
            }
            if (std::abs(value) > rel_tol * scale) return m;
        }
        return span;
    }
}

template int vanishing_order_at_one(const ExactLaurent&, double);
template int vanishing_order_at_one(const FloatLaurent&, double);

ExactDisc initial_lift(const Model& m, const GaussRational& c1, const GaussRational& c2) {
    if (!m.is_pure()) throw Error(ErrorKind::Validation, "initial_lift needs an unperturbed model");
    if (!c1.is_real() || !c2.is_real()) throw Error(ErrorKind::Validation, "lift.c must be real");
    if (c1.is_zero() && c2.is_zero()) throw Error(ErrorKind::DegenerateLift, "lift.c: both multipliers vanish");
    const ExactLaurent one(1L);
    const ExactLaurent h = one - ExactLaurent::zeta();
    const ExactLaurent hb = circle_conj(h);
    const ExactLaurent zk = ExactLaurent::zeta(m.k0());
    const std::array<GaussRational, 2> c{c1, c2};

    ExactDisc f;
    f[H1] = h;
    f[H2] = h;
    for (int ell = 1; ell <= 2; ++ell) {
        const auto s = ell - 1;
        const HomogPoly& P = m.P(ell);
        // g with Re g = P(h, conj h) on the circle, normalized by g(1) = 0.
        ExactLaurent g = riesz_holo(TrigPoly<GaussRational>(P.eval(h, hb)));
        GaussRational at_one(0);
        for (const auto& [n, a] : g.terms()) at_one += a;
        g -= ExactLaurent(at_one);
        f[G1 + s] = g;
        f[HT1 + s] = -(zk * P.eval(h, hb, 1, 0)) * c[static_cast<size_t>(s)];
        f[GT1 + s] = zk * (c[static_cast<size_t>(s)] * GaussRational(mpq_class(1, 2)));
        if (!f[HT1 + s].is_holomorphic())
            throw Error(ErrorKind::Internal, "initial lift: conormal component is not holomorphic");
    }
    return f;
}

template <typename C>
StationarityCertificate certify(const Model& model, const Disc<C>& input, double tol) {
    StationarityCertificate cert;
    const Disc<C> f = canonical_layout(input);
    const auto eqs = conormal_equations(model);
    const int k0 = model.k0();

    auto fail = [&](ErrorKind kind, std::string msg) {
        if (!cert.failure) {
            cert.failure = kind;
            cert.message = std::move(msg);
        }
    };

    if (!f.is_holomorphic()) fail(ErrorKind::YStructure, "Y-structure: components must be holomorphic");
    const auto need = required_orders(model);
    for (int k = 0; k < 8; ++k) {
        cert.orders[static_cast<size_t>(k)] = f[k].is_zero() ? -1 : vanishing_order_at_one(f[k]);
        const int got = cert.orders[static_cast<size_t>(k)];
        const int want = need[static_cast<size_t>(k)];
        if (got >= 0 && got < want) {
            std::string rule = k == HT1 ? "d1-1" : k == HT2 ? "d2-1" : "1";
            fail(ErrorKind::YStructure, "Y-structure: order " + rule + " = " + std::to_string(want) +
                                            " required for " + kComponentNames[k] + " at 1, found " +
                                            std::to_string(got));
        }
    }

    // Grid evaluation in floating point.
    const FloatDisc ff = f.to_float();
    const int grid = 2 * std::max(ff.max_degree(), 1) + 64;
    cert.grid = grid;
    const auto& feq = eqs.floating();
    std::array<cplx, 4> grad0[2];
    {
        const std::array<cplx, kNumVars> origin{};
        for (int ell = 0; ell < 2; ++ell) {
            const auto g = feq.gradient(ell);
            for (size_t v = 0; v < 4; ++v) grad0[ell][v] = g[v].eval(origin);
        }
    }
    cert.margin = std::numeric_limits<double>::infinity();
    cert.multiplier_min = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    cert.multiplier_max = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (int t = 0; t < grid; ++t) {
        const cplx zeta = std::polar(1.0, 2.0 * std::numbers::pi * t / grid);
        std::array<cplx, 8> x, xb;
        for (size_t k = 0; k < 8; ++k) {
            x[k] = ff.components[k](zeta);
            xb[k] = std::conj(x[k]);
        }
        const cplx zk = std::pow(zeta, k0), zkb = std::conj(zk);
        const auto val = feq.evaluate<cplx>(x, xb, zk, zkb);
        for (size_t i = 0; i < 8; ++i) cert.residuals[i] = std::max(cert.residuals[i], std::abs(val[i]));
        const auto c = feq.multipliers<cplx>(x, xb, zkb);
        double norm2 = 0.0;
        for (size_t v = 0; v < 4; ++v) norm2 += std::norm(c[0] * grad0[0][v] + c[1] * grad0[1][v]);
        cert.margin = std::min(cert.margin, std::sqrt(norm2));
        for (size_t l = 0; l < 2; ++l) {
            cert.multiplier_min[l] = std::min(cert.multiplier_min[l], c[l].real());
            cert.multiplier_max[l] = std::max(cert.multiplier_max[l], c[l].real());
            cert.multiplier_imag = std::max(cert.multiplier_imag, std::abs(c[l].imag()));
        }
    }

    if constexpr (CoeffTraits<C>::exact) {
        std::array<ExactLaurent, 8> x, xb;
        for (size_t k = 0; k < 8; ++k) {
            x[k] = f.components[k];
            xb[k] = circle_conj(x[k]);
        }
        const ExactLaurent zk = ExactLaurent::zeta(k0), zkb = ExactLaurent::zeta(-k0);
        try {
            const auto val = eqs.exact().evaluate<ExactLaurent>(x, xb, zk, zkb);
            cert.exact_checked = true;
            cert.exact_zero = std::all_of(val.begin(), val.end(), [](const auto& p) { return p.is_zero(); });
            cert.multipliers_exact = eqs.exact().multipliers<ExactLaurent>(x, xb, zkb);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotDivisible) throw;
        }
    }

    for (int i = 0; i < 2; ++i)
        if (cert.residuals[static_cast<size_t>(i)] > tol)
            fail(ErrorKind::NotAttached, std::string("not attached: equation ") + std::to_string(i + 1) + " (" +
                                             kEquationNames[i] + ") residual " +
                                             std::to_string(cert.residuals[static_cast<size_t>(i)]));
    for (int i = 2; i < 8; ++i)
        if (cert.residuals[static_cast<size_t>(i)] > tol)
            fail(ErrorKind::NotConormal, std::string("not conormal: equation ") + std::to_string(i + 1) + " (" +
                                             kEquationNames[i] + ") residual " +
                                             std::to_string(cert.residuals[static_cast<size_t>(i)]));
    if (!(cert.margin > 0.0)) fail(ErrorKind::Degenerate, "degenerate lift: sum c_l dr_l(0) vanishes on the circle");
    return cert;
}

template StationarityCertificate certify(const Model&, const ExactDisc&, double);
template StationarityCertificate certify(const Model&, const FloatDisc&, double);

namespace {

nlohmann::json layout_json(Layout l) { return l == Layout::ZFirst ? "z,w,zt,wt" : "w,z,zt,wt"; }

template <typename C, typename Fn>
nlohmann::json components_json(const Disc<C>& f, Fn coeff) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& p : f.components) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [n, c] : p.terms()) {
            auto [re, im] = coeff(c);
            terms.push_back({n, re, im});
        }
        comps.push_back(terms);
    }
    return {{"schema_version", 1}, {"layout", layout_json(f.layout)}, {"components", comps}};
}

mpq_class json_rational(const nlohmann::json& v, const std::string& where) {
    try {
        if (v.is_number()) {
            const double d = v.get<double>();
            if (!std::isfinite(d)) throw Error(ErrorKind::Validation, where + ": non-finite number");
            return mpq_class(d);
        }
        if (v.is_string()) return GaussRational::parse_real(v.get<std::string>()).re();
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::Validation, where + ": malformed number");
    }
    throw Error(ErrorKind::Validation, where + ": expected a number or a \"p/q\" string");
}

}  // namespace

nlohmann::json disc_to_json(const ExactDisc& f) {
    return components_json(f, [](const GaussRational& c) {
        return std::pair{rational_json(c.re()), rational_json(c.im())};
    });
}

nlohmann::json disc_to_json(const FloatDisc& f) {
    return components_json(f, [](const cplx& c) { return std::pair{nlohmann::json(c.real()), nlohmann::json(c.imag())}; });
}

ExactDisc disc_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Validation, "disc: expected an object");
    if (j.contains("schema_version") && j["schema_version"] != 1)
        throw Error(ErrorKind::Validation, "disc.schema_version: unsupported");
    ExactDisc f;
    if (j.contains("layout")) {
        const auto& l = j["layout"];
        if (l == "z,w,zt,wt")
            f.layout = Layout::ZFirst;
        else if (l == "w,z,zt,wt")
            f.layout = Layout::WFirst;
        else
            throw Error(ErrorKind::Validation, "disc.layout: expected \"z,w,zt,wt\" or \"w,z,zt,wt\"");
    }
    if (!j.contains("components") || !j["components"].is_array() || j["components"].size() != 8)
        throw Error(ErrorKind::Validation, "disc.components: expected 8 components");
    for (size_t k = 0; k < 8; ++k) {
        const auto& comp = j["components"][k];
        const std::string where = "disc.components[" + std::to_string(k) + "]";
        if (!comp.is_array()) throw Error(ErrorKind::Validation, where + ": expected a list of terms");
        for (size_t t = 0; t < comp.size(); ++t) {
            const auto& term = comp[t];
            const std::string at = where + "[" + std::to_string(t) + "]";
            if (!term.is_array() || term.size() != 3 || !term[0].is_number_integer())
                throw Error(ErrorKind::Validation, at + ": expected [exponent, re, im]");
            f.components[k].add_term(term[0].get<int>(),
                                     GaussRational(json_rational(term[1], at + "[1]"), json_rational(term[2], at + "[2]")));
        }
    }
    return f;
}

}  // namespace statdisc
