#pragma once

// Lifts (h, g, ht, gt) of analytic discs, the initial stationary lift of a
// model, and certification of stationarity against the conormal equations.

#include <array>
#include <optional>
#include <string>

#include <json.hpp>

#include "statdisc/model.hpp"

namespace statdisc {

/// Component order of a lift as stored: (z, w, zt, wt) or the reordered (w, z, zt, wt).
enum class Layout { ZFirst, WFirst };

/// Eight holomorphic boundary polynomials in the order (h1, h2, g1, g2, ht1, ht2, gt1, gt2).
template <typename C>
struct Disc {
    std::array<LaurentPoly<C>, 8> components;
    Layout layout = Layout::ZFirst;

    const LaurentPoly<C>& operator[](int k) const { return components[static_cast<size_t>(k)]; }
    LaurentPoly<C>& operator[](int k) { return components[static_cast<size_t>(k)]; }

    bool is_holomorphic() const {
        return std::all_of(components.begin(), components.end(), [](const auto& p) { return p.is_holomorphic(); });
    }
    int max_degree() const {
        int d = 0;
        for (const auto& p : components) d = std::max(d, p.max_exp());
        return d;
    }
    Disc<cplx> to_float() const {
        Disc<cplx> r;
        r.layout = layout;
        for (size_t k = 0; k < 8; ++k) r.components[k] = components[k].to_float();
        return r;
    }
    friend bool operator==(const Disc& a, const Disc& b) {
        return a.layout == b.layout && a.components == b.components;
    }
};

using ExactDisc = Disc<GaussRational>;
using FloatDisc = Disc<cplx>;

/// Swaps the (z, w) blocks, toggling the layout tag.
template <typename C>
Disc<C> reordered(const Disc<C>& f) {
    Disc<C> r = f;
    std::swap(r[0], r[2]);
    std::swap(r[1], r[3]);
    r.layout = f.layout == Layout::ZFirst ? Layout::WFirst : Layout::ZFirst;
    return r;
}

template <typename C>
Disc<C> canonical_layout(const Disc<C>& f) {
    return f.layout == Layout::ZFirst ? f : reordered(f);
}

/// Minimal vanishing order at zeta = 1 of each component: (1, 1, 1, 1, d1-1, d2-1, 0, 0).
std::array<int, 8> required_orders(const Model& m);

/// Largest m with (1 - zeta)^m dividing p. Float inputs use derivative tests at 1.
template <typename C>
int vanishing_order_at_one(const LaurentPoly<C>& p, double rel_tol = 1e-9);

/// The stationary lift with constant multipliers (c1, c2) of a pure model.
ExactDisc initial_lift(const Model& m, const GaussRational& c1, const GaussRational& c2);

struct StationarityCertificate {
    std::array<double, 8> residuals{};  // sup over the boundary grid, per equation
    bool exact_checked = false;
    bool exact_zero = false;            // every equation vanishes identically
    std::optional<std::array<ExactLaurent, 2>> multipliers_exact;
    std::array<double, 2> multiplier_min{}, multiplier_max{};
    double multiplier_imag = 0.0;       // sup |Im c_l| over the grid
    double margin = 0.0;                // min over the grid of |sum c_l dr_l(0)|
    std::array<int, 8> orders{};        // observed vanishing orders at 1 (-1: identically zero)
    int grid = 0;
    std::optional<ErrorKind> failure;
    std::string message;

    bool valid() const { return !failure.has_value(); }
    double max_residual() const { return *std::max_element(residuals.begin(), residuals.end()); }
};

/// Evaluates the certificate; failures are recorded rather than thrown.
template <typename C>
StationarityCertificate certify(const Model& m, const Disc<C>& f, double tol);

/// Same as certify but throws the recorded failure.
template <typename C>
StationarityCertificate verify_stationary(const Model& m, const Disc<C>& f, double tol) {
    auto cert = certify(m, f, tol);
    if (cert.failure) throw Error(*cert.failure, cert.message);
    return cert;
}

/// JSON disc files: {"schema_version": 1, "layout": "z,w,zt,wt",
/// "components": [[[exponent, re, im], ...] x 8]}. Exact coefficients that
/// are not binary fractions are written as "p/q" strings.
nlohmann::json disc_to_json(const ExactDisc& f);
nlohmann::json disc_to_json(const FloatDisc& f);
ExactDisc disc_from_json(const nlohmann::json& j);

}  // namespace statdisc
