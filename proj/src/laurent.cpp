#include "statdisc/laurent.hpp"

#include <Eigen/Dense>

namespace statdisc::detail {

namespace {

// Clears common denominators and content so coefficient size stays bounded
// through the recursion; positive real scalings do not move roots.
void normalize(std::vector<GaussRational>& p) {
    mpz_class den = 1;
    for (const auto& c : p) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.re().get_den_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.im().get_den_mpz_t());
    }
    mpz_class g = 0;
    std::vector<std::pair<mpz_class, mpz_class>> ints;
    ints.reserve(p.size());
    for (const auto& c : p) {
        mpz_class re = c.re().get_num() * (den / c.re().get_den());
        mpz_class im = c.im().get_num() * (den / c.im().get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), re.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), im.get_mpz_t());
        ints.emplace_back(std::move(re), std::move(im));
    }
    if (g == 0) return;
    for (size_t k = 0; k < p.size(); ++k)
        p[k] = GaussRational(mpq_class(ints[k].first / g), mpq_class(ints[k].second / g));
}

void trim(std::vector<GaussRational>& p) {
    while (p.size() > 1 && p.back().is_zero()) p.pop_back();
}

}  // namespace

int schur_cohn_inside(std::vector<GaussRational> p) {
    trim(p);
    if (p.empty() || p[0].is_zero()) throw Error(ErrorKind::Internal, "schur_cohn_inside needs p(0) != 0");
    // Inside-count of the current polynomial equals sign * count(p_k) + offset.
    int offset = 0, sign = 1;
    normalize(p);
    while (p.size() > 1) {
        const size_t n = p.size() - 1;
        const GaussRational a0c = p[0].conj();
        const GaussRational an = p[n];
        std::vector<GaussRational> t(n);
        // T p = conj(a0) p - a_n p*, then divide by zeta (the top term cancels).
        for (size_t k = 0; k < n; ++k) t[k] = a0c * p[k] - an * p[n - k].conj();
        const mpq_class delta = t[0].re();
        if (sgn(delta) == 0) return -1;
        // The division by zeta: T p has zero z^n coefficient; the recursion
        // runs on T p itself (degree <= n-1, constant term delta).
        trim(t);
        if (sgn(delta) < 0) {
            // count(p) = n - count(Tp)
            offset += sign * static_cast<int>(n);
            sign = -sign;
        }
        p = std::move(t);
        normalize(p);
    }
    return offset;
}

int root_count_inside(const std::vector<GaussRational>& p) {
    size_t n = p.size() - 1;
    while (n > 0 && p[n].is_zero()) --n;
    if (n == 0) return 0;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const cplx lead = p[n].to_complex();
    for (size_t k = 0; k < n; ++k) {
        companion(0, static_cast<Eigen::Index>(k)) = -p[n - 1 - k].to_complex() / lead;
        if (k + 1 < n) companion(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    int inside = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double r = std::abs(es.eigenvalues()(k));
        if (std::abs(r - 1.0) < 1e-7) throw Error(ErrorKind::VanishingSymbol, "root on the unit circle");
        if (r < 1.0) ++inside;
    }
    return inside;
}

int float_winding(const FloatLaurent& p, int samples, double rel_margin) {
    std::vector<cplx> vals(static_cast<size_t>(samples));
    double max_mod = 0.0, min_mod = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        vals[static_cast<size_t>(k)] = p(std::polar(1.0, 2.0 * std::numbers::pi * k / samples));
        const double m = std::abs(vals[static_cast<size_t>(k)]);
        max_mod = std::max(max_mod, m);
        min_mod = std::min(min_mod, m);
    }
    if (!(min_mod > rel_margin * max_mod))
        throw Error(ErrorKind::VanishingSymbol, "symbol (numerically) vanishes on the unit circle");
    double total = 0.0;
    for (int k = 0; k < samples; ++k)
        total += std::arg(vals[static_cast<size_t>((k + 1) % samples)] / vals[static_cast<size_t>(k)]);
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace statdisc::detail
