#pragma once

// Shared fixtures for the test binaries.

#include <cmath>
#include <random>
#include <utility>

#include "statdisc/model.hpp"

namespace statdisc::testing {

inline GaussRational rat(long p, long q) { return GaussRational(mpq_class(p, q)); }

inline Model toy_model() {
    return Model(HomogPoly(4, 2, {{2, GaussRational(1)}}, "P1"), HomogPoly(6, 3, {{3, GaussRational(1)}}, "P2"));
}

/// sup over the circle of |mixed second derivative| relative to its minimum; a
/// float screen used only to draw models away from the Laplacian boundary.
inline double laplacian_margin(int d, const std::map<int, GaussRational>& alpha) {
    double lo = 1e300, hi = 0.0;
    for (int s = 0; s < 720; ++s) {
        const double t = 2.0 * std::numbers::pi * s / 720;
        double q = 0.0;
        for (const auto& [j, a] : alpha)
            q += j * (d - j) * (a.to_complex() * std::polar(1.0, (2 * j - d) * t)).real();
        lo = std::min(lo, std::abs(q));
        hi = std::max(hi, std::abs(q));
    }
    return lo / hi;
}

/// A reality-constrained P of even degree d with a nowhere-vanishing Laplacian.
inline HomogPoly random_homog(std::mt19937& rng, int d) {
    std::uniform_int_distribution<int> kdist(d / 2, d - 1), small(-2, 2), centre(3, 9), sign(0, 1);
    while (true) {
        const int k = kdist(rng);
        std::map<int, GaussRational> alpha;
        const int s = sign(rng) ? 1 : -1;
        alpha[d / 2] = GaussRational(s * centre(rng) * 4);
        for (int j = k; 2 * j > d; --j) {
            GaussRational a(mpq_class(small(rng)), mpq_class(small(rng)));
            if (j == k && a.is_zero()) a = GaussRational(1);
            alpha[j] = a;
            alpha[d - j] = a.conj();
        }
        if (laplacian_margin(d, alpha) < 0.05) continue;
        return HomogPoly(d, k, alpha);
    }
}

inline Model random_model(std::mt19937& rng) {
    std::uniform_int_distribution<int> half(1, 3);
    int a = 2 * half(rng), b = 2 * half(rng);
    if (a > b) std::swap(a, b);
    return Model(random_homog(rng, a), random_homog(rng, b));
}

inline std::pair<GaussRational, GaussRational> random_multipliers(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    while (true) {
        GaussRational c1(mpq_class(num(rng), den(rng))), c2(mpq_class(num(rng), den(rng)));
        if (!c1.is_zero() && !c2.is_zero()) return {c1, c2};
    }
}

}  // namespace statdisc::testing
