#pragma once

// First-order forward-mode jets: a value together with its partial
// derivatives with respect to N independent inputs. With T a Laurent
// polynomial this is exact symbolic differentiation along a disc.

#include <array>

namespace statdisc {

template <typename T, int N>
struct Jet {
    T value{};
    std::array<T, N> grad{};

    Jet() = default;
    Jet(const T& v) : value(v) {}  // NOLINT(google-explicit-constructor)

    static Jet variable(const T& v, int index) {
        Jet j(v);
        j.grad[static_cast<size_t>(index)] = T(1L);
        return j;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r(a.value + b.value);
        for (int k = 0; k < N; ++k) r.grad[k] = a.grad[k] + b.grad[k];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r(a.value - b.value);
        for (int k = 0; k < N; ++k) r.grad[k] = a.grad[k] - b.grad[k];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.value * b.value);
        for (int k = 0; k < N; ++k) r.grad[k] = a.grad[k] * b.value + a.value * b.grad[k];
        return r;
    }
    template <typename S>
    friend Jet operator*(const Jet& a, const S& s) {
        Jet r(a.value * s);
        for (int k = 0; k < N; ++k) r.grad[k] = a.grad[k] * s;
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet r(a.value / b.value);
        for (int k = 0; k < N; ++k) r.grad[k] = (a.grad[k] - r.value * b.grad[k]) / b.value;
        return r;
    }
};

}  // namespace statdisc
