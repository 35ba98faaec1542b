#pragma once

// Exact complex numbers with rational real and imaginary parts.

#include <complex>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace statdisc {

class GaussRational {
public:
    GaussRational() = default;
    GaussRational(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
    GaussRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    /// Exact conversion: every finite double is a dyadic rational.
    static GaussRational from_double(double re, double im = 0.0) {
        return GaussRational(mpq_class(re), mpq_class(im));
    }
    /// Parses "p/q", "p", or a decimal literal.
    static GaussRational parse_real(const std::string& text);

    static GaussRational i() { return GaussRational(0, 1); }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    GaussRational conj() const { return GaussRational(re_, -im_); }
    mpq_class norm2() const { return re_ * re_ + im_ * im_; }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    GaussRational& operator+=(const GaussRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussRational& operator-=(const GaussRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussRational& operator*=(const GaussRational& o) {
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    GaussRational& operator/=(const GaussRational& o);

    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
    friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
    friend GaussRational operator-(const GaussRational& a) { return GaussRational(-a.re_, -a.im_); }

    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const GaussRational& q) { return os << q.str(); }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

}  // namespace statdisc
