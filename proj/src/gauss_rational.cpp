#include "statdisc/gauss_rational.hpp"

#include <stdexcept>

namespace statdisc {

GaussRational& GaussRational::operator/=(const GaussRational& o) {
    mpq_class n = o.norm2();
    if (sgn(n) == 0) throw std::domain_error("GaussRational: division by zero");
    mpq_class r = (re_ * o.re_ + im_ * o.im_) / n;
    mpq_class i = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

GaussRational GaussRational::parse_real(const std::string& raw) {
    const std::string text = !raw.empty() && raw[0] == '+' ? raw.substr(1) : raw;
    if (text.empty()) throw std::invalid_argument("empty number");
    if (text.find('/') != std::string::npos) {
        mpq_class q(text, 10);  // base 0 would read a leading 0 as octal
        q.canonicalize();
        return GaussRational(q);
    }
    if (text.find_first_of(".eE") == std::string::npos) return GaussRational(mpq_class(text, 10));
    // Decimal literal, read exactly as a fraction of a power of ten.
    std::string mant = text;
    long exp10 = 0;
    if (auto e = mant.find_first_of("eE"); e != std::string::npos) {
        exp10 = std::stol(mant.substr(e + 1));
        mant = mant.substr(0, e);
    }
    if (auto dot = mant.find('.'); dot != std::string::npos) {
        exp10 -= static_cast<long>(mant.size() - dot - 1);
        mant.erase(dot, 1);
    }
    mpz_class num(mant, 10);
    mpz_class ten = 10, scale;
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    mpq_class q = exp10 < 0 ? mpq_class(num, scale) : mpq_class(num * scale);
    q.canonicalize();
    return GaussRational(q);
}

std::string GaussRational::str() const {
    if (sgn(im_) == 0) return re_.get_str();
    if (sgn(re_) == 0) return im_.get_str() + "i";
    std::string s = re_.get_str();
    if (sgn(im_) > 0) s += "+";
    return s + im_.get_str() + "i";
}

}  // namespace statdisc
