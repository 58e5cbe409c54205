#include "qzw/scaled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qzw {

namespace {

std::complex<double> ldexp_c(std::complex<double> z, std::int64_t e)
{
    if (e < -2200) return {0.0, 0.0};
    if (e > 2200) e = 2200;
    const int ei = static_cast<int>(e);
    return {std::ldexp(z.real(), ei), std::ldexp(z.imag(), ei)};
}

} // namespace

Scaled::Scaled(std::complex<double> v) : mant_(v), exp2_(0)
{
    normalize();
}

Scaled Scaled::from_parts(std::complex<double> mant, std::int64_t exp2)
{
    Scaled s;
    s.mant_ = mant;
    s.exp2_ = exp2;
    s.normalize();
    return s;
}

void Scaled::normalize()
{
    const double m = std::max(std::abs(mant_.real()), std::abs(mant_.imag()));
    if (m == 0.0 || !std::isfinite(m)) {
        if (m == 0.0) exp2_ = 0;
        return;
    }
    int e = 0;
    std::frexp(m, &e);
    mant_ = ldexp_c(mant_, -e);
    exp2_ += e;
}

std::complex<double> Scaled::value() const
{
    return ldexp_c(mant_, exp2_);
}

double Scaled::log_abs() const
{
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mant_)) + static_cast<double>(exp2_) * std::log(2.0);
}

Scaled Scaled::sqrt() const
{
    if (is_zero()) return {};
    std::complex<double> m = mant_;
    std::int64_t e = exp2_;
    if (e % 2 != 0) {
        m *= 2.0;
        e -= 1;
    }
    return from_parts(std::sqrt(m), e / 2);
}

Scaled Scaled::pow(int n) const
{
    Scaled result(1.0);
    Scaled base = n >= 0 ? *this : Scaled(1.0) / *this;
    unsigned k = static_cast<unsigned>(n >= 0 ? n : -n);
    while (k) {
        if (k & 1u) result *= base;
        base *= base;
        k >>= 1u;
    }
    return result;
}

Scaled& Scaled::operator*=(const Scaled& o)
{
    mant_ *= o.mant_;
    exp2_ += o.exp2_;
    normalize();
    return *this;
}

Scaled& Scaled::operator/=(const Scaled& o)
{
    mant_ /= o.mant_;
    exp2_ -= o.exp2_;
    normalize();
    return *this;
}

Scaled& Scaled::operator+=(const Scaled& o)
{
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (exp2_ >= o.exp2_) {
        mant_ += ldexp_c(o.mant_, o.exp2_ - exp2_);
    } else {
        mant_ = ldexp_c(mant_, exp2_ - o.exp2_) + o.mant_;
        exp2_ = o.exp2_;
    }
    normalize();
    return *this;
}

Scaled& Scaled::operator-=(const Scaled& o)
{
    return *this += -o;
}

} // namespace qzw
