#pragma once

#include <complex>
#include <cstdint>

namespace qzw {

// Complex number stored as mantissa * 2^exp2 with max(|re|,|im|) in [0.5, 1).
// Keeps products of hundreds of factors like q^{N(N-1)/2} representable.
class Scaled {
public:
    Scaled() = default;
    Scaled(std::complex<double> v); // NOLINT(google-explicit-constructor)
    Scaled(double v) : Scaled(std::complex<double>(v, 0.0)) {} // NOLINT

    static Scaled from_parts(std::complex<double> mant, std::int64_t exp2);

    std::complex<double> mantissa() const { return mant_; }
    std::int64_t exponent() const { return exp2_; }
    bool is_zero() const { return mant_ == std::complex<double>(0.0, 0.0); }

    std::complex<double> value() const;
    double real() const { return value().real(); }
    double log_abs() const;

    Scaled conj() const { return from_parts(std::conj(mant_), exp2_); }
    Scaled sqrt() const;
    Scaled pow(int n) const;

    Scaled& operator*=(const Scaled& o);
    Scaled& operator/=(const Scaled& o);
    Scaled& operator+=(const Scaled& o);
    Scaled& operator-=(const Scaled& o);
    Scaled operator-() const { return from_parts(-mant_, exp2_); }

    friend Scaled operator*(Scaled a, const Scaled& b) { return a *= b; }
    friend Scaled operator/(Scaled a, const Scaled& b) { return a /= b; }
    friend Scaled operator+(Scaled a, const Scaled& b) { return a += b; }
    friend Scaled operator-(Scaled a, const Scaled& b) { return a -= b; }

private:
    void normalize();

    std::complex<double> mant_{0.0, 0.0};
    std::int64_t exp2_ = 0;
};

} // namespace qzw
