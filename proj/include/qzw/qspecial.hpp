#pragma once

#include "qzw/scaled.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <utility>

namespace qzw {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-14;

class QBase {
public:
    explicit QBase(double q);
    double value() const { return q_; }
    double pow(std::int64_t m) const;
    double log_q() const { return log_q_; }

private:
    double q_;
    double log_q_;
};

struct SeriesResult {
    cplx value{1.0, 0.0};
    double abs_error_bound = 0.0;
    int terms_used = 0;
    bool near_zero_warning = false;
};

struct ScaledSeries {
    Scaled value;
    double rel_error_bound = 0.0;
    int terms_used = 0;
    bool near_zero_warning = false;
};

cplx qpochhammer_finite(cplx a, int n, const QBase& q);
Scaled qpochhammer_finite_scaled(cplx a, int n, const QBase& q);

SeriesResult qpochhammer_infinite(cplx a, const QBase& q, double tol = kDefaultTol);
ScaledSeries qpochhammer_infinite_scaled(cplx a, const QBase& q, double tol = kDefaultTol);

// theta_q(u) = (u;q)_inf (q/u;q)_inf
SeriesResult theta_q(cplx u, const QBase& q, double tol = kDefaultTol);
Scaled theta_q_scaled(cplx u, const QBase& q, double tol = kDefaultTol);

// k >= 0 when a == q^{-k} up to rounding, otherwise -1.
int termination_index(cplx a, const QBase& q);

// Balanced series sum_n prod (U;q)_n / (prod (L;q)_n (q;q)_n) Z^n.
ScaledSeries basic_series(std::span<const cplx> upper, std::span<const cplx> lower, cplx z,
                          const QBase& q, double tol = kDefaultTol);

SeriesResult phi21(cplx a, cplx b, cplx c, cplx z, const QBase& q, double tol = kDefaultTol);
SeriesResult phi32(cplx a, cplx b, cplx c, cplx d, cplx e, cplx z, const QBase& q,
                   double tol = kDefaultTol);
ScaledSeries phi32_scaled(cplx a, cplx b, cplx c, cplx d, cplx e, cplx z, const QBase& q,
                          double tol = kDefaultTol);

// Both sides of the (III.11) transformation of a terminating 3phi2.
std::pair<Scaled, Scaled> phi32_transform_iii11(int n, cplx b, cplx c, cplx d, cplx e,
                                                const QBase& q);

// (E q^{-n};q)_n against E^n (-1)^n q^{-n(n+1)/2} (q/E;q)_n.
std::pair<Scaled, Scaled> pochhammer_reflection(cplx e, int n, const QBase& q);

} // namespace qzw
