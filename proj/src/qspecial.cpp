#include "qzw/qspecial.hpp"

#include "qzw/error.hpp"

#include <cfloat>
#include <cmath>
#include <string>
#include <vector>

namespace qzw {

namespace {

constexpr double kPoleGuard = 1e-13;
constexpr int kMaxSeriesTerms = 200000;

bool factor_vanishes(cplx l, double qj)
{
    const cplx f = 1.0 - l * qj;
    return std::abs(f) <= kPoleGuard * std::max(1.0, std::abs(l * qj));
}

// Compensated summation carried out in scaled arithmetic.
struct KahanScaled {
    Scaled sum;
    Scaled carry;
    void add(const Scaled& t)
    {
        const Scaled y = t - carry;
        const Scaled s = sum + y;
        carry = (s - sum) - y;
        sum = s;
    }
};

} // namespace

QBase::QBase(double q) : q_(q), log_q_(0.0)
{
    if (!(q > 0.0 && q < 1.0)) {
        fail(ErrorCode::InvalidArgument, "q must lie in (0,1), got " + std::to_string(q));
    }
    log_q_ = std::log(q);
}

double QBase::pow(std::int64_t m) const
{
    return std::pow(q_, static_cast<double>(m));
}

cplx qpochhammer_finite(cplx a, int n, const QBase& q)
{
    if (n < 0) fail(ErrorCode::InvalidArgument, "qpochhammer_finite needs n >= 0");
    cplx p(1.0, 0.0);
    double qm = 1.0;
    for (int m = 0; m < n; ++m) {
        p *= 1.0 - a * qm;
        qm *= q.value();
    }
    return p;
}

Scaled qpochhammer_finite_scaled(cplx a, int n, const QBase& q)
{
    if (n < 0) fail(ErrorCode::InvalidArgument, "qpochhammer_finite needs n >= 0");
    Scaled out(1.0);
    cplx acc(1.0, 0.0);
    double qm = 1.0;
    for (int m = 0; m < n; ++m) {
        acc *= 1.0 - a * qm;
        qm *= q.value();
        const double mag = std::abs(acc.real()) + std::abs(acc.imag());
        if (mag > 1e150 || mag < 1e-150) {
            out *= Scaled(acc);
            acc = 1.0;
        }
    }
    out *= Scaled(acc);
    return out;
}

ScaledSeries qpochhammer_infinite_scaled(cplx a, const QBase& q, double tol)
{
    if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
    ScaledSeries r;
    r.value = Scaled(1.0);
    const double aa = std::abs(a);
    if (aa == 0.0) return r;

    cplx acc(1.0, 0.0);
    double qm = 1.0;
    for (int m = 0;; ++m) {
        const cplx f = 1.0 - a * qm;
        if (f == cplx(0.0, 0.0)) {
            r.value = Scaled();
            r.terms_used = m + 1;
            return r;
        }
        if (std::abs(f) < 10.0 * DBL_EPSILON) r.near_zero_warning = true;
        acc *= f;
        const double mag = std::abs(acc.real()) + std::abs(acc.imag());
        if (mag > 1e150 || mag < 1e-150) {
            r.value *= Scaled(acc);
            acc = 1.0;
        }
        qm *= q.value();
        const double x = aa * qm;
        if (x <= 0.5) {
            const double rel = std::expm1(2.0 * x / (1.0 - q.value()));
            if (rel <= tol) {
                r.value *= Scaled(acc);
                r.rel_error_bound = rel;
                r.terms_used = m + 1;
                return r;
            }
        }
        if (m > kMaxSeriesTerms) fail(ErrorCode::Nonconvergent, "infinite product did not settle");
    }
}

SeriesResult qpochhammer_infinite(cplx a, const QBase& q, double tol)
{
    const ScaledSeries s = qpochhammer_infinite_scaled(a, q, tol);
    SeriesResult r;
    r.value = s.value.value();
    r.abs_error_bound = s.rel_error_bound * std::abs(r.value);
    r.terms_used = s.terms_used;
    r.near_zero_warning = s.near_zero_warning;
    return r;
}

Scaled theta_q_scaled(cplx u, const QBase& q, double tol)
{
    if (u == cplx(0.0, 0.0)) fail(ErrorCode::ZeroArgument, "theta_q at u = 0");
    return qpochhammer_infinite_scaled(u, q, tol).value *
           qpochhammer_infinite_scaled(q.value() / u, q, tol).value;
}

SeriesResult theta_q(cplx u, const QBase& q, double tol)
{
    if (u == cplx(0.0, 0.0)) fail(ErrorCode::ZeroArgument, "theta_q at u = 0");
    const ScaledSeries a = qpochhammer_infinite_scaled(u, q, tol);
    const ScaledSeries b = qpochhammer_infinite_scaled(q.value() / u, q, tol);
    SeriesResult r;
    r.value = (a.value * b.value).value();
    r.abs_error_bound = (a.rel_error_bound + b.rel_error_bound + a.rel_error_bound * b.rel_error_bound) *
                        std::abs(r.value);
    r.terms_used = a.terms_used + b.terms_used;
    r.near_zero_warning = a.near_zero_warning || b.near_zero_warning;
    return r;
}

int termination_index(cplx a, const QBase& q)
{
    const double aa = std::abs(a);
    if (aa < 1.0 - 1e-12 || std::abs(a.imag()) > 1e-12 * aa || a.real() <= 0.0) return -1;
    const double kf = -std::log(a.real()) / q.log_q();
    const long k = std::lround(kf);
    if (k < 0 || k > kMaxSeriesTerms) return -1;
    const double target = q.pow(-k);
    if (std::abs(a - target) <= 1e-12 * target) return static_cast<int>(k);
    return -1;
}

ScaledSeries basic_series(std::span<const cplx> upper, std::span<const cplx> lower, cplx z,
                          const QBase& q, double tol)
{
    if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
    const bool is_21 = upper.size() == 2 && lower.size() == 1;
    const ErrorCode pole_code = is_21 ? ErrorCode::PoleInC : ErrorCode::PoleInDenominator;

    int stop = -1;
    for (const cplx& u : upper) {
        const int k = termination_index(u, q);
        if (k >= 0 && (stop < 0 || k < stop)) stop = k;
    }
    if (z == cplx(0.0, 0.0)) stop = 0;

    ScaledSeries r;
    KahanScaled acc;
    Scaled term(1.0);
    const double qv = q.value();

    if (stop >= 0) {
        double qn = 1.0;
        for (int n = 0; n <= stop; ++n) {
            acc.add(term);
            if (n == stop) break;
            cplx ratio = z / (1.0 - qn * qv);
            for (const cplx& u : upper) ratio *= 1.0 - u * qn;
            for (const cplx& l : lower) {
                if (factor_vanishes(l, qn)) {
                    fail(pole_code, "lower parameter hits q^{-" + std::to_string(n) + "} before termination");
                }
                ratio /= 1.0 - l * qn;
            }
            term *= Scaled(ratio);
            qn *= qv;
        }
        r.value = acc.sum;
        r.terms_used = stop + 1;
        return r;
    }

    if (std::abs(z) >= 1.0) {
        fail(ErrorCode::Nonconvergent, "non-terminating series with |Z| >= 1");
    }

    double qn = 1.0;
    for (int n = 0; n < kMaxSeriesTerms; ++n) {
        acc.add(term);
        cplx ratio = z / (1.0 - qn * qv);
        for (const cplx& u : upper) ratio *= 1.0 - u * qn;
        for (const cplx& l : lower) {
            if (factor_vanishes(l, qn)) {
                fail(pole_code, "lower parameter hits q^{-" + std::to_string(n) + "}");
            }
            ratio /= 1.0 - l * qn;
        }
        term *= Scaled(ratio);
        qn *= qv;
        if (term.is_zero()) {
            r.value = acc.sum;
            r.terms_used = n + 1;
            return r;
        }
        // sup of |ratio_j| for j >= n+1 is below rho.
        double rho = std::abs(z) / (1.0 - qn * qv);
        bool usable = true;
        for (const cplx& u : upper) rho *= 1.0 + std::abs(u) * qn;
        for (const cplx& l : lower) {
            const double s = std::abs(l) * qn;
            if (s >= 1.0) {
                usable = false;
                break;
            }
            rho /= 1.0 - s;
        }
        if (usable && rho < 1.0) {
            const double log_sum = acc.sum.log_abs();
            const double log_tail = term.log_abs() - std::log1p(-rho);
            if (log_tail <= std::log(tol) + log_sum) {
                r.value = acc.sum;
                r.rel_error_bound = std::exp(log_tail - log_sum);
                r.terms_used = n + 1;
                return r;
            }
        }
    }
    fail(ErrorCode::Nonconvergent, "series did not reach tolerance");
}

SeriesResult phi21(cplx a, cplx b, cplx c, cplx z, const QBase& q, double tol)
{
    const cplx up[2] = {a, b};
    const cplx lo[1] = {c};
    const ScaledSeries s = basic_series(up, lo, z, q, tol);
    SeriesResult r;
    r.value = s.value.value();
    r.abs_error_bound = s.rel_error_bound * std::abs(r.value);
    r.terms_used = s.terms_used;
    return r;
}

ScaledSeries phi32_scaled(cplx a, cplx b, cplx c, cplx d, cplx e, cplx z, const QBase& q, double tol)
{
    const cplx up[3] = {a, b, c};
    const cplx lo[2] = {d, e};
    return basic_series(up, lo, z, q, tol);
}

SeriesResult phi32(cplx a, cplx b, cplx c, cplx d, cplx e, cplx z, const QBase& q, double tol)
{
    const ScaledSeries s = phi32_scaled(a, b, c, d, e, z, q, tol);
    SeriesResult r;
    r.value = s.value.value();
    r.abs_error_bound = s.rel_error_bound * std::abs(r.value);
    r.terms_used = s.terms_used;
    return r;
}

std::pair<Scaled, Scaled> phi32_transform_iii11(int n, cplx b, cplx c, cplx d, cplx e, const QBase& q)
{
    if (n < 0) fail(ErrorCode::InvalidArgument, "n must be nonnegative");
    const double qn = q.pow(-n);
    const cplx qv(q.value(), 0.0);
    const Scaled lhs = phi32_scaled(qn, b * qn, c * qn, d * qn, e * qn, qv, q).value;

    const cplx de_bc = d * e / (b * c);
    Scaled pref = qpochhammer_finite_scaled(de_bc, n, q);
    pref *= Scaled(b * c / d).pow(n);
    pref *= Scaled::from_parts(1.0, 0) / Scaled(q.value()).pow(n * n);
    const Scaled den = qpochhammer_finite_scaled(e * qn, n, q);
    if (den.is_zero()) fail(ErrorCode::PoleInDenominator, "(E q^{-n};q)_n vanishes");
    pref /= den;
    const Scaled rhs = pref * phi32_scaled(qn, d / b, d / c, d * qn, de_bc, qv, q).value;
    return {lhs, rhs};
}

std::pair<Scaled, Scaled> pochhammer_reflection(cplx e, int n, const QBase& q)
{
    const Scaled lhs = qpochhammer_finite_scaled(e * q.pow(-n), n, q);
    Scaled rhs = Scaled(e).pow(n) * qpochhammer_finite_scaled(q.value() / e, n, q);
    if (n % 2 != 0) rhs = -rhs;
    rhs /= Scaled(q.value()).pow(n * (n + 1) / 2);
    return {lhs, rhs};
}

} // namespace qzw
