#include "qzw/pbqj.hpp"

#include "qzw/error.hpp"

#include <array>
#include <cmath>
#include <deque>
#include <utility>

namespace qzw {

namespace {

bool is_real(cplx z)
{
    return std::abs(z.imag()) <= 1e-14 * std::abs(z);
}

struct KahanC {
    cplx s{0.0, 0.0};
    cplx c{0.0, 0.0};
    void add(cplx t)
    {
        const cplx y = t - c;
        const cplx u = s + y;
        c = (u - s) - y;
        s = u;
    }
};

double real_part_checked(const Scaled& v, const char* what)
{
    const cplx z = v.value();
    if (std::abs(z.imag()) > 1e-10 * std::abs(z) && std::abs(z) > 0.0) {
        fail(ErrorCode::InvalidParams, std::string(what) + " has a non-negligible imaginary part");
    }
    return z.real();
}

} // namespace

const char* to_string(PairKind k)
{
    switch (k) {
    case PairKind::ConjugatePair: return "conjugate_pair";
    case PairKind::RealGap: return "real_gap";
    case PairKind::RealOnLattice: return "real_on_lattice";
    case PairKind::Other: return "other";
    }
    return "other";
}

PairKind classify_pair(cplx a, cplx b, const LatticeParams& lp)
{
    if (a == 0.0 || b == 0.0) return PairKind::Other;
    if (!is_real(a) && !is_real(b)) {
        if (std::abs(b - std::conj(a)) <= 1e-12 * std::abs(a)) return PairKind::ConjugatePair;
        return PairKind::Other;
    }
    if (!is_real(a) || !is_real(b)) return PairKind::Other;
    const double ia = 1.0 / a.real();
    const double ib = 1.0 / b.real();
    if (lp.locate(ia) || lp.locate(ib)) return PairKind::RealOnLattice;
    if ((ia > 0.0) != (ib > 0.0)) return PairKind::Other;
    const Branch br = ia > 0.0 ? Branch::Plus : Branch::Minus;
    auto gap = [&](double v) {
        return std::floor(std::log(std::abs(v) / std::abs(lp.zeta(br))) / lp.q().log_q());
    };
    return gap(ia) == gap(ib) ? PairKind::RealGap : PairKind::Other;
}

PBQJParams::PBQJParams(cplx a_, cplx b_, cplx c_, cplx d_, LatticeParams lp)
    : a(a_), b(b_), c(c_), d(d_), lattice(std::move(lp))
{
    if (a == 0.0 || b == 0.0 || c == 0.0 || d == 0.0) {
        fail(ErrorCode::InvalidParams, "pseudo big q-Jacobi parameters must be nonzero");
    }
}

PBQJParams PBQJParams::shifted(int c_shift, int d_shift) const
{
    return PBQJParams(a, b, c * q().pow(c_shift), d * q().pow(d_shift), lattice);
}

DegreeBound n_max(const PBQJParams& p)
{
    DegreeBound out;
    const cplx ratio = p.c * p.d * p.q().value() / (p.a * p.b);
    if (!is_real(ratio)) fail(ErrorCode::InvalidParams, "cdq/(ab) must be real");
    if (ratio.real() < 0.0) {
        out.n_max = kUnboundedDegree;
        return out;
    }
    if (ratio.real() <= 1.0) {
        out.n_max = -1;
        out.near_boundary = std::abs(ratio.real() - 1.0) < 1e-9;
        return out;
    }
    // cdq/(ab) > q^{-2n}  <=>  n < v
    const double v = std::log(ratio.real()) / (-2.0 * p.q().log_q());
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-9) {
        out.near_boundary = true;
        out.n_max = static_cast<int>(r) - 1;
    } else {
        out.n_max = static_cast<int>(std::ceil(v)) - 1;
    }
    return out;
}

Scaled weight_w_complex(cplx x, cplx abs_x, cplx a, cplx b, cplx c, cplx d, const QBase& q, double tol)
{
    Scaled out(abs_x);
    const double ax = std::abs(x);
    const double big = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    const double sum = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
    cplx acc(1.0, 0.0);
    double qm = 1.0;
    for (int m = 0; m < 200000; ++m) {
        const cplx xm = x * qm;
        const cplx den = (1.0 - c * xm) * (1.0 - d * xm);
        const cplx num = (1.0 - a * xm) * (1.0 - b * xm);
        if (std::abs(den) <= 1e-300 || std::abs(1.0 - c * xm) <= 1e-14 || std::abs(1.0 - d * xm) <= 1e-14) {
            fail(ErrorCode::PoleAtPoint, "weight denominator vanishes on the lattice");
        }
        if (num == cplx(0.0, 0.0)) return Scaled();
        acc *= num / den;
        const double mag = std::abs(acc.real()) + std::abs(acc.imag());
        if (mag > 1e150 || mag < 1e-150) {
            out *= Scaled(acc);
            acc = 1.0;
        }
        qm *= q.value();
        const double s = ax * qm;
        if (big * s <= 0.5 && std::expm1(2.0 * sum * s / (1.0 - q.value())) <= tol) {
            out *= Scaled(acc);
            return out;
        }
    }
    fail(ErrorCode::Nonconvergent, "weight product did not settle");
}

Scaled weight_w_scaled(const LatticePoint& x, const PBQJParams& p, double tol)
{
    const double v = p.lattice.value(x);
    return weight_w_complex(v, std::abs(v), p.a, p.b, p.c, p.d, p.q(), tol);
}

double weight_w(const LatticePoint& x, const PBQJParams& p, double tol)
{
    return real_part_checked(weight_w_scaled(x, p, tol), "weight");
}

Scaled pbqj_eval_scaled(int n, cplx x, const PBQJParams& p)
{
    if (n < 0) fail(ErrorCode::InvalidArgument, "degree must be nonnegative");
    const double qq = p.q().value();
    const double qn = p.q().pow(-n);
    // order the lower parameters canonically so a <-> b is an exact symmetry
    cplx lo1 = p.c * qq / p.b, lo2 = p.c * qq / p.a;
    if (std::make_pair(lo1.real(), lo1.imag()) > std::make_pair(lo2.real(), lo2.imag())) std::swap(lo1, lo2);
    return phi32_scaled(qn, p.c * p.d / (p.a * p.b) * p.q().pow(n + 1), p.c * x, lo1, lo2, qq, p.q()).value;
}

Scaled pbqj_divided_difference_scaled(int n, cplx x, cplx y, const PBQJParams& p)
{
    if (n < 0) fail(ErrorCode::InvalidArgument, "degree must be nonnegative");
    const QBase& q = p.q();
    const double qq = q.value();
    const cplx up = p.c * p.d / (p.a * p.b) * q.pow(n + 1);
    const cplx lo1 = p.c * qq / p.b, lo2 = p.c * qq / p.a;
    // term k is A_k (cx;q)_k; D_k = ((cy;q)_k - (cx;q)_k) / (y - x) by the product rule
    Scaled a(1.0), px(1.0), d, sum;
    for (int k = 0; k <= n; ++k) {
        sum += a * d;
        const double qk = q.pow(k);
        d = d * Scaled(1.0 - p.c * y * qk) + px * Scaled(-p.c * qk);
        px *= Scaled(1.0 - p.c * x * qk);
        const cplx den = (1.0 - lo1 * qk) * (1.0 - lo2 * qk) * (1.0 - qk * qq);
        if (k < n && std::abs(den) == 0.0) fail(ErrorCode::PoleInDenominator, "divided difference hits a pole");
        a *= Scaled((1.0 - q.pow(k - n)) * (1.0 - up * qk) * qq / den);
    }
    return sum;
}

cplx pbqj_eval(int n, cplx x, const PBQJParams& p)
{
    return pbqj_eval_scaled(n, x, p).value();
}

cplx big_qjacobi_eval(int n, cplx u, cplx a, cplx b, cplx c, const QBase& q)
{
    if (n < 0) fail(ErrorCode::InvalidArgument, "degree must be nonnegative");
    return phi32(q.pow(-n), a * b * q.pow(n + 1), u, a * q.value(), c * q.value(), q.value(), q).value;
}

Scaled leading_coeff_scaled(int n, const PBQJParams& p)
{
    if (n < 0) fail(ErrorCode::InvalidArgument, "degree must be nonnegative");
    const QBase& q = p.q();
    Scaled k = Scaled(p.c).pow(n);
    k *= qpochhammer_finite_scaled(p.c * p.d * q.pow(n + 1) / (p.a * p.b), n, q);
    const Scaled den = qpochhammer_finite_scaled(p.c * q.value() / p.b, n, q) *
                       qpochhammer_finite_scaled(p.c * q.value() / p.a, n, q);
    if (den.is_zero()) fail(ErrorCode::PoleInDenominator, "leading coefficient has a vanishing denominator");
    return k / den;
}

cplx leading_coeff(int n, const PBQJParams& p)
{
    return leading_coeff_scaled(n, p).value();
}

Scaled norm_h0_scaled(const PBQJParams& p)
{
    const QBase& q = p.q();
    const double qq = q.value();
    const double zm = p.lattice.zeta_minus();
    const double zp = p.lattice.zeta_plus();
    auto pinf = [&](cplx z) { return qpochhammer_infinite_scaled(z, q).value; };
    auto th = [&](cplx z) { return theta_q_scaled(z, q); };
    Scaled h(zp);
    h *= pinf(qq) * pinf(p.a / p.c) * pinf(p.a / p.d) * pinf(p.b / p.c) * pinf(p.b / p.d);
    const Scaled den0 = pinf(p.a * p.b / (qq * p.c * p.d));
    if (den0.is_zero()) fail(ErrorCode::InvalidParams, "(ab/(qcd);q)_inf vanishes");
    h /= den0;
    h *= th(zm / zp) * th(p.c * p.d * zm * zp);
    const Scaled den = th(p.c * zm) * th(p.d * zm) * th(p.c * zp) * th(p.d * zp);
    if (den.is_zero()) fail(ErrorCode::PoleAtPoint, "theta denominator vanishes");
    return h / den;
}

Scaled norm_h_scaled(int n, const PBQJParams& p)
{
    if (n < 0) fail(ErrorCode::InvalidArgument, "degree must be nonnegative");
    const DegreeBound nb = n_max(p);
    if (n > nb.n_max) {
        fail(ErrorCode::InvalidArgument, "degree " + std::to_string(n) + " exceeds n_max " + std::to_string(nb.n_max));
    }
    const QBase& q = p.q();
    const double qq = q.value();
    const cplx t = p.c * p.d / (p.a * p.b);
    Scaled r = norm_h0_scaled(p);
    if (n == 0) return r;
    r *= Scaled(p.c * p.c / (p.a * p.b)).pow(n);
    r *= Scaled(qq).pow(n * (n - 1) / 2 + 2 * n);
    if (n % 2 != 0) r = -r;
    r *= qpochhammer_finite_scaled(qq, n, q) * qpochhammer_finite_scaled(qq * p.d / p.a, n, q) *
         qpochhammer_finite_scaled(qq * p.d / p.b, n, q);
    r /= qpochhammer_finite_scaled(qq * t, n, q) * qpochhammer_finite_scaled(qq * p.c / p.a, n, q) *
         qpochhammer_finite_scaled(qq * p.c / p.b, n, q);
    r *= Scaled(1.0 - qq * t) / Scaled(1.0 - q.pow(2 * n + 1) * t);
    return r;
}

cplx norm_h(int n, const PBQJParams& p)
{
    return norm_h_scaled(n, p).value();
}

Scaled monic_norm_scaled(int n, const PBQJParams& p)
{
    const Scaled k = leading_coeff_scaled(n, p);
    const Scaled v = norm_h_scaled(n, p) / (k * k);
    const cplx m = v.mantissa();
    if (std::abs(m.imag()) > 1e-10 * std::abs(m)) {
        fail(ErrorCode::InvalidParams, "monic norm is not real");
    }
    if (m.real() <= 0.0) fail(ErrorCode::InvalidParams, "monic norm is not positive");
    return Scaled::from_parts(cplx(m.real(), 0.0), v.exponent());
}

double monic_norm(int n, const PBQJParams& p)
{
    return monic_norm_scaled(n, p).real();
}

LatticeSum sum_branch(const LatticeParams& lp, Branch b, std::int64_t start, int dir,
                      const std::function<cplx(const LatticePoint&)>& f, double rel_tol)
{
    LatticeSum out;
    KahanC acc;
    std::deque<double> ratios;
    double prev = -1.0;
    int zero_run = 0;
    std::int64_t m = start;
    for (int step = 0; step < 20000; ++step, m += dir) {
        const LatticePoint x{b, m};
        const double lx = lp.log_abs(x);
        if (lx < -650.0 || lx > 650.0) break;
        const cplx t = f(x);
        const double a = std::abs(t);
        acc.add(t);
        out.abs_sum += a;
        ++out.points;
        if (a == 0.0) {
            if (++zero_run >= 8) break;
            prev = -1.0;
            ratios.clear();
            continue;
        }
        zero_run = 0;
        if (prev > 0.0) {
            ratios.push_back(a / prev);
            if (ratios.size() > 4) ratios.pop_front();
        }
        prev = a;
        if (ratios.size() == 4) {
            double rho = 0.0;
            for (double r : ratios) rho = std::max(rho, r);
            if (rho < 0.95) {
                const double bound = a * rho / (1.0 - rho);
                if (bound <= rel_tol * out.abs_sum) {
                    out.tail_bound = bound;
                    break;
                }
            }
        }
    }
    out.value = acc.s;
    return out;
}

LatticeSum sum_lattice(const LatticeParams& lp, const std::function<cplx(const LatticePoint&)>& f, double rel_tol)
{
    LatticeSum out;
    cplx total(0.0, 0.0);
    for (Branch b : {Branch::Minus, Branch::Plus}) {
        for (int dir : {+1, -1}) {
            const LatticeSum s = sum_branch(lp, b, dir > 0 ? 0 : -1, dir, f, rel_tol);
            total += s.value;
            out.tail_bound += s.tail_bound;
            out.abs_sum += s.abs_sum;
            out.points += s.points;
        }
    }
    out.value = total;
    return out;
}

InnerProduct orthogonality_check(int m, int n, const PBQJParams& p)
{
    const LatticeSum s = sum_lattice(p.lattice, [&](const LatticePoint& x) {
        const double v = p.lattice.value(x);
        return pbqj_eval(m, v, p) * pbqj_eval(n, v, p) * weight_w(x, p);
    });
    InnerProduct r;
    r.value = s.value;
    r.tail_bound = s.tail_bound;
    r.normalized = std::abs(s.value) / std::sqrt(std::abs(norm_h(m, p)) * std::abs(norm_h(n, p)));
    return r;
}

double ShiftCheck::rel_error() const
{
    const double scale = std::max(std::abs(rhs), 1e-300);
    return std::abs(lhs - rhs) / scale;
}

ShiftCheck backward_shift_check(int n, const LatticePoint& y, const PBQJParams& p)
{
    const DegreeBound nb = n_max(p);
    if (n < 0 || n > nb.n_max) {
        fail(ErrorCode::InvalidArgument, "backward shift needs cdq/(ab) > q^{-2n}");
    }
    const PBQJParams star = p.shifted(-1, -1);
    auto term = [&](const LatticePoint& x) {
        return weight_w(x, star) * pbqj_eval(n + 1, p.lattice.value(x), star);
    };
    ShiftCheck r;
    if (y.positive()) {
        LatticeSum direct;
        for (const LatticeSum& s : {sum_branch(p.lattice, Branch::Minus, 0, +1, term),
                                    sum_branch(p.lattice, Branch::Minus, -1, -1, term),
                                    sum_branch(p.lattice, Branch::Plus, y.m + 1, +1, term)}) {
            direct.value += s.value;
            direct.tail_bound += s.tail_bound;
            direct.abs_sum += s.abs_sum;
        }
        // P*_{n+1} is orthogonal to constants, so the sum also equals minus the
        // sum over x >= y, which avoids cancellation when y is near the top
        const bool orth = n + 1 <= n_max(star).n_max;
        LatticeSum upper;
        if (orth) upper = sum_branch(p.lattice, Branch::Plus, y.m, -1, term);
        const LatticeSum& use = orth && upper.abs_sum < direct.abs_sum ? upper : direct;
        r.lhs = &use == &upper ? -upper.value : direct.value;
        r.tail_bound = use.tail_bound;
        r.abs_terms = use.abs_sum;
    } else {
        const LatticeSum s = sum_branch(p.lattice, Branch::Minus, y.m, -1, term);
        r.lhs = s.value;
        r.tail_bound = s.tail_bound;
        r.abs_terms = s.abs_sum;
    }
    const double yv = p.lattice.value(y);
    r.rhs = p.c * p.q().value() / ((p.b - p.c) * (p.a - p.c)) * weight_w(y, p) * pbqj_eval(n, yv, p) / std::abs(yv);
    return r;
}

ShiftCheck big_qjacobi_shift_check(int n, cplx u, cplx a, cplx b, cplx c, const QBase& q)
{
    const double qq = q.value();
    ShiftCheck r;
    r.lhs = (1.0 - a) * (1.0 - c) * u * big_qjacobi_eval(n + 1, u, a / qq, b / qq, c / qq, q);
    r.rhs = (u - a) * (u - c) * big_qjacobi_eval(n, u, a, b, c, q) -
            a * (u - 1.0) * (b * u - c) * big_qjacobi_eval(n, u * qq, a, b, c, q);
    return r;
}

} // namespace qzw
