#include "qzw/limit_kernel.hpp"

#include "qzw/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace qzw {

namespace {

struct Quad {
    cplx a, b, c, d;
};

Quad swapped(const ParamQuadruple& pq, int swap)
{
    Quad p{pq.alpha, pq.beta, pq.gamma, pq.delta};
    if (swap & 1) std::swap(p.a, p.b);
    if (swap & 2) std::swap(p.c, p.d);
    return p;
}

Scaled pinf(cplx a, const QBase& q)
{
    return qpochhammer_infinite_scaled(a, q).value;
}

bool in_q_powers(cplx z, const QBase& q)
{
    const double az = std::abs(z);
    if (az == 0.0 || z.real() <= 0.0 || std::abs(z.imag()) > 1e-12 * az) return false;
    const double k = std::log(z.real()) / q.log_q();
    return std::abs(k - std::round(k)) < 1e-10;
}

// Numerator of the Christoffel-Darboux form for monic p_N, p_{N-1}, divided by (x - y),
// taking the better conditioned of the direct and divided-difference routes.
Scaled cd_numerator(int n, const PBQJParams& poly, cplx x, cplx y, const Scaled& pnx, const Scaled& pmx,
                    const Scaled& pny, const Scaled& pmy, bool same)
{
    const Scaled lc_n = leading_coeff_scaled(n, poly);
    const Scaled lc_m = leading_coeff_scaled(n - 1, poly);
    const Scaled dn = pbqj_divided_difference_scaled(n, x, y, poly) / lc_n;
    const Scaled dm = pbqj_divided_difference_scaled(n - 1, x, y, poly) / lc_m;
    const Scaled v1 = pmx * dn, v2 = pnx * dm;
    const Scaled divided = v1 - v2;
    if (same) return divided;
    const double cond_divided = std::exp(std::max(v1.log_abs(), v2.log_abs()) - divided.log_abs());
    const Scaled u1 = pnx * pmy, u2 = pmx * pny;
    const Scaled direct = u1 - u2;
    const double cond_direct = std::exp(std::max(u1.log_abs(), u2.log_abs()) - direct.log_abs());
    return cond_divided < cond_direct ? divided : direct / Scaled(x - y);
}

} // namespace

int f_swap_choice(int r, const ParamQuadruple& pq)
{
    const QBase& q = pq.q();
    int best = -1;
    double best_z = 1.0;
    for (int s = 0; s < 4; ++s) {
        const Quad p = swapped(pq, s);
        const double z = std::abs(q.pow(r - 1) * p.b / p.c);
        if (z < best_z) {
            best_z = z;
            best = s;
        }
    }
    if (best < 0) {
        fail(ErrorCode::NoConvergentRepresentation,
             "no representation of F_" + std::to_string(r) + " has a convergent 2phi1");
    }
    return best;
}

FPieces f_pieces(int r, cplx y, int sign, const ParamQuadruple& pq, const FOptions& opts)
{
    const QBase& q = pq.q();
    const double qv = q.value();
    if (y == cplx(0.0, 0.0)) fail(ErrorCode::ZeroArgument, "F_r at 0");
    const int s = opts.swap < 0 ? f_swap_choice(r, pq) : opts.swap;
    const Quad p = swapped(pq, s);
    const cplx z = q.pow(r - 1) * p.b / p.c;
    if (std::abs(z) >= 1.0) fail(ErrorCode::NoConvergentRepresentation, "2phi1 argument outside the unit disc");

    FPieces out;
    out.radicand = weight_w_complex(y, static_cast<double>(sign) * y, p.a, p.b, p.c, p.d, q) /
                   (pinf(qv / (y * p.c), q) * pinf(qv / (y * p.d), q));

    const cplx cc = q.pow(r) / (p.d * y);
    const SeriesResult f = phi21(q.pow(r - 1) * p.a / p.d, qv / (p.b * y), cc, z, q);
    out.g = Scaled(y).pow(1 - r) * pinf(z, q) * pinf(cc, q) / pinf(p.a * p.b / (p.c * p.d) * q.pow(2 * r - 2), q) *
            Scaled(f.value);
    return out;
}

double F_r(int r, const LatticePoint& x, const ParamQuadruple& pq, const FOptions& opts)
{
    const double v = pq.lattice.value(x);
    const FPieces fp = f_pieces(r, v, x.sign(), pq, opts);
    const cplx rad = fp.radicand.mantissa();
    if (rad.real() < -1e-12 * std::abs(rad)) {
        fail(ErrorCode::NegativeUnderSqrt, "F_r radicand is negative at " + to_string(x));
    }
    if (rad.real() <= 0.0) return 0.0;
    const Scaled root = Scaled::from_parts(cplx(rad.real(), 0.0), fp.radicand.exponent()).sqrt();
    return (root * fp.g).real();
}

double h_frak(int r, const ParamQuadruple& pq)
{
    const QBase& q = pq.q();
    const double qv = q.value();
    const double zm = pq.lattice.zeta_minus(), zp = pq.lattice.zeta_plus();
    const cplx al = pq.alpha, be = pq.beta, ga = pq.gamma, de = pq.delta;
    const cplx ratio = q.pow(3 - 2 * r) * ga * de / (al * be) - 1.0;
    Scaled h = Scaled(zp) * Scaled(ga * de).pow(r) / Scaled(al * be) * Scaled(std::pow(qv, 2 - r * r)) / Scaled(ratio);
    h *= theta_q_scaled(zm / zp, q) * theta_q_scaled(ga * de * zm * zp, q);
    h /= theta_q_scaled(ga * zm, q) * theta_q_scaled(de * zm, q) * theta_q_scaled(ga * zp, q) *
         theta_q_scaled(de * zp, q);
    const double qr = q.pow(r - 1);
    h *= pinf(qv, q) * pinf(qv, q) * pinf(al / de * qr, q) * pinf(al / ga * qr, q) * pinf(be / de * qr, q) *
         pinf(be / ga * qr, q);
    h /= pinf(al * be / (ga * de) * q.pow(2 * r - 2), q).pow(2);
    return h.real();
}

BoundaryKernel::BoundaryKernel(ParamQuadruple pq) : pq_(std::move(pq)), h1_(0.0)
{
    if (!pq_.admissible()) fail(ErrorCode::InvalidParams, pq_.reason);
    if (!pq_.kernel_regime) fail(ErrorCode::InvalidParams, "boundary kernel needs alpha beta < q^2 gamma delta");
    h1_ = h_frak(1, pq_);
}

double BoundaryKernel::operator()(const LatticePoint& x, const LatticePoint& y) const
{
    if (x == y) return diagonal(x).value;
    if (y < x) return (*this)(y, x);
    const double xv = pq_.lattice.value(x), yv = pq_.lattice.value(y);
    return (F_r(0, x, pq_) * F_r(1, y, pq_) - F_r(1, x, pq_) * F_r(0, y, pq_)) / ((xv - yv) * h1_);
}

DiagonalEstimate BoundaryKernel::diagonal(const LatticePoint& x, int nodes) const
{
    if (nodes < 8 || nodes % 2 != 0) fail(ErrorCode::InvalidArgument, "node count must be even and at least 8");
    const double xv = pq_.lattice.value(x);
    const int sign = x.sign();
    const FPieces fx0 = f_pieces(0, xv, sign, pq_), fx1 = f_pieces(1, xv, sign, pq_);
    const Scaled sx = fx0.radicand.sqrt();

    // K(x, y) for y off the lattice, with sqrt(R(y)) continued from the previous node
    Scaled prev_root = sx;
    auto kxy = [&](cplx y, bool track) {
        const FPieces f0 = f_pieces(0, y, sign, pq_), f1 = f_pieces(1, y, sign, pq_);
        Scaled root = f0.radicand.sqrt();
        if (track) {
            if ((root / prev_root).value().real() < 0.0) root = -root;
            prev_root = root;
        }
        const Scaled num = fx0.g * f1.g - fx1.g * f0.g;
        return (sx * root * num / Scaled((xv - y) * h1_)).value();
    };

    const double rho = (1.0 - pq_.q().value()) * std::abs(xv) / 4.0;
    cplx fine(0.0, 0.0), coarse(0.0, 0.0);
    for (int k = 0; k < nodes; ++k) {
        const double th = 2.0 * std::numbers::pi * k / nodes;
        const cplx v = kxy(xv + rho * std::polar(1.0, th), true);
        fine += v;
        if (k % 2 == 0) coarse += v;
    }
    DiagonalEstimate d;
    d.value = (fine / static_cast<double>(nodes)).real();
    d.cauchy_coarse = (coarse / static_cast<double>(nodes / 2)).real();

    // central differences on the real axis, one Richardson step
    auto central = [&](double h) { return 0.5 * (kxy(xv + h, false) + kxy(xv - h, false)).real(); };
    const double h = 1e-3 * std::abs(xv);
    d.finite_difference = (4.0 * central(h / 2) - central(h)) / 3.0;
    d.rel_disagreement = std::abs(d.value - d.finite_difference) / std::max(std::abs(d.value), 1e-300);
    if (d.rel_disagreement > 1e-6) {
        fail(ErrorCode::QuadratureDisagreement,
             "diagonal of K at " + to_string(x) + ": Cauchy " + std::to_string(d.value) + " vs finite difference " +
                 std::to_string(d.finite_difference));
    }
    return d;
}

Eigen::MatrixXd BoundaryKernel::matrix(const std::vector<LatticePoint>& pts) const
{
    const auto n = static_cast<Eigen::Index>(pts.size());
    std::vector<double> f0(pts.size()), f1(pts.size()), v(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        f0[i] = F_r(0, pts[i], pq_);
        f1[i] = F_r(1, pts[i], pq_);
        v[i] = pq_.lattice.value(pts[i]);
    }
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = diagonal(pts[i]).value;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const bool ordered = pts[i] < pts[j];
            const Eigen::Index a = ordered ? i : j, b = ordered ? j : i;
            k(i, j) = (f0[a] * f1[b] - f1[a] * f0[b]) / ((v[a] - v[b]) * h1_);
            k(j, i) = k(i, j);
        }
    }
    return k;
}

double boundary_kernel(const LatticePoint& x, const LatticePoint& y, const BoundaryKernel& bk)
{
    return bk(x, y);
}

CorrelationValue boundary_correlation(const std::vector<LatticePoint>& pts, const BoundaryKernel& bk)
{
    auto sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        fail(ErrorCode::DuplicatePoints, "correlation points must be distinct");
    }
    return determinant_correlation(bk.matrix(pts), 1e-8);
}

std::vector<Phi32LimitRow> phi32_limit_check(const std::vector<int>& ns, cplx b, cplx c, cplx d, cplx e,
                                             const QBase& q)
{
    const double qv = q.value();
    if (!(std::abs(d) > qv)) fail(ErrorCode::HypothesisViolated, "limit needs |D| > q");
    if (in_q_powers(d, q) || in_q_powers(e, q)) fail(ErrorCode::HypothesisViolated, "D and E must avoid q^Z");
    const SeriesResult tail = phi21(d / b, d / c, d * e / (b * c), qv / d, q);
    const Scaled limit = pinf(d * e / (b * c), q) / pinf(qv / e, q) * Scaled(tail.value);
    std::vector<Phi32LimitRow> rows;
    for (int n : ns) {
        if (n < 0) fail(ErrorCode::InvalidArgument, "n must be nonnegative");
        const double qn = q.pow(-n);
        Phi32LimitRow row;
        row.n = n;
        row.lhs = phi32_scaled(qn, b * qn, c * qn, d * qn, e * qn, qv, q).value;
        const double sgn = n % 2 == 0 ? 1.0 : -1.0;
        row.rhs = Scaled(b * c / (d * e)).pow(n) * Scaled(sgn) * Scaled(qv).pow(-(n * (n - 1) / 2)) * limit;
        row.ratio_error = std::abs((row.lhs / row.rhs).value() - 1.0);
        rows.push_back(row);
    }
    return rows;
}

ScaledFiniteN::ScaledFiniteN(const ParamQuadruple& pq, int n)
    : ens_(pq, n), base_(pq.alpha, pq.beta, pq.gamma, pq.delta, pq.lattice)
{
}

Scaled ScaledFiniteN::prefactor(const LatticePoint& x) const
{
    const int n = ens_.size();
    const QBase& q = base_.q();
    const double v = base_.lattice.value(x);
    const Scaled den = qpochhammer_finite_scaled(q.value() / (base_.c * v), n - 1, q) *
                       qpochhammer_finite_scaled(q.value() / (base_.d * v), n - 1, q);
    const Scaled ratio = weight_w_scaled(x, base_) / den;
    const cplx m = ratio.mantissa();
    if (m.real() < -1e-12 * std::abs(m)) fail(ErrorCode::NegativeUnderSqrt, "scaled weight is negative");
    const Scaled root = Scaled::from_parts(cplx(std::max(m.real(), 0.0), 0.0), ratio.exponent()).sqrt();
    return root / Scaled(v).pow(n - 1);
}

double ScaledFiniteN::phi(int r, const LatticePoint& x) const
{
    const int deg = ens_.size() - r;
    if (deg < 0) fail(ErrorCode::InvalidArgument, "phi_r needs r <= N");
    const double v = base_.lattice.value(x);
    const Scaled p = pbqj_eval_scaled(deg, v, ens_.poly()) / leading_coeff_scaled(deg, ens_.poly());
    return (prefactor(x) * p).real();
}

double ScaledFiniteN::big_h(int r) const
{
    const int n = ens_.size();
    const int deg = n - r;
    if (deg < 0) fail(ErrorCode::InvalidArgument, "H_r needs r <= N");
    const Scaled hn = deg < n ? ens_.monic_norm(deg) : monic_norm_scaled(deg, ens_.poly());
    const Scaled scale = Scaled(base_.c * base_.d).pow(n - 1) / Scaled(base_.q().value()).pow(n * (n - 1));
    return (hn * scale).real();
}

double ScaledFiniteN::kernel_signed(const LatticePoint& x, const LatticePoint& y) const
{
    if (y < x) return kernel_signed(y, x);
    const int n = ens_.size();
    const PBQJParams& poly = ens_.poly();
    const double xv = base_.lattice.value(x), yv = base_.lattice.value(y);
    const Scaled lc_n = leading_coeff_scaled(n, poly), lc_m = leading_coeff_scaled(n - 1, poly);
    const Scaled pnx = pbqj_eval_scaled(n, xv, poly) / lc_n, pmx = pbqj_eval_scaled(n - 1, xv, poly) / lc_m;
    const Scaled pny = pbqj_eval_scaled(n, yv, poly) / lc_n, pmy = pbqj_eval_scaled(n - 1, yv, poly) / lc_m;
    const Scaled num = cd_numerator(n, poly, xv, yv, pnx, pmx, pny, pmy, x == y);
    return (prefactor(x) * prefactor(y) * num / Scaled(big_h(1))).real();
}

double ScaledFiniteN::kernel(const LatticePoint& x, const LatticePoint& y) const
{
    const int e = ens_.size() - 1;
    const int s = (e % 2 != 0 && x.sign() != y.sign()) ? -1 : 1;
    return s * kernel_signed(x, y);
}

std::vector<ConvergenceRow> polynomial_limit_table(const ParamQuadruple& pq, const std::vector<int>& ns,
                                                   const std::vector<LatticePoint>& pts, const std::vector<int>& rs)
{
    std::vector<std::vector<double>> limit(rs.size(), std::vector<double>(pts.size()));
    double scale = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            limit[i][j] = F_r(rs[i], pts[j], pq);
            scale = std::max(scale, std::abs(limit[i][j]));
        }
    }
    std::vector<ConvergenceRow> rows;
    for (int n : ns) {
        const ScaledFiniteN fin(pq, n);
        ConvergenceRow row{n, 0.0};
        for (std::size_t i = 0; i < rs.size(); ++i) {
            for (std::size_t j = 0; j < pts.size(); ++j) {
                const double err = std::abs(fin.phi(rs[i], pts[j]) - limit[i][j]) /
                                   std::max(std::abs(limit[i][j]), 1e-3 * scale);
                row.error = std::max(row.error, err);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ConvergenceRow> norm_limit_table(const ParamQuadruple& pq, const std::vector<int>& ns,
                                             const std::vector<int>& rs)
{
    std::vector<double> limit;
    for (int r : rs) limit.push_back(h_frak(r, pq));
    std::vector<ConvergenceRow> rows;
    for (int n : ns) {
        const ScaledFiniteN fin(pq, n);
        ConvergenceRow row{n, 0.0};
        for (std::size_t i = 0; i < rs.size(); ++i) {
            row.error = std::max(row.error, std::abs(fin.big_h(rs[i]) / limit[i] - 1.0));
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ConvergenceRow> kernel_limit_table(const ParamQuadruple& pq, const std::vector<int>& ns,
                                               const std::vector<std::pair<LatticePoint, LatticePoint>>& pairs)
{
    const BoundaryKernel bk(pq);
    std::vector<double> limit;
    for (const auto& [x, y] : pairs) limit.push_back(bk(x, y));
    std::vector<ConvergenceRow> rows;
    for (int n : ns) {
        const ScaledFiniteN fin(pq, n);
        ConvergenceRow row{n, 0.0};
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            row.error = std::max(row.error, std::abs(fin.kernel_signed(pairs[i].first, pairs[i].second) - limit[i]));
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace qzw
