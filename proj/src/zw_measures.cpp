#include "qzw/zw_measures.hpp"

#include "qzw/error.hpp"
#include "qzw/graph_links.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qzw {

namespace {

bool real_value(cplx z)
{
    return std::abs(z.imag()) <= 1e-14 * std::abs(z);
}

Scaled real_scaled(const Scaled& s)
{
    return Scaled::from_parts(cplx(s.mantissa().real(), 0.0), s.exponent());
}

void add_sum(LatticeSum& acc, const LatticeSum& s)
{
    acc.value += s.value;
    acc.tail_bound += s.tail_bound;
    acc.abs_sum += s.abs_sum;
    acc.points += s.points;
}

LatticeSum finite_run(Branch b, std::int64_t from, std::int64_t to, const std::function<cplx(const LatticePoint&)>& f)
{
    LatticeSum s;
    for (std::int64_t m = from; m <= to; ++m) {
        const cplx t = f({b, m});
        s.value += t;
        s.abs_sum += std::abs(t);
        ++s.points;
    }
    return s;
}

} // namespace

const char* to_string(ParamClass c)
{
    switch (c) {
    case ParamClass::Nondegenerate: return "nondegenerate";
    case ParamClass::DegenerateExA: return "degenerate_exA";
    case ParamClass::Invalid: return "invalid";
    }
    return "invalid";
}

ParamQuadruple::ParamQuadruple(cplx a, cplx b, cplx g, cplx d, LatticeParams lp)
    : alpha(a), beta(b), gamma(g), delta(d), lattice(std::move(lp))
{
    const PairKind pa = classify_pair(alpha, beta, lattice);
    const PairKind pg = classify_pair(gamma, delta, lattice);
    auto good = [](PairKind k) { return k == PairKind::ConjugatePair || k == PairKind::RealGap; };
    const double q = lattice.q().value();
    const cplx ab = alpha * beta;
    const cplx gd = gamma * delta;
    if (good(pa) && good(pg)) {
        const cplx r = gd * q / ab;
        if (real_value(r) && r.real() > 1.0) {
            classification = ParamClass::Nondegenerate;
        } else {
            reason = "not admissible and nondegenerate: requires gamma*delta*q > alpha*beta";
        }
    } else if (real_value(alpha) && real_value(beta) && (alpha.real() < 0.0) != (beta.real() < 0.0) &&
               lattice.locate(1.0 / alpha.real()) && lattice.locate(1.0 / beta.real()) &&
               pg == PairKind::ConjugatePair) {
        classification = ParamClass::DegenerateExA;
    } else if (!good(pa)) {
        reason = "not admissible and nondegenerate: (alpha, beta) must be a nonreal conjugate pair or real with "
                 "reciprocals in one lattice gap";
    } else {
        reason = "not admissible and nondegenerate: (gamma, delta) must be a nonreal conjugate pair or real with "
                 "reciprocals in one lattice gap";
    }
    kernel_regime = admissible() && ab.real() < q * q * gd.real();
}

EnsembleN::EnsembleN(ParamQuadruple params, int n)
    : params_(std::move(params)), n_(n),
      poly_(params_.alpha, params_.beta, params_.gamma, params_.delta, params_.lattice)
{
    if (!params_.admissible()) fail(ErrorCode::InvalidParams, params_.reason);
    if (n < 1) fail(ErrorCode::InvalidArgument, "ensemble size must be at least 1");
    poly_ = poly_.shifted(1 - n, 1 - n);
    norms_.reserve(n);
    for (int k = 0; k < n; ++k) {
        norms_.push_back(monic_norm_scaled(k, poly_));
        log_z_ += norms_.back().log_abs();
    }
}

Scaled EnsembleN::weight(const LatticePoint& x) const
{
    return real_scaled(weight_w_scaled(x, poly_));
}

KernelPoint EnsembleN::evaluate(const LatticePoint& x) const
{
    KernelPoint kp;
    kp.point = x;
    kp.value = params_.lattice.value(x);
    const Scaled w = weight(x);
    if (w.mantissa().real() < 0.0) fail(ErrorCode::InvalidParams, "negative weight");
    kp.sqrt_w = w.sqrt();
    kp.p.reserve(n_ + 1);
    for (int k = 0; k <= n_; ++k) {
        const Scaled lc = leading_coeff_scaled(k, poly_);
        if (lc.is_zero()) fail(ErrorCode::InvalidParams, "vanishing leading coefficient");
        kp.p.push_back(real_scaled(pbqj_eval_scaled(k, kp.value, poly_) / lc));
    }
    return kp;
}

double measure_weight(const Configuration& x, const EnsembleN& ens)
{
    if (static_cast<int>(x.size()) != ens.size()) fail(ErrorCode::SizeMismatch, "configuration size differs from N");
    double log_w = -ens.log_z();
    const auto v = x.values(ens.lattice());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Scaled w = ens.weight(x[i]);
        if (w.is_zero()) return 0.0;
        log_w += w.log_abs();
        for (std::size_t j = i + 1; j < x.size(); ++j) log_w += 2.0 * std::log(v[j] - v[i]);
    }
    return std::exp(log_w);
}

double cd_kernel_sum_form(const KernelPoint& x, const KernelPoint& y, const EnsembleN& ens)
{
    Scaled s;
    for (int k = 0; k < ens.size(); ++k) s += x.p[k] * y.p[k] / ens.monic_norm(k);
    return (s * x.sqrt_w * y.sqrt_w).real();
}

double cd_kernel_N(const KernelPoint& x, const KernelPoint& y, const EnsembleN& ens)
{
    if (x.point == y.point) return cd_kernel_sum_form(x, y, ens);
    // evaluate in a fixed order so that K(x,y) == K(y,x) exactly
    if (y.point < x.point) return cd_kernel_N(y, x, ens);
    const int n = ens.size();
    // direct form (p_N(x)p_{N-1}(y) - p_{N-1}(x)p_N(y)) / (x - y)
    const Scaled u1 = x.p[n] * y.p[n - 1], u2 = x.p[n - 1] * y.p[n];
    const Scaled direct = u1 - u2;
    const double cond_direct = std::exp(std::max(u1.log_abs(), u2.log_abs()) - direct.log_abs());
    // the same through divided differences, stable when x and y are close
    const Scaled lc_n = leading_coeff_scaled(n, ens.poly());
    const Scaled lc_m = leading_coeff_scaled(n - 1, ens.poly());
    const Scaled dn = real_scaled(pbqj_divided_difference_scaled(n, x.value, y.value, ens.poly()) / lc_n);
    const Scaled dm = real_scaled(pbqj_divided_difference_scaled(n - 1, x.value, y.value, ens.poly()) / lc_m);
    const Scaled v1 = x.p[n - 1] * dn, v2 = x.p[n] * dm;
    const Scaled divided = v1 - v2;
    const double cond_divided = std::exp(std::max(v1.log_abs(), v2.log_abs()) - divided.log_abs());
    const Scaled num = cond_divided < cond_direct ? divided : direct / Scaled(x.value - y.value);
    return (num * x.sqrt_w * y.sqrt_w / ens.monic_norm(n - 1)).real();
}

double cd_kernel_N(const LatticePoint& x, const LatticePoint& y, const EnsembleN& ens)
{
    const KernelPoint kx = ens.evaluate(x);
    if (x == y) return cd_kernel_N(kx, kx, ens);
    return cd_kernel_N(kx, ens.evaluate(y), ens);
}

Eigen::MatrixXd kernel_matrix(const std::vector<LatticePoint>& pts, const EnsembleN& ens)
{
    std::vector<KernelPoint> d;
    d.reserve(pts.size());
    for (const auto& p : pts) d.push_back(ens.evaluate(p));
    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            k(i, j) = cd_kernel_N(d[i], d[j], ens);
            k(j, i) = k(i, j);
        }
    }
    return k;
}

CorrelationValue determinant_correlation(const Eigen::MatrixXd& k, double tol)
{
    CorrelationValue c;
    c.raw = k.rows() == 0 ? 1.0 : k.fullPivLu().determinant();
    c.clamped = c.raw < -tol || c.raw > 1.0 + tol;
    c.value = std::clamp(c.raw, 0.0, 1.0);
    return c;
}

CorrelationValue correlation_N(const std::vector<LatticePoint>& pts, const EnsembleN& ens)
{
    auto sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        fail(ErrorCode::DuplicatePoints, "correlation points must be distinct");
    }
    return determinant_correlation(kernel_matrix(pts, ens), 1e-10);
}

LatticeSum sum_interval_tilde(const LatticeParams& lp, const Endpoint& a, const Endpoint& b,
                              const std::function<cplx(const LatticePoint&)>& f, double rel_tol)
{
    using K = Endpoint::Kind;
    if (a.kind == K::PosInf || b.kind == K::NegInf) fail(ErrorCode::BadOrder, "interval endpoints out of order");
    if (a.kind == K::Finite && b.kind == K::Finite && !(a.point < b.point)) {
        fail(ErrorCode::BadOrder, "interval needs a < b");
    }
    LatticeSum s;
    auto whole = [&](Branch br) {
        add_sum(s, sum_branch(lp, br, 0, +1, f, rel_tol));
        add_sum(s, sum_branch(lp, br, -1, -1, f, rel_tol));
    };
    const bool a_neg = a.kind == K::NegInf || !a.point.positive();
    const bool b_pos = b.kind == K::PosInf || b.point.positive();
    if (a_neg && b_pos) {
        // crossing zero: open at both finite ends
        if (a.kind == K::NegInf) {
            whole(Branch::Minus);
        } else {
            add_sum(s, sum_branch(lp, Branch::Minus, a.point.m + 1, +1, f, rel_tol));
        }
        if (b.kind == K::PosInf) {
            whole(Branch::Plus);
        } else {
            add_sum(s, sum_branch(lp, Branch::Plus, b.point.m + 1, +1, f, rel_tol));
        }
        return s;
    }
    if (!b_pos) {
        // (a, b] on the negative branch
        if (a.kind == K::NegInf) return sum_branch(lp, Branch::Minus, b.point.m, -1, f, rel_tol);
        return finite_run(Branch::Minus, a.point.m + 1, b.point.m, f);
    }
    // [a, b) on the positive branch
    if (b.kind == K::PosInf) return sum_branch(lp, Branch::Plus, a.point.m, -1, f, rel_tol);
    return finite_run(Branch::Plus, b.point.m + 1, a.point.m, f);
}

double CoherencyCheck::rel_error() const
{
    return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

CoherencyCheck coherency_check(const EnsembleN& ens_next, const Configuration& y)
{
    const int n = static_cast<int>(y.size());
    if (ens_next.size() != n + 1) fail(ErrorCode::SizeMismatch, "coherency needs the level N+1 ensemble");
    const LatticeParams& lp = ens_next.lattice();
    // The summand factors as prod w(x_i) * V(X) times terms in Y, and V(X) is a
    // determinant, so the sum over the product of I~ intervals is det of moments.
    Eigen::MatrixXd m(n + 1, n + 1), tails(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        const Endpoint a = i == 0 ? Endpoint::neg_inf() : Endpoint::at(y[i - 1]);
        const Endpoint b = i == n ? Endpoint::pos_inf() : Endpoint::at(y[i]);
        for (int j = 0; j <= n; ++j) {
            const LatticeSum s = sum_interval_tilde(lp, a, b, [&](const LatticePoint& x) {
                const double v = lp.value(x);
                return cplx(ens_next.weight(x).real() * std::pow(v, j), 0.0);
            });
            m(i, j) = s.value.real();
            tails(i, j) = s.tail_bound + 4e-16 * s.abs_sum;
        }
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    const double det = lu.determinant();
    // first-order propagation through the cofactors
    double det_err = 0.0;
    if (det != 0.0) {
        const Eigen::MatrixXd cof = det * lu.inverse().transpose();
        det_err = (cof.cwiseAbs().array() * tails.array()).sum();
    }
    const auto yv = y.values(lp);
    double log_pref = -ens_next.log_z();
    for (double v : yv) log_pref += std::log(std::abs(v));
    for (int k = 1; k <= n; ++k) log_pref += std::log1p(-lp.q().pow(k));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) log_pref += std::log(yv[j] - yv[i]);
    }
    const double pref = std::exp(log_pref);
    CoherencyCheck c;
    c.lhs = pref * det;
    c.tail_bound = pref * det_err;
    const EnsembleN ens(ens_next.params(), n);
    c.rhs = measure_weight(y, ens);
    return c;
}

double coherency_lhs_enumerated(const EnsembleN& ens_next, const Configuration& y, const TailSpec& tail)
{
    const std::size_t n = y.size();
    const LatticeParams& lp = ens_next.lattice();
    std::vector<IntervalPoints> iv;
    for (std::size_t i = 0; i <= n; ++i) {
        const Endpoint a = i == 0 ? Endpoint::neg_inf() : Endpoint::at(y[i - 1]);
        const Endpoint b = i == n ? Endpoint::pos_inf() : Endpoint::at(y[i]);
        iv.push_back(interval_I_tilde(a, b, lp, tail));
        if (iv.back().points.empty()) return 0.0;
    }
    std::vector<std::size_t> idx(n + 1, 0);
    std::vector<LatticePoint> cur(n + 1);
    double s = 0.0;
    while (true) {
        for (std::size_t k = 0; k <= n; ++k) cur[k] = iv[k].points[idx[k]];
        const Configuration x(cur);
        s += measure_weight(x, ens_next) * link_entry(x, y, lp);
        std::size_t k = n + 1;
        bool done = true;
        while (k > 0) {
            --k;
            if (++idx[k] < iv[k].points.size()) {
                done = false;
                break;
            }
            idx[k] = 0;
        }
        if (done) break;
    }
    return s;
}

KernelWindow kernel_window(const EnsembleN& ens, double trace_tol)
{
    const LatticeParams& lp = ens.lattice();
    const double q = lp.q().value();
    constexpr int kMaxSteps = 4000;
    constexpr double kPointTol = 1e-13;
    KernelWindow w;
    std::vector<std::pair<LatticePoint, KernelPoint>> found;
    double tail_est = 0.0;
    for (Branch b : {Branch::Minus, Branch::Plus}) {
        for (int dir : {-1, +1}) {
            std::int64_t m = dir < 0 ? -1 : 0;
            int small = 0;
            double prev = -1.0, ratio = 0.0;
            int steps = 0;
            for (; steps < kMaxSteps; ++steps, m += dir) {
                const LatticePoint x{b, m};
                const double lx = lp.log_abs(x);
                if (lx < -650.0 || lx > 650.0) break;
                KernelPoint kp = ens.evaluate(x);
                const double d = cd_kernel_sum_form(kp, kp, ens);
                found.emplace_back(x, std::move(kp));
                if (prev > 0.0 && d > 0.0) ratio = d / prev;
                prev = d;
                small = d < kPointTol ? small + 1 : 0;
                if (small >= 6 && ratio < 1.0) {
                    tail_est += d * (ratio > 0.0 ? ratio / (1.0 - ratio) : q / (1.0 - q));
                    break;
                }
            }
            if (steps == kMaxSteps) fail(ErrorCode::WindowTooSmall, "kernel window did not close");
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [p, kp] : found) {
        w.points.push_back(p);
        w.data.push_back(std::move(kp));
    }
    const auto n = static_cast<Eigen::Index>(w.points.size());
    w.kernel.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            w.kernel(i, j) = cd_kernel_N(w.data[i], w.data[j], ens);
            w.kernel(j, i) = w.kernel(i, j);
        }
    }
    w.trace = w.kernel.trace();
    if (w.trace < ens.size() - trace_tol || tail_est > trace_tol) {
        fail(ErrorCode::WindowTooSmall, "kernel window carries trace " + std::to_string(w.trace) + " < N - tol");
    }
    return w;
}

EnsembleSamplerState::EnsembleSamplerState(const EnsembleN& ens, EnsembleSampler method, int gibbs_sweeps)
    : ens_(ens), method_(method), sweeps_(gibbs_sweeps), window_(kernel_window(ens))
{
    if (method_ == EnsembleSampler::Dpp) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(window_.kernel);
        // eigenvalues ascend; the top N span the projection
        basis_ = es.eigenvectors().rightCols(ens.size());
    } else {
        log_w_.reserve(window_.points.size());
        for (const auto& p : window_.points) {
            const Scaled wv = ens.weight(p);
            log_w_.push_back(wv.is_zero() ? -INFINITY : wv.log_abs());
        }
    }
}

Configuration EnsembleSamplerState::sample(std::mt19937_64& rng)
{
    return method_ == EnsembleSampler::Dpp ? sample_dpp(rng) : sample_gibbs(rng);
}

Configuration EnsembleSamplerState::sample_dpp(std::mt19937_64& rng)
{
    Eigen::MatrixXd v = basis_;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<LatticePoint> out;
    while (v.cols() > 0) {
        const Eigen::VectorXd p = v.rowwise().squaredNorm();
        double t = unif(rng) * p.sum();
        Eigen::Index pick = p.size() - 1;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            t -= p(i);
            if (t < 0.0) {
                pick = i;
                break;
            }
        }
        out.push_back(window_.points[pick]);
        // restrict the span to vectors vanishing at the chosen point
        Eigen::Index col;
        v.row(pick).cwiseAbs().maxCoeff(&col);
        const Eigen::VectorXd pivot = v.col(col) / v(pick, col);
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            if (j != col) v.col(j) -= pivot * v(pick, j);
        }
        if (col != v.cols() - 1) v.col(col) = v.col(v.cols() - 1);
        v.conservativeResize(Eigen::NoChange, v.cols() - 1);
        if (v.cols() > 0) {
            const Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
            v = qr.householderQ() * Eigen::MatrixXd::Identity(v.rows(), v.cols());
        }
    }
    return Configuration::from_unsorted(out);
}

Configuration EnsembleSamplerState::sample_gibbs(std::mt19937_64& rng)
{
    const int n = ens_.size();
    const std::size_t w = window_.points.size();
    std::vector<double> vals(w);
    for (std::size_t i = 0; i < w; ++i) vals[i] = window_.data[i].value;
    // start from the N points of largest intensity
    std::vector<std::size_t> order(w);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + n, order.end(),
                      [&](std::size_t a, std::size_t b) { return window_.kernel(a, a) > window_.kernel(b, b); });
    std::vector<std::size_t> cur(order.begin(), order.begin() + n);
    std::vector<double> lp(w);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int sweep = 0; sweep < sweeps_; ++sweep) {
        for (int k = 0; k < n; ++k) {
            double top = -INFINITY;
            for (std::size_t i = 0; i < w; ++i) {
                double l = log_w_[i];
                for (int j = 0; j < n && l > -INFINITY; ++j) {
                    if (j == k) continue;
                    l = cur[j] == i ? -INFINITY : l + 2.0 * std::log(std::abs(vals[i] - vals[cur[j]]));
                }
                lp[i] = l;
                top = std::max(top, l);
            }
            double total = 0.0;
            for (std::size_t i = 0; i < w; ++i) {
                lp[i] = std::exp(lp[i] - top);
                total += lp[i];
            }
            double t = unif(rng) * total;
            std::size_t pick = w - 1;
            for (std::size_t i = 0; i < w; ++i) {
                t -= lp[i];
                if (t < 0.0) {
                    pick = i;
                    break;
                }
            }
            cur[k] = pick;
        }
    }
    std::vector<LatticePoint> pts;
    for (std::size_t i : cur) pts.push_back(window_.points[i]);
    return Configuration::from_unsorted(pts);
}

Configuration sample_ensemble(const EnsembleN& ens, std::mt19937_64& rng, EnsembleSampler method)
{
    EnsembleSamplerState s(ens, method);
    return s.sample(rng);
}

} // namespace qzw
