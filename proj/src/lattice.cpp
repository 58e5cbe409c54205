#include "qzw/lattice.hpp"

#include "qzw/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qzw {

std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b)
{
    if (a.branch != b.branch) {
        return a.branch == Branch::Minus ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.branch == Branch::Minus) return a.m <=> b.m;
    return b.m <=> a.m;
}

std::string to_string(const LatticePoint& p)
{
    return (p.positive() ? "+" : "-") + std::to_string(p.m);
}

LatticeParams::LatticeParams(double q, double zeta_minus, double zeta_plus)
    : q_(q), zeta_minus_(zeta_minus), zeta_plus_(zeta_plus), shift_(0.0)
{
    if (!(zeta_minus < 0.0) || !(zeta_plus > 0.0)) {
        fail(ErrorCode::InvalidArgument, "lattice needs zeta_minus < 0 < zeta_plus");
    }
    shift_ = std::log(-zeta_minus / zeta_plus) / q_.log_q();
    const double r = std::round(shift_);
    if (std::abs(shift_ - r) < 1e-9) integer_shift_ = static_cast<std::int64_t>(r);
}

double LatticeParams::value(const LatticePoint& p) const
{
    return zeta(p.branch) * q_.pow(p.m);
}

double LatticeParams::log_abs(const LatticePoint& p) const
{
    return std::log(std::abs(zeta(p.branch))) + static_cast<double>(p.m) * q_.log_q();
}

int LatticeParams::compare_abs(const LatticePoint& a, const LatticePoint& b) const
{
    // Work with plus-branch exponents: larger exponent means smaller |x|.
    if (a.branch == b.branch) {
        if (a.m == b.m) return 0;
        return a.m > b.m ? -1 : 1;
    }
    if (integer_shift_) {
        const std::int64_t ea = a.m + (a.branch == Branch::Minus ? *integer_shift_ : 0);
        const std::int64_t eb = b.m + (b.branch == Branch::Minus ? *integer_shift_ : 0);
        if (ea == eb) return 0;
        return ea > eb ? -1 : 1;
    }
    const double ea = static_cast<double>(a.m) + (a.branch == Branch::Minus ? shift_ : 0.0);
    const double eb = static_cast<double>(b.m) + (b.branch == Branch::Minus ? shift_ : 0.0);
    return ea > eb ? -1 : 1;
}

std::optional<LatticePoint> LatticeParams::locate(double x) const
{
    if (x == 0.0 || !std::isfinite(x)) return std::nullopt;
    const Branch b = x > 0.0 ? Branch::Plus : Branch::Minus;
    const double mf = std::log(x / zeta(b)) / q_.log_q();
    const double m = std::round(mf);
    const LatticePoint p{b, static_cast<std::int64_t>(m)};
    if (std::abs(value(p) - x) <= 1e-12 * std::abs(x)) return p;
    return std::nullopt;
}

double LatticeParams::cutoff(const TailSpec& t) const
{
    if (t.cutoff > 0.0) return t.cutoff;
    return q_.pow(64) * std::min(-zeta_minus_, zeta_plus_);
}

double LatticeParams::cap(const TailSpec& t) const
{
    if (t.cap > 0.0) return t.cap;
    return q_.pow(-64) * std::max(-zeta_minus_, zeta_plus_);
}

std::int64_t LatticeParams::innermost(Branch b, const TailSpec& t) const
{
    const double v = std::log(cutoff(t) / std::abs(zeta(b))) / q_.log_q();
    return static_cast<std::int64_t>(std::floor(v + 1e-9));
}

std::int64_t LatticeParams::outermost(Branch b, const TailSpec& t) const
{
    const double v = std::log(cap(t) / std::abs(zeta(b))) / q_.log_q();
    return static_cast<std::int64_t>(std::ceil(v - 1e-9));
}

Configuration::Configuration(std::vector<LatticePoint> points) : points_(std::move(points))
{
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i - 1] < points_[i])) {
            fail(ErrorCode::BadOrder, "configuration points must be strictly increasing");
        }
    }
}

Configuration Configuration::from_unsorted(std::vector<LatticePoint> points)
{
    std::sort(points.begin(), points.end());
    if (std::adjacent_find(points.begin(), points.end()) != points.end()) {
        fail(ErrorCode::DuplicatePoints, "configuration has a repeated point");
    }
    return Configuration(std::move(points));
}

bool Configuration::contains(const LatticePoint& p) const
{
    return std::binary_search(points_.begin(), points_.end(), p);
}

std::vector<double> Configuration::values(const LatticeParams& lp) const
{
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(lp.value(p));
    return out;
}

std::string to_string(const Configuration& c)
{
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += to_string(c[i]);
    }
    return s;
}

LatticePoint parse_point(const std::string& text)
{
    std::string t;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    }
    if (t.size() < 2 || (t[0] != '+' && t[0] != '-')) {
        fail(ErrorCode::ConfigError, "lattice point '" + text + "' must look like +3 or -1");
    }
    std::size_t used = 0;
    long long m = 0;
    try {
        m = std::stoll(t.substr(1), &used);
    } catch (const std::exception&) {
        fail(ErrorCode::ConfigError, "bad exponent in lattice point '" + text + "'");
    }
    if (used != t.size() - 1) fail(ErrorCode::ConfigError, "bad exponent in lattice point '" + text + "'");
    return {t[0] == '+' ? Branch::Plus : Branch::Minus, m};
}

Configuration parse_points(const std::string& text)
{
    std::vector<LatticePoint> pts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        pts.push_back(parse_point(item));
    }
    return Configuration::from_unsorted(std::move(pts));
}

namespace {

void push_minus(IntervalPoints& out, std::int64_t from, std::int64_t to)
{
    for (std::int64_t m = from; m <= to; ++m) out.points.push_back(LatticePoint::minus(m));
}

void push_plus(IntervalPoints& out, std::int64_t from, std::int64_t to)
{
    for (std::int64_t m = from; m >= to; --m) out.points.push_back(LatticePoint::plus(m));
}

} // namespace

bool in_interval_I(const LatticePoint& x, const LatticePoint& a, const LatticePoint& b)
{
    if (!(a < b)) fail(ErrorCode::BadOrder, "interval needs a < b");
    if (!b.positive()) return a <= x && x < b;
    if (!a.positive()) return a <= x && x <= b;
    return a < x && x <= b;
}

IntervalPoints interval_I(const LatticePoint& a, const LatticePoint& b, const LatticeParams& lp,
                          const TailSpec& tail)
{
    if (!(a < b)) fail(ErrorCode::BadOrder, "interval needs a < b");
    IntervalPoints out;
    if (!b.positive()) {
        push_minus(out, a.m, b.m - 1);
    } else if (a.positive()) {
        push_plus(out, a.m - 1, b.m);
    } else {
        push_minus(out, a.m, std::max(a.m, lp.innermost(Branch::Minus, tail)));
        push_plus(out, std::max(b.m, lp.innermost(Branch::Plus, tail)), b.m);
        out.truncated = true;
    }
    return out;
}

bool in_interval_I_tilde(const LatticePoint& x, const Endpoint& a, const Endpoint& b)
{
    using K = Endpoint::Kind;
    if (a.kind == K::PosInf || b.kind == K::NegInf) fail(ErrorCode::BadOrder, "interval needs a < b");
    if (a.kind == K::Finite && b.kind == K::Finite && !(a.point < b.point)) {
        fail(ErrorCode::BadOrder, "interval needs a < b");
    }
    const bool a_neg = a.kind == K::NegInf || !a.point.positive();
    const bool b_neg = b.kind == K::Finite && !b.point.positive();
    const bool below_b = b.kind == K::PosInf || (b_neg ? x <= b.point : x < b.point);
    if (!a_neg) return a.point <= x && below_b;
    return (a.kind == K::NegInf || a.point < x) && below_b;
}

IntervalPoints interval_I_tilde(const Endpoint& a, const Endpoint& b, const LatticeParams& lp,
                                const TailSpec& tail)
{
    using K = Endpoint::Kind;
    if (a.kind == K::PosInf || b.kind == K::NegInf) fail(ErrorCode::BadOrder, "interval needs a < b");
    if (a.kind == K::Finite && b.kind == K::Finite && !(a.point < b.point)) {
        fail(ErrorCode::BadOrder, "interval needs a < b");
    }
    IntervalPoints out;
    const bool a_neg = a.kind == K::NegInf || !a.point.positive();
    const bool b_neg = b.kind == K::Finite && !b.point.positive();

    const std::int64_t far_minus = lp.outermost(Branch::Minus, tail);
    const std::int64_t far_plus = lp.outermost(Branch::Plus, tail);
    const std::int64_t in_minus = lp.innermost(Branch::Minus, tail);
    const std::int64_t in_plus = lp.innermost(Branch::Plus, tail);

    if (a_neg) {
        std::int64_t lo = 0;
        if (a.kind == K::NegInf) {
            lo = far_minus;
            out.truncated = true;
        } else {
            lo = a.point.m + 1;
        }
        if (b_neg) {
            lo = std::min(lo, b.point.m);
            push_minus(out, lo, b.point.m);
            return out;
        }
        push_minus(out, lo, std::max(lo - 1, in_minus));
        out.truncated = true;
        if (b.kind == K::PosInf) {
            push_plus(out, in_plus, far_plus);
        } else {
            push_plus(out, std::max(in_plus, b.point.m), b.point.m + 1);
        }
        return out;
    }
    if (b.kind == K::PosInf) {
        push_plus(out, a.point.m, std::min(a.point.m, far_plus));
        out.truncated = true;
    } else {
        push_plus(out, a.point.m, b.point.m + 1);
    }
    return out;
}

bool interlace(const Configuration& x, const Configuration& y)
{
    if (x.size() != y.size() + 1) fail(ErrorCode::SizeMismatch, "interlace needs |X| = |Y| + 1");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!in_interval_I(y[i], x[i], x[i + 1])) return false;
    }
    return true;
}

bool interlace_tilde(const Configuration& x, const Configuration& y)
{
    if (x.size() != y.size() + 1) fail(ErrorCode::SizeMismatch, "interlace needs |X| = |Y| + 1");
    const std::size_t n = y.size();
    // Every I~ piece must hold exactly one x; since |X| = n+1 pieces, count per piece.
    std::vector<int> count(n + 1, 0);
    for (const auto& p : x) {
        for (std::size_t i = 0; i <= n; ++i) {
            const Endpoint lo = i == 0 ? Endpoint::neg_inf() : Endpoint::at(y[i - 1]);
            const Endpoint hi = i == n ? Endpoint::pos_inf() : Endpoint::at(y[i]);
            if (in_interval_I_tilde(p, lo, hi)) {
                ++count[i];
                break;
            }
        }
    }
    return std::all_of(count.begin(), count.end(), [](int c) { return c == 1; });
}

VariationalSeries variational_series(std::vector<LatticePoint> points, const LatticeParams& lp)
{
    std::sort(points.begin(), points.end(), [&](const LatticePoint& a, const LatticePoint& b) {
        const int c = lp.compare_abs(a, b);
        if (c != 0) return c > 0;
        return a.positive() && !b.positive();
    });
    return {std::move(points)};
}

VariationalSeries variational_series(const Configuration& x, const LatticeParams& lp)
{
    return variational_series(x.points(), lp);
}

bool satisfies_decay_bound(const VariationalSeries& s, const LatticeParams& lp)
{
    if (s.terms.empty()) return true;
    const double top = lp.log_abs(s.terms.front());
    const double slack = 1e-12;
    for (std::size_t k = 2; k <= s.terms.size(); ++k) {
        const auto n = static_cast<std::int64_t>(k / 2);
        const std::int64_t power = k % 2 == 0 ? n - 1 : n;
        const double bound = top + static_cast<double>(power) * lp.q().log_q();
        if (lp.log_abs(s.terms[k - 1]) > bound + slack) return false;
    }
    return true;
}

} // namespace qzw
