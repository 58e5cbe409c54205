#include "qzw/graph_links.hpp"

#include "qzw/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

namespace qzw {

namespace {

double qpoch_real(double a, int n, const QBase& q)
{
    return qpochhammer_finite(cplx(a, 0.0), n, q).real();
}

// Intervals I(x_i, x_{i+1}) of an (N+1)-point configuration.
std::vector<IntervalPoints> link_intervals(const Configuration& x, const LatticeParams& lp, const TailSpec& tail)
{
    std::vector<IntervalPoints> out;
    out.reserve(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) out.push_back(interval_I(x[i], x[i + 1], lp, tail));
    return out;
}

// Sum over the omitted part of a zero-crossing interval of |c| c^{p-1}, p = 1..n.
std::vector<double> crossing_tail_moments(const LatticeParams& lp, const TailSpec& tail, int n)
{
    std::vector<double> t(n, 0.0);
    const double q = lp.q().value();
    for (Branch b : {Branch::Minus, Branch::Plus}) {
        const double z = lp.zeta(b);
        const std::int64_t first = lp.innermost(b, tail) + 1;
        for (int p = 1; p <= n; ++p) {
            // sum_{m >= first} |z| q^m (z q^m)^{p-1}
            t[p - 1] += std::abs(z) * std::pow(z, p - 1) * std::pow(q, static_cast<double>(first) * p) /
                        (1.0 - std::pow(q, p));
        }
    }
    return t;
}

// Exact mass of the configurations dropped by truncating the crossing interval.
double omitted_row_mass(const Configuration& x, const std::vector<IntervalPoints>& iv, const LatticeParams& lp,
                        const TailSpec& tail)
{
    const int n = static_cast<int>(iv.size());
    int crossing = -1;
    for (int k = 0; k < n; ++k) {
        if (iv[k].truncated) crossing = k;
    }
    if (crossing < 0) return 0.0;
    Eigen::MatrixXd m(n, n);
    for (int k = 0; k < n; ++k) {
        if (k == crossing) {
            const auto t = crossing_tail_moments(lp, tail, n);
            for (int p = 0; p < n; ++p) m(p, k) = t[p];
            continue;
        }
        for (int p = 0; p < n; ++p) m(p, k) = 0.0;
        for (const auto& c : iv[k].points) {
            const double v = lp.value(c);
            double pw = std::abs(v);
            for (int p = 0; p < n; ++p) {
                m(p, k) += pw;
                pw *= v;
            }
        }
    }
    double det = m.partialPivLu().determinant();
    // (q;q)_n / V(X), accumulated as ratios.
    const auto xv = x.values(lp);
    double scale = qpoch_real(lp.q().value(), n, lp.q());
    for (std::size_t i = 0; i < xv.size(); ++i) {
        for (std::size_t j = i + 1; j < xv.size(); ++j) scale /= xv[j] - xv[i];
    }
    return std::max(0.0, det * scale);
}

// Odometer over the product of interval point lists.
void for_each_product(const std::vector<IntervalPoints>& iv,
                      const std::function<void(const std::vector<LatticePoint>&)>& fn)
{
    const std::size_t n = iv.size();
    for (const auto& i : iv) {
        if (i.points.empty()) return;
    }
    std::vector<std::size_t> idx(n, 0);
    std::vector<LatticePoint> cur(n);
    for (std::size_t k = 0; k < n; ++k) cur[k] = iv[k].points[0];
    while (true) {
        fn(cur);
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (++idx[k] < iv[k].points.size()) {
                cur[k] = iv[k].points[idx[k]];
                break;
            }
            idx[k] = 0;
            cur[k] = iv[k].points[0];
            if (k == 0) return;
        }
        if (n == 0) return;
    }
}

double link_entry_values(const std::vector<double>& xv, const std::vector<double>& yv, const QBase& q)
{
    const std::size_t n = yv.size();
    double r = qpoch_real(q.value(), static_cast<int>(n), q);
    for (double y : yv) r *= std::abs(y);
    // pair (y_j - y_i) with (x_j - x_i) for i<j<=n, leftover x differences with x_{n+1}
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) r *= (yv[j] - yv[i]) / (xv[j] - xv[i]);
        r /= xv[n] - xv[i];
    }
    return r;
}

} // namespace

double LinkRow::enumerated_mass() const
{
    double s = 0.0;
    double c = 0.0;
    for (const auto& e : entries) {
        const double y = e.probability - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

double LinkRow::probability_of(const Configuration& y) const
{
    auto it = std::lower_bound(entries.begin(), entries.end(), y,
                               [](const LinkEntry& e, const Configuration& c) { return e.config < c; });
    if (it != entries.end() && it->config == y) return it->probability;
    return 0.0;
}

double total_variation(const LinkRow& a, const LinkRow& b)
{
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        if (j == b.entries.size() || (i < a.entries.size() && a.entries[i].config < b.entries[j].config)) {
            s += std::abs(a.entries[i++].probability);
        } else if (i == a.entries.size() || b.entries[j].config < a.entries[i].config) {
            s += std::abs(b.entries[j++].probability);
        } else {
            s += std::abs(a.entries[i++].probability - b.entries[j++].probability);
        }
    }
    return 0.5 * s;
}

double IdentityCheck::residual() const
{
    const double excess = std::max(0.0, std::abs(lhs - rhs) - tail_bound);
    return excess / (scale > 0.0 ? scale : 1.0);
}

double weight_wt(const Configuration& x, const Configuration& y, const LatticeParams& lp)
{
    if (!interlace(x, y)) return 0.0;
    double w = 1.0;
    for (const auto& p : y) w *= lp.abs_value(p);
    return w;
}

double log_dim(const Configuration& x, const LatticeParams& lp)
{
    const auto v = x.values(lp);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) s += std::log(v[j] - v[i]);
    }
    for (int k = 1; k < static_cast<int>(v.size()); ++k) s -= std::log(qpoch_real(lp.q().value(), k, lp.q()));
    return s;
}

double dim(const Configuration& x, const LatticeParams& lp)
{
    const auto v = x.values(lp);
    double r = 1.0;
    // pair the Vandermonde factors of row j with (q;q)_{j-1}
    for (std::size_t j = 1; j < v.size(); ++j) {
        double row = 1.0;
        for (std::size_t i = 0; i < j; ++i) row *= v[j] - v[i];
        r *= row / qpoch_real(lp.q().value(), static_cast<int>(j), lp.q());
    }
    return r;
}

IdentityCheck dim_recurrence_check(const Configuration& x, const LatticeParams& lp, const TailSpec& tail)
{
    if (x.size() < 2) fail(ErrorCode::SizeMismatch, "dim recurrence needs at least two points");
    IdentityCheck r;
    r.lhs = dim(x, lp);
    const auto iv = link_intervals(x, lp, tail);
    double s = 0.0, c = 0.0;
    for_each_product(iv, [&](const std::vector<LatticePoint>& ys) {
        double w = 1.0;
        for (const auto& p : ys) w *= lp.abs_value(p);
        const double t = w * dim(Configuration(ys), lp);
        const double yk = t - c;
        const double ss = s + yk;
        c = (ss - s) - yk;
        s = ss;
    });
    r.rhs = s;
    r.tail_bound = r.lhs * omitted_row_mass(x, iv, lp, tail);
    r.scale = r.lhs;
    return r;
}

IdentityCheck geometric_summation_check(const LatticePoint& a, const LatticePoint& b, int n,
                                        const LatticeParams& lp, const TailSpec& tail)
{
    if (n < 1) fail(ErrorCode::InvalidArgument, "geometric summation needs n >= 1");
    const auto pts = interval_I(a, b, lp, tail);
    const double av = lp.value(a), bv = lp.value(b);
    IdentityCheck r;
    r.lhs = std::pow(bv, n) - std::pow(av, n);
    double s = 0.0, c = 0.0;
    for (const auto& p : pts.points) {
        const double v = lp.value(p);
        const double t = std::abs(v) * std::pow(v, n - 1);
        const double yk = t - c;
        const double ss = s + yk;
        c = (ss - s) - yk;
        s = ss;
    }
    const double qn = 1.0 - lp.q().pow(n);
    r.rhs = qn * s;
    if (pts.truncated) {
        // bound the signed tail by the absolute tail of both branches
        double abs_tail = 0.0;
        for (Branch br : {Branch::Minus, Branch::Plus}) {
            const double z = std::abs(lp.zeta(br));
            abs_tail += std::pow(z, n) * std::pow(lp.q().value(), static_cast<double>(lp.innermost(br, tail) + 1) * n) /
                        (1.0 - lp.q().pow(n));
        }
        r.tail_bound = qn * abs_tail;
    }
    r.scale = std::max(std::pow(std::abs(av), n), std::pow(std::abs(bv), n));
    return r;
}

double link_entry(const Configuration& x, const Configuration& y, const LatticeParams& lp)
{
    if (!interlace(x, y)) return 0.0;
    return link_entry_values(x.values(lp), y.values(lp), lp.q());
}

LinkRow link_row(const Configuration& x, const LatticeParams& lp, const TailSpec& tail)
{
    if (x.size() < 2) fail(ErrorCode::SizeMismatch, "link row needs a source with at least two points");
    LinkRow row;
    row.source = x;
    const auto iv = link_intervals(x, lp, tail);
    const auto xv = x.values(lp);
    std::vector<double> yv(iv.size());
    for_each_product(iv, [&](const std::vector<LatticePoint>& ys) {
        for (std::size_t k = 0; k < ys.size(); ++k) yv[k] = lp.value(ys[k]);
        row.entries.push_back({Configuration(ys), link_entry_values(xv, yv, lp.q()), 0.0});
    });
    std::sort(row.entries.begin(), row.entries.end(),
              [](const LinkEntry& a, const LinkEntry& b) { return a.config < b.config; });
    row.tail_mass_bound = omitted_row_mass(x, iv, lp, tail);
    return row;
}

LinkSampler::LinkSampler(LatticeParams lp, SampleOptions opts) : lp_(std::move(lp)), opts_(opts) {}

Configuration LinkSampler::sample(const Configuration& x, std::mt19937_64& rng)
{
    if (x.size() < 2) fail(ErrorCode::SizeMismatch, "link sample needs a source with at least two points");
    if (opts_.method == SampleMethod::Enumeration) return sample_enumeration(x, rng);
    return sample_gibbs(x, rng);
}

Configuration LinkSampler::sample_enumeration(const Configuration& x, std::mt19937_64& rng)
{
    auto it = cache_.find(x);
    if (it == cache_.end()) {
        LinkRow row = link_row(x, lp_, opts_.tail);
        std::vector<Configuration> cfg;
        std::vector<double> cdf;
        cfg.reserve(row.entries.size());
        cdf.reserve(row.entries.size());
        double s = 0.0;
        for (auto& e : row.entries) {
            s += e.probability;
            cfg.push_back(std::move(e.config));
            cdf.push_back(s);
        }
        it = cache_.emplace(x, std::make_pair(std::move(cfg), std::move(cdf))).first;
    }
    const auto& [cfg, cdf] = it->second;
    std::uniform_real_distribution<double> u(0.0, cdf.back());
    const double t = u(rng);
    const auto pos = std::upper_bound(cdf.begin(), cdf.end(), t) - cdf.begin();
    return cfg[std::min<std::size_t>(pos, cfg.size() - 1)];
}

Configuration LinkSampler::sample_gibbs(const Configuration& x, std::mt19937_64& rng)
{
    const std::size_t n = x.size() - 1;
    const double q = lp_.q().value();
    const auto xv = x.values(lp_);

    // Candidates per interval with their values. The zero-crossing interval is
    // stored as two runs, each ordered from the outer end towards 0.
    struct Run {
        std::vector<LatticePoint> pts;
        std::vector<double> vals;
    };
    std::vector<std::vector<Run>> runs(n);
    int crossing = -1;
    for (std::size_t k = 0; k < n; ++k) {
        if (!x[k].positive() && x[k + 1].positive()) {
            crossing = static_cast<int>(k);
            for (Branch b : {Branch::Minus, Branch::Plus}) {
                const LatticePoint start = b == Branch::Minus ? x[k] : x[k + 1];
                const std::int64_t stop = std::max(start.m, lp_.innermost(b, opts_.tail));
                Run r;
                for (std::int64_t m = start.m; m <= stop; ++m) {
                    r.pts.push_back({b, m});
                    r.vals.push_back(lp_.value(r.pts.back()));
                }
                runs[k].push_back(std::move(r));
            }
        } else {
            Run r;
            r.pts = interval_I(x[k], x[k + 1], lp_, opts_.tail).points;
            for (const auto& p : r.pts) r.vals.push_back(lp_.value(p));
            runs[k].push_back(std::move(r));
        }
    }

    std::vector<double> y(n);
    std::vector<LatticePoint> yp(n);
    std::vector<const LatticePoint*> cand;
    std::vector<double> wts;

    auto gather = [&](std::size_t k, bool init) {
        cand.clear();
        wts.clear();
        const std::vector<double>& others = init ? xv : y;
        auto weight = [&](double c) {
            double w = std::abs(c);
            for (std::size_t j = 0; j < others.size(); ++j) {
                if (init || j != k) w *= std::abs(others[j] - c);
            }
            return w;
        };
        // bound on the total weight of all candidates with |c| <= r
        auto bound_inside = [&](double r) {
            double b = r;
            for (std::size_t j = 0; j < others.size(); ++j) {
                if (init || j != k) b *= std::abs(others[j]) + r;
            }
            return b / (1.0 - q);
        };
        const bool cross = static_cast<int>(k) == crossing;
        double wmax = 0.0;
        for (const Run& r : runs[k]) {
            for (std::size_t i = 0; i < r.pts.size(); ++i) {
                const double w = weight(r.vals[i]);
                cand.push_back(&r.pts[i]);
                wts.push_back(w);
                wmax = std::max(wmax, w);
                if (cross && bound_inside(std::abs(r.vals[i]) * q) < 1e-19 * wmax) break;
            }
        }
    };

    // Initialise each coordinate at the mode of its interval.
    for (std::size_t k = 0; k < n; ++k) {
        gather(k, true);
        const auto best = std::max_element(wts.begin(), wts.end()) - wts.begin();
        yp[k] = *cand[best];
        y[k] = lp_.value(yp[k]);
    }

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // with one coordinate the conditional is the row itself
    const int sweeps = n == 1 ? 1 : opts_.sweeps;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t k = 0; k < n; ++k) {
            gather(k, false);
            double total = 0.0;
            for (double w : wts) total += w;
            double t = unif(rng) * total;
            std::size_t pick = wts.size() - 1;
            for (std::size_t i = 0; i < wts.size(); ++i) {
                t -= wts[i];
                if (t < 0.0) {
                    pick = i;
                    break;
                }
            }
            yp[k] = *cand[pick];
            y[k] = lp_.value(yp[k]);
        }
    }
    return Configuration(yp);
}

Configuration link_sample(const Configuration& x, const LatticeParams& lp, std::mt19937_64& rng,
                          const SampleOptions& opts)
{
    LinkSampler s(lp, opts);
    return s.sample(x, rng);
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block)
{
    // splitmix64 over the pair
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (block + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

LinkRow link_compose(const Configuration& x, std::size_t k, const LatticeParams& lp, const ComposeOptions& opts)
{
    const std::size_t n = x.size();
    if (k < 1 || k >= n) fail(ErrorCode::InvalidArgument, "link_compose needs 1 <= K < N");

    if (opts.strategy == ComposeStrategy::Exact) {
        std::map<Configuration, double> cur{{x, 1.0}};
        double tail = 0.0;
        for (std::size_t level = n; level > k; --level) {
            std::map<Configuration, double> next;
            for (const auto& [z, p] : cur) {
                const LinkRow row = link_row(z, lp, opts.tail);
                tail += p * row.tail_mass_bound;
                for (const auto& e : row.entries) next[e.config] += p * e.probability;
                if (next.size() > opts.budget) {
                    fail(ErrorCode::BudgetExceeded, "exact composition exceeded " + std::to_string(opts.budget) +
                                                        " configurations");
                }
            }
            cur = std::move(next);
        }
        LinkRow out;
        out.source = x;
        out.tail_mass_bound = tail;
        out.entries.reserve(cur.size());
        for (auto& [c, p] : cur) out.entries.push_back({c, p, 0.0});
        return out;
    }

    constexpr std::size_t kBlock = 1024;
    const std::size_t blocks = (opts.paths + kBlock - 1) / kBlock;
    std::vector<std::map<Configuration, std::size_t>> counts(blocks);
    auto run_block = [&](std::size_t b) {
        LinkSampler sampler(lp, opts.sampling);
        std::mt19937_64 rng(block_seed(opts.seed, b));
        const std::size_t begin = b * kBlock;
        const std::size_t end = std::min(opts.paths, begin + kBlock);
        for (std::size_t p = begin; p < end; ++p) {
            Configuration z = x;
            while (z.size() > k) z = sampler.sample(z, rng);
            ++counts[b][z];
        }
    };
    const unsigned threads = std::max(1u, opts.threads);
    if (threads == 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t b = t; b < blocks; b += threads) run_block(b);
            });
        }
        for (auto& th : pool) th.join();
    }
    std::map<Configuration, std::size_t> total;
    for (const auto& m : counts) {
        for (const auto& [c, v] : m) total[c] += v;
    }
    LinkRow out;
    out.source = x;
    out.samples = opts.paths;
    const double np = static_cast<double>(opts.paths);
    for (const auto& [c, v] : total) {
        const double p = static_cast<double>(v) / np;
        out.entries.push_back({c, p, std::sqrt(p * (1.0 - p) / np)});
    }
    return out;
}

Signature::Signature(std::vector<int> p) : parts(std::move(p))
{
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i] > parts[i - 1]) fail(ErrorCode::InvalidArgument, "signature must be weakly decreasing");
    }
}

int Signature::size() const
{
    return std::accumulate(parts.begin(), parts.end(), 0);
}

Signature Signature::padded(std::size_t n) const
{
    if (n < parts.size()) {
        for (std::size_t i = n; i < parts.size(); ++i) {
            if (parts[i] != 0) fail(ErrorCode::SizeMismatch, "signature longer than the level");
        }
        return Signature(std::vector<int>(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(n)));
    }
    std::vector<int> p = parts;
    p.resize(n, 0);
    return Signature(std::move(p));
}

std::vector<Signature> partitions_up_to(int max_size, std::size_t max_len)
{
    std::vector<Signature> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int remaining, int largest) {
        Signature s(cur);
        out.push_back(s.padded(max_len));
        if (cur.size() == max_len) return;
        for (int part = std::min(remaining, largest); part >= 1; --part) {
            cur.push_back(part);
            rec(remaining - part, part);
            cur.pop_back();
        }
    };
    rec(max_size, max_size);
    return out;
}

namespace {

double schur_branching(const std::vector<int>& nu, std::span<const double> x, std::map<std::vector<int>, double>& memo,
                       std::size_t level)
{
    if (level == 1) return std::pow(x[0], nu[0]);
    std::vector<int> key = nu;
    key.push_back(static_cast<int>(level) + 100000);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int total = std::accumulate(nu.begin(), nu.end(), 0);
    std::vector<int> mu(level - 1);
    double sum = 0.0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == level - 1) {
            const int sm = std::accumulate(mu.begin(), mu.end(), 0);
            sum += std::pow(x[level - 1], total - sm) * schur_branching(mu, x, memo, level - 1);
            return;
        }
        for (int v = nu[i + 1]; v <= nu[i]; ++v) {
            mu[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    memo[key] = sum;
    return sum;
}

} // namespace

double schur_eval(const Signature& nu, std::span<const double> x, SchurMethod method)
{
    const std::size_t n = x.size();
    if (nu.length() != n) fail(ErrorCode::SizeMismatch, "signature length must equal the number of variables");
    if (n == 0) return 1.0;
    if (method == SchurMethod::Branching) {
        std::map<std::vector<int>, double> memo;
        return schur_branching(nu.parts, x, memo, n);
    }
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const int e = nu.parts[i] + static_cast<int>(n - 1 - i);
        for (std::size_t j = 0; j < n; ++j) a(i, j) = std::pow(x[j], e);
    }
    double d = a.partialPivLu().determinant();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) d /= x[i] - x[j];
    }
    return d;
}

double schur_eval(const Signature& nu, const Configuration& x, const LatticeParams& lp, SchurMethod method)
{
    const auto v = x.values(lp);
    return schur_eval(nu, std::span<const double>(v), method);
}

double schur_q_specialization(const Signature& nu, const QBase& q)
{
    const std::size_t n = nu.length();
    double r = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double num = q.pow(nu.parts[j] + static_cast<int>(n - 1 - j)) -
                               q.pow(nu.parts[i] + static_cast<int>(n - 1 - i));
            const double den = q.pow(static_cast<int>(n - 1 - j)) - q.pow(static_cast<int>(n - 1 - i));
            r *= num / den;
        }
    }
    return r;
}

double schur_tilde(const Signature& nu, const Configuration& x, const LatticeParams& lp)
{
    const Signature s = nu.padded(x.size());
    return schur_eval(s, x, lp) / schur_q_specialization(s, lp.q());
}

IdentityCheck branching_identity_check(const Configuration& x, std::size_t k, const Signature& nu,
                                       const LatticeParams& lp, const TailSpec& tail)
{
    ComposeOptions opts;
    opts.tail = tail;
    return branching_identity_check(link_compose(x, k, lp, opts), k, nu, lp);
}

IdentityCheck branching_identity_check(const LinkRow& row, std::size_t k, const Signature& nu, const LatticeParams& lp)
{
    const Configuration& x = row.source;
    const Signature sk = nu.padded(k);
    const double qspec = schur_q_specialization(sk, lp.q());
    IdentityCheck r;
    double s = 0.0, c = 0.0;
    for (const auto& e : row.entries) {
        const double t = e.probability * schur_eval(sk, e.config, lp) / qspec;
        const double yk = t - c;
        const double ss = s + yk;
        c = (ss - s) - yk;
        s = ss;
    }
    r.lhs = s;
    r.rhs = schur_tilde(nu, x, lp);
    // |S_nu(Y)| <= S_nu(R,...,R) for partitions, R = max |x|
    double big = 0.0;
    for (const auto& p : x) big = std::max(big, lp.abs_value(p));
    std::vector<double> ones(k, big);
    const double sup = schur_eval(sk, std::span<const double>(ones), SchurMethod::Branching) / qspec;
    r.tail_bound = row.tail_mass_bound * std::abs(sup);
    r.scale = std::max(std::abs(r.rhs), std::abs(sup) * 1e-6);
    return r;
}

int interlace_det(const Configuration& x, const Configuration& y)
{
    if (x.size() != y.size() + 1) fail(ErrorCode::SizeMismatch, "interlace_det needs |X| = |Y| + 1");
    const std::size_t n = x.size();
    std::vector<std::vector<long long>> a(n, std::vector<long long>(n, 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const bool tri = y[j].positive() ? x[i] < y[j] : x[i] <= y[j];
            a[i][j] = tri ? 1 : 0;
        }
    }
    // Bareiss fraction-free elimination
    int sign = 1;
    long long prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    return static_cast<int>(sign * a[n - 1][n - 1]);
}

} // namespace qzw
