#include "qzw/boundary_approx.hpp"

#include "qzw/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace qzw {

Configuration BoundaryPoint::truncate(std::size_t n) const
{
    if (n > length()) {
        fail(ErrorCode::PrefixTooShort,
             "prefix has " + std::to_string(length()) + " terms, level " + std::to_string(n) + " requested");
    }
    return Configuration::from_unsorted({prefix.terms.begin(), prefix.terms.begin() + static_cast<std::ptrdiff_t>(n)});
}

BoundaryPoint make_boundary_point(std::vector<LatticePoint> points, const LatticeParams& lp)
{
    if (points.empty()) fail(ErrorCode::InvalidArgument, "boundary point needs a nonempty prefix");
    if (std::set<LatticePoint>(points.begin(), points.end()).size() != points.size()) {
        fail(ErrorCode::DuplicatePoints, "boundary point prefix repeats a point");
    }
    BoundaryPoint bp;
    bp.prefix = variational_series(std::move(points), lp);
    if (!satisfies_decay_bound(bp.prefix, lp)) {
        fail(ErrorCode::InvalidArgument, "prefix violates |x_(2n)| <= |x_(1)| q^{n-1}, |x_(2n+1)| <= |x_(1)| q^n");
    }
    const auto p = static_cast<std::int64_t>(bp.length());
    bp.tail_bound = lp.abs_value(bp.prefix.terms.front()) * lp.q().pow((p - 1) / 2);
    return bp;
}

namespace {

bool use_exact(std::size_t n, std::size_t k, const ApproxOptions& opts)
{
    switch (opts.strategy) {
    case ApproxStrategy::Exact: return true;
    case ApproxStrategy::MonteCarlo: return false;
    case ApproxStrategy::Auto: break;
    }
    return n - k <= 3;
}

LinkRow compose(const Configuration& x, std::size_t k, bool exact, const LatticeParams& lp, const ApproxOptions& opts)
{
    ComposeOptions co;
    co.strategy = exact ? ComposeStrategy::Exact : ComposeStrategy::MonteCarlo;
    co.paths = opts.paths;
    co.seed = opts.seed;
    co.threads = opts.threads;
    co.tail = opts.tail;
    co.sampling.tail = opts.tail;
    return link_compose(x, k, lp, co);
}

} // namespace

ApproxReport approx_boundary_link(const BoundaryPoint& bp, std::size_t k, const std::vector<std::size_t>& schedule,
                                  const LatticeParams& lp, const ApproxOptions& opts)
{
    if (schedule.empty()) fail(ErrorCode::InvalidArgument, "empty level schedule");
    if (k < 1 || k >= *std::min_element(schedule.begin(), schedule.end())) {
        fail(ErrorCode::InvalidArgument, "need 1 <= K < min(schedule)");
    }
    ApproxReport rep;
    rep.k = k;
    int below = 0;
    for (std::size_t n : schedule) {
        ApproxStep st;
        st.n = n;
        const Configuration x = bp.truncate(n);
        st.exact = use_exact(n, k, opts);
        st.row = compose(x, k, st.exact, lp, opts);
        if (!rep.steps.empty()) {
            st.tv_to_previous = total_variation(rep.steps.back().row, st.row);
            below = st.tv_to_previous < opts.stabilization_tv ? below + 1 : 0;
            if (below >= 2) rep.stabilized = true;
        }
        if (st.exact) {
            for (const auto& nu : partitions_up_to(opts.moment_max_size, k)) {
                const IdentityCheck c = branching_identity_check(st.row, k, nu, lp);
                st.max_moment_residual = std::max(st.max_moment_residual, c.residual());
                ++st.moments_checked;
            }
        }
        rep.steps.push_back(std::move(st));
    }
    return rep;
}

std::vector<LlnRow> lln_check(const BoundaryPoint& bp, std::size_t k, const std::vector<std::size_t>& levels,
                              std::size_t sample_budget, const LatticeParams& lp, const ApproxOptions& opts)
{
    const std::size_t n = bp.length();
    const LatticePoint target = bp.prefix.terms.at(k - 1);
    std::vector<LlnRow> rows;
    for (std::size_t level : levels) {
        if (k < 1 || k > level) fail(ErrorCode::InvalidArgument, "need 1 <= k <= L");
        if (level >= n) fail(ErrorCode::PrefixTooShort, "prefix must be longer than every scheduled level");
        LlnRow r;
        r.level = level;
        r.n = n;
        // exact composition of several steps from a long prefix is too large; only single rows are enumerated
        r.exact = opts.strategy == ApproxStrategy::Exact || n - level == 1;
        if (opts.strategy == ApproxStrategy::MonteCarlo) r.exact = false;
        ApproxOptions o = opts;
        o.paths = sample_budget;
        const LinkRow row = compose(bp.truncate(n), level, r.exact, lp, o);
        for (const auto& e : row.entries) {
            if (variational_series(e.config, lp).terms[k - 1] == target) r.probability += e.probability;
        }
        if (!r.exact) {
            const double p = r.probability;
            r.std_error = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(row.samples));
        }
        rows.push_back(r);
    }
    return rows;
}

std::vector<CorrelationRow> correlation_convergence(const ParamQuadruple& pq, const std::vector<int>& schedule,
                                                    const std::vector<LatticePoint>& points)
{
    const BoundaryKernel bk(pq);
    const double limit = boundary_correlation(points, bk).raw;
    std::vector<CorrelationRow> rows;
    for (int n : schedule) {
        const EnsembleN ens(pq, n);
        CorrelationRow r;
        r.n = n;
        r.finite = correlation_N(points, ens).raw;
        r.limit = limit;
        r.gap = std::abs(r.finite - r.limit);
        rows.push_back(r);
    }
    return rows;
}

} // namespace qzw
