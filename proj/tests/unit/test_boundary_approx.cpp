#include "doctest.h"

#include "qzw/boundary_approx.hpp"
#include "qzw/error.hpp"

#include <cmath>

using namespace qzw;

namespace {

const LatticeParams kLp(0.5, -1.0, 1.0);
const cplx I(0.0, 1.0);

ParamQuadruple reference() { return ParamQuadruple(1.0 + I, 1.0 - I, 8.0 * (1.0 + I), 8.0 * (1.0 - I), kLp); }

BoundaryPoint alternating(int p)
{
    std::vector<LatticePoint> pts;
    for (int m = 0; m < p; ++m) pts.push_back(m % 2 == 0 ? LatticePoint::plus(m) : LatticePoint::minus(m));
    return make_boundary_point(pts, kLp);
}

} // namespace

TEST_CASE("boundary point prefix")
{
    const BoundaryPoint bp = alternating(10);
    CHECK(bp.length() == 10);
    CHECK(bp.tail_bound == doctest::Approx(std::pow(0.5, 4)));
    CHECK(bp.prefix.terms[0] == LatticePoint::plus(0));
    CHECK(bp.prefix.terms[1] == LatticePoint::minus(1));
    CHECK(bp.truncate(3) == parse_points("-1,+2,+0"));
    CHECK_THROWS_AS(bp.truncate(11), Error);
    CHECK_THROWS_AS(make_boundary_point({}, kLp), Error);
    CHECK_THROWS_AS(make_boundary_point({LatticePoint::plus(1), LatticePoint::plus(1)}, kLp), Error);

    CHECK_NOTHROW(approx_boundary_link(bp, 1, {2}, kLp));
    CHECK_THROWS_AS(approx_boundary_link(bp, 1, {2, 12}, kLp), Error);
    CHECK_THROWS_AS(approx_boundary_link(bp, 2, {2, 3}, kLp), Error);
}

TEST_CASE("approximant rows along a schedule")
{
    const BoundaryPoint bp = alternating(10);
    ApproxOptions opts;

    const ApproxReport one = approx_boundary_link(bp, 3, {4}, kLp, opts);
    REQUIRE(one.steps.size() == 1);
    const LinkRow direct = link_row(bp.truncate(4), kLp, opts.tail);
    CHECK(total_variation(one.steps[0].row, direct) < 1e-15);

    for (std::size_t k : {1, 2}) {
        const ApproxReport rep = approx_boundary_link(bp, k, {k + 1, k + 2, k + 3}, kLp, opts);
        REQUIRE(rep.steps.size() == 3);
        for (const auto& st : rep.steps) {
            CHECK(st.exact);
            const double mass = st.row.enumerated_mass();
            CHECK(mass <= 1.0 + 1e-12);
            CHECK(mass >= 1.0 - st.row.tail_mass_bound - 1e-12);
            CHECK(st.moments_checked > 0);
            CHECK(st.max_moment_residual < 1e-8);
        }
        CHECK(rep.steps[2].tv_to_previous < rep.steps[1].tv_to_previous);
        CHECK_FALSE(rep.stabilized);
    }

    // Monte-Carlo rows agree with the exact ones
    ApproxOptions mc = opts;
    mc.strategy = ApproxStrategy::MonteCarlo;
    mc.paths = 20'000;
    mc.threads = 4;
    const ApproxReport exact = approx_boundary_link(bp, 1, {4}, kLp, opts);
    const ApproxReport est = approx_boundary_link(bp, 1, {4}, kLp, mc);
    CHECK_FALSE(est.steps[0].exact);
    CHECK(total_variation(exact.steps[0].row, est.steps[0].row) < 0.03);
}

TEST_CASE("law of large numbers")
{
    // the top interval (q, 1] holds a single lattice point
    const BoundaryPoint tight = make_boundary_point({LatticePoint::plus(0), LatticePoint::plus(1)}, kLp);
    const auto deg = lln_check(tight, 1, {1}, 100, kLp);
    CHECK(deg[0].exact);
    CHECK(deg[0].probability == 1.0);

    ApproxOptions opts;
    opts.threads = 4;
    const BoundaryPoint bp = alternating(8);
    const auto rows = lln_check(bp, 1, {1, 3, 5, 7}, 4000, kLp, opts);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double se = std::hypot(rows[i].std_error, rows[i - 1].std_error);
        CHECK(rows[i].probability >= rows[i - 1].probability - 2.0 * se);
    }
    CHECK(rows.back().probability > 0.95);
    CHECK_THROWS_AS(lln_check(bp, 1, {8}, 100, kLp), Error);
}

TEST_CASE("correlation functions converge to the boundary ones")
{
    const std::vector<int> ns{10, 15, 20, 25, 30};
    const auto one = correlation_convergence(reference(), ns, {LatticePoint::plus(2)});
    const auto same = correlation_convergence(reference(), ns, {LatticePoint::plus(1), LatticePoint::plus(3)});
    const auto mixed = correlation_convergence(reference(), ns, {LatticePoint::plus(1), LatticePoint::minus(2)});
    for (const auto* t : {&one, &same, &mixed}) {
        for (std::size_t i = 1; i < t->size(); ++i) CHECK((*t)[i].gap < (*t)[i - 1].gap);
    }
    CHECK(one.back().gap < 1e-3);
    CHECK(same.back().gap < 5e-3);
    CHECK(mixed.back().gap < 1e-6);
}
