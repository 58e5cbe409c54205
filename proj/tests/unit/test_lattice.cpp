#include "doctest.h"

#include "qzw/error.hpp"
#include "qzw/graph_links.hpp"
#include "qzw/lattice.hpp"

#include <algorithm>
#include <random>

using namespace qzw;

namespace {

const LatticeParams kLp(0.5, -1.0, 1.0);

LatticePoint P(std::int64_t m) { return LatticePoint::plus(m); }
LatticePoint M(std::int64_t m) { return LatticePoint::minus(m); }

std::vector<double> vals(const IntervalPoints& ip)
{
    std::vector<double> v;
    for (const auto& p : ip.points) v.push_back(kLp.value(p));
    return v;
}

Configuration random_config(std::mt19937_64& rng, std::size_t n, int lo, int hi)
{
    std::uniform_int_distribution<int> m(lo, hi), s(0, 1);
    std::vector<LatticePoint> pts;
    while (pts.size() < n) {
        const LatticePoint p{s(rng) ? Branch::Plus : Branch::Minus, m(rng)};
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    return Configuration::from_unsorted(pts);
}

} // namespace

TEST_CASE("lattice params validation")
{
    CHECK_THROWS_AS(LatticeParams(0.5, 1.0, 1.0), Error);
    CHECK_THROWS_AS(LatticeParams(0.5, -1.0, -2.0), Error);
    CHECK_THROWS_AS(LatticeParams(1.5, -1.0, 1.0), Error);
}

TEST_CASE("point order agrees with values")
{
    const LatticeParams lp(0.5, -0.7, 1.3);
    std::vector<LatticePoint> pts;
    for (int m = -5; m <= 5; ++m) {
        pts.push_back(P(m));
        pts.push_back(M(m));
    }
    for (const auto& a : pts)
        for (const auto& b : pts) {
            const auto c = a <=> b;
            const double va = lp.value(a), vb = lp.value(b);
            CHECK((c < 0) == (va < vb));
            CHECK((c == 0) == (va == vb));
        }
}

TEST_CASE("locate and compare_abs")
{
    CHECK(kLp.locate(-0.25) == M(2));
    CHECK(kLp.locate(4.0) == P(-2));
    CHECK(!kLp.locate(0.3).has_value());
    CHECK(kLp.compare_abs(M(1), P(1)) == 0);
    CHECK(kLp.compare_abs(M(2), P(1)) < 0);
}

TEST_CASE("interval I")
{
    CHECK(vals(interval_I(M(0), M(2), kLp)) == std::vector<double>{-1.0, -0.5});
    CHECK(vals(interval_I(P(2), P(0), kLp)) == std::vector<double>{0.5, 1.0});
    TailSpec t;
    t.cutoff = 0.2;
    const IntervalPoints mid = interval_I(M(0), P(0), kLp, t);
    CHECK(vals(mid) == std::vector<double>{-1.0, -0.5, -0.25, 0.25, 0.5, 1.0});
    CHECK(mid.truncated);
    CHECK_THROWS_AS(interval_I(P(0), P(2), kLp), Error);
    CHECK_THROWS_AS(interval_I(P(0), P(0), kLp), Error);
}

TEST_CASE("interval I tilde")
{
    CHECK(vals(interval_I_tilde(Endpoint::at(M(0)), Endpoint::at(M(2)), kLp)) == std::vector<double>{-0.5, -0.25});
    CHECK(vals(interval_I_tilde(Endpoint::at(P(2)), Endpoint::at(P(0)), kLp)) == std::vector<double>{0.25, 0.5});
    TailSpec t;
    t.cap = 5.0;
    const IntervalPoints left = interval_I_tilde(Endpoint::neg_inf(), Endpoint::at(M(1)), kLp, t);
    CHECK(vals(left) == std::vector<double>{-4.0, -2.0, -1.0, -0.5});
    CHECK(left.truncated);
    CHECK(in_interval_I_tilde(P(-30), Endpoint::at(P(3)), Endpoint::pos_inf()));
    CHECK(in_interval_I_tilde(P(3), Endpoint::at(P(3)), Endpoint::pos_inf()));
    CHECK(!in_interval_I_tilde(M(0), Endpoint::at(M(0)), Endpoint::at(P(0))));
}

TEST_CASE("interlacing examples")
{
    CHECK(interlace(parse_points("-0,+0"), parse_points("+0")));
    CHECK(!interlace(parse_points("-0,-1"), parse_points("-1")));
    CHECK(!interlace(parse_points("+1,+0"), parse_points("+1")));
    CHECK_THROWS_AS(interlace(parse_points("+0"), parse_points("+0")), Error);
}

TEST_CASE("I and I tilde interlacing agree with the determinant")
{
    std::mt19937_64 rng(17);
    int positives = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 1 + rng() % 6;
        const Configuration y = random_config(rng, n, -3, 3);
        Configuration x;
        if (i % 2 == 0) {
            x = random_config(rng, n + 1, -4, 4);
        } else {
            // draw one particle per I~ interval so that about half interlace
            std::vector<LatticePoint> pts;
            TailSpec t;
            t.cutoff = 1.0 / 64;
            t.cap = 64.0;
            for (std::size_t j = 0; j <= n; ++j) {
                const Endpoint a = j == 0 ? Endpoint::neg_inf() : Endpoint::at(y[j - 1]);
                const Endpoint b = j == n ? Endpoint::pos_inf() : Endpoint::at(y[j]);
                const auto ip = interval_I_tilde(a, b, kLp, t);
                if (ip.points.empty()) continue;
                pts.push_back(ip.points[rng() % ip.points.size()]);
            }
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            if (pts.size() != n + 1) continue;
            x = Configuration(pts);
        }
        const bool a = interlace(x, y);
        CHECK(a == interlace_tilde(x, y));
        CHECK(interlace_det(x, y) == (a ? 1 : 0));
        positives += a;
    }
    CHECK(positives > 100);
}

TEST_CASE("I tilde intervals partition the lattice")
{
    std::mt19937_64 rng(23);
    TailSpec t;
    t.cutoff = 1.0 / 256;
    t.cap = 256.0;
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = 1 + rng() % 5;
        const Configuration y = random_config(rng, n, -3, 3);
        std::vector<LatticePoint> all;
        for (std::size_t j = 0; j <= n; ++j) {
            const Endpoint a = j == 0 ? Endpoint::neg_inf() : Endpoint::at(y[j - 1]);
            const Endpoint b = j == n ? Endpoint::pos_inf() : Endpoint::at(y[j]);
            const auto ip = interval_I_tilde(a, b, kLp, t);
            all.insert(all.end(), ip.points.begin(), ip.points.end());
        }
        CHECK(std::is_sorted(all.begin(), all.end()));
        CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
        // every point with 1/256 <= |x| <= 256 appears: 9 exponents per branch
        CHECK(all.size() == 2 * 17);
    }
}

TEST_CASE("configuration parsing and validation")
{
    const Configuration c = parse_points("+0,-1,+3");
    CHECK(c.size() == 3);
    CHECK(c[0] == M(1));
    CHECK(c[1] == P(3));
    CHECK(to_string(c) == "-1,+3,+0");
    CHECK_THROWS_AS(Configuration({P(0), P(1)}), Error);
    CHECK_THROWS_AS(Configuration::from_unsorted({P(0), P(0)}), Error);
    CHECK_THROWS_AS(parse_point("x3"), Error);
}

TEST_CASE("variational series")
{
    auto vs = [](const char* s) {
        std::vector<double> v;
        for (const auto& p : variational_series(parse_points(s), kLp).terms) v.push_back(kLp.value(p));
        return v;
    };
    CHECK(vs("-0,+1,+0") == std::vector<double>{1.0, -1.0, 0.5});
    CHECK(vs("+2") == std::vector<double>{0.25});
    CHECK(vs("-1,+2,+0") == std::vector<double>{1.0, -0.5, 0.25});

    std::mt19937_64 rng(29);
    for (int i = 0; i < 200; ++i) {
        const Configuration x = random_config(rng, 1 + rng() % 8, -2, 6);
        CHECK(satisfies_decay_bound(variational_series(x, kLp), kLp));
    }
}
