#include "doctest.h"

#include "qzw/error.hpp"
#include "qzw/graph_links.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace qzw;

namespace {

const LatticeParams kLp(0.5, -1.0, 1.0);

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

TEST_CASE("wt and dim examples")
{
    CHECK(weight_wt(parse_points("-0,+0"), parse_points("+0"), kLp) == 1.0);
    CHECK(weight_wt(parse_points("-0,+0"), parse_points("+1"), kLp) == 0.5);
    CHECK(weight_wt(parse_points("-0,-1"), parse_points("-1"), kLp) == 0.0);
    CHECK(dim(parse_points("-3"), kLp) == 1.0);
    CHECK(std::abs(dim(parse_points("+1,+0"), kLp) - 1.0) < 1e-15);
    CHECK(std::abs(dim(parse_points("-0,+0"), kLp) - 4.0) < 1e-15);
    CHECK(std::abs(std::exp(log_dim(parse_points("-0,+2,+0"), kLp)) - dim(parse_points("-0,+2,+0"), kLp)) < 1e-12);
}

TEST_CASE("dimension recurrence")
{
    const auto r1 = dim_recurrence_check(parse_points("+1,+0"), kLp);
    CHECK(r1.rhs == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r1.tail_bound == 0.0);
    const auto r2 = dim_recurrence_check(parse_points("-0,+0"), kLp);
    CHECK(r2.residual() < 1e-10);
    CHECK(std::abs(r2.lhs - r2.rhs) < 1e-10);

    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
        const auto x = random_config(rng, 3, -2, 4);
        CHECK(dim_recurrence_check(x, kLp).residual() < 1e-10);
    }
}

TEST_CASE("geometric summation")
{
    const auto a = geometric_summation_check(LatticePoint::minus(0), LatticePoint::plus(0), 1, kLp);
    CHECK(a.lhs == 2.0);
    CHECK(a.residual() < 1e-12);
    const auto b = geometric_summation_check(LatticePoint::plus(2), LatticePoint::plus(0), 1, kLp);
    CHECK(b.lhs == 0.75);
    CHECK(b.rhs == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(geometric_summation_check(LatticePoint::plus(0), LatticePoint::plus(2), 1, kLp), Error);

    const LatticeParams lp(0.37, -0.8, 1.7);
    std::mt19937_64 rng(37);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_config(rng, 2, -3, 5);
        const int n = 1 + static_cast<int>(rng() % 4);
        CHECK(geometric_summation_check(c[0], c[1], n, lp).residual() < 1e-12);
    }
}

TEST_CASE("link rows are stochastic and match wt Dim / Dim")
{
    const LinkRow single = link_row(parse_points("+1,+0"), kLp);
    REQUIRE(single.entries.size() == 1);
    CHECK(single.entries[0].config == parse_points("+0"));
    CHECK(single.entries[0].probability == doctest::Approx(1.0).epsilon(1e-15));

    const LinkRow r = link_row(parse_points("-0,+0"), kLp);
    CHECK(std::abs(r.enumerated_mass() + r.tail_mass_bound - 1.0) < 1e-12);
    CHECK(r.enumerated_mass() <= 1.0 + 1e-14);

    std::mt19937_64 rng(41);
    for (int n = 2; n <= 5; ++n) {
        for (int i = 0; i < 5; ++i) {
            const auto x = random_config(rng, static_cast<std::size_t>(n), -2, 4);
            const LinkRow row = link_row(x, kLp);
            const double mass = row.enumerated_mass();
            CHECK(mass <= 1.0 + 1e-12);
            CHECK(mass >= 1.0 - row.tail_mass_bound - 1e-10);
            const double dx = dim(x, kLp);
            for (std::size_t k = 0; k < row.entries.size(); k += 97) {
                const auto& e = row.entries[k];
                const double alt = weight_wt(x, e.config, kLp) * dim(e.config, kLp) / dx;
                CHECK(std::abs(e.probability - alt) <= 1e-14 * std::max(alt, 1e-300) + 1e-300);
            }
        }
    }
}

TEST_CASE("composition")
{
    const auto x = parse_points("-0,+2,+0");
    ComposeOptions opts;
    const LinkRow one = link_compose(x, 2, kLp, opts);
    const LinkRow row = link_row(x, kLp);
    CHECK(total_variation(one, row) < 1e-15);

    const LinkRow two = link_compose(x, 1, kLp, opts);
    CHECK(std::abs(two.enumerated_mass() + two.tail_mass_bound - 1.0) < 1e-9);
    // compose by hand
    std::map<Configuration, double> manual;
    for (const auto& e : row.entries) {
        for (const auto& f : link_row(e.config, kLp).entries) manual[f.config] += e.probability * f.probability;
    }
    for (const auto& e : two.entries) CHECK(std::abs(e.probability - manual[e.config]) < 1e-9);

    ComposeOptions tight;
    tight.budget = 10;
    CHECK_THROWS_AS(link_compose(x, 1, kLp, tight), Error);

    ComposeOptions mc;
    mc.strategy = ComposeStrategy::MonteCarlo;
    mc.paths = 100'000;
    mc.threads = 4;
    const LinkRow est = link_compose(x, 1, kLp, mc);
    CHECK(total_variation(est, two) < 0.01);
    mc.threads = 1;
    const LinkRow est1 = link_compose(x, 1, kLp, mc);
    CHECK(total_variation(est, est1) == 0.0);
}

TEST_CASE("link sampling")
{
    std::mt19937_64 rng(43);
    for (int i = 0; i < 10; ++i) CHECK(link_sample(parse_points("+1,+0"), kLp, rng) == parse_points("+0"));

    const auto x = parse_points("-0,+0");
    const LinkRow row = link_row(x, kLp);
    std::map<Configuration, int> counts;
    const int draws = 100'000;
    LinkSampler sampler(kLp);
    for (int i = 0; i < draws; ++i) ++counts[sampler.sample(x, rng)];
    // chi-square over cells with expected count >= 5, remainder pooled
    double chi2 = 0.0, pooled_e = 0.0, pooled_o = draws;
    int cells = 0;
    for (const auto& e : row.entries) {
        const double expct = e.probability * draws;
        if (expct < 5.0) continue;
        const double obs = counts.count(e.config) ? counts[e.config] : 0;
        chi2 += (obs - expct) * (obs - expct) / expct;
        pooled_e += expct;
        pooled_o -= obs;
        ++cells;
    }
    pooled_e = draws - pooled_e;
    if (pooled_e > 0) {
        chi2 += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
        ++cells;
    }
    const double p = boost::math::gamma_q(0.5 * (cells - 1), 0.5 * chi2);
    CHECK(p > 0.001);
}

TEST_CASE("gibbs and enumeration samplers agree at N=3")
{
    const auto x = parse_points("-0,+3,+1,+0");
    SampleOptions en;
    en.method = SampleMethod::Enumeration;
    LinkSampler gibbs(kLp), exact(kLp, en);
    std::mt19937_64 r1(1), r2(2);
    std::map<Configuration, double> a, b;
    const int draws = 100'000;
    for (int i = 0; i < draws; ++i) {
        a[gibbs.sample(x, r1)] += 1.0 / draws;
        b[exact.sample(x, r2)] += 1.0 / draws;
    }
    double tv = 0.0;
    for (const auto& [c, p] : a) tv += std::abs(p - (b.count(c) ? b[c] : 0.0));
    for (const auto& [c, p] : b)
        if (!a.count(c)) tv += p;
    CHECK(0.5 * tv < 0.02);
}

TEST_CASE("schur evaluation")
{
    const std::vector<double> x{0.5, 1.0};
    CHECK(schur_eval(Signature({0, 0}), x) == doctest::Approx(1.0));
    CHECK(schur_eval(Signature({1, 0}), x) == doctest::Approx(1.5));
    CHECK(schur_eval(Signature({2, 1}), x) == doctest::Approx(0.5 * 1.0 * 1.5));
    CHECK_THROWS_AS(Signature({0, 1}), Error);

    std::mt19937_64 rng(47);
    const QBase q(0.5);
    for (const auto& nu : partitions_up_to(5, 4)) {
        std::vector<double> qs(4);
        for (int i = 0; i < 4; ++i) qs[i] = q.pow(3 - i);
        const double spec = schur_q_specialization(nu, q);
        CHECK(std::abs(schur_eval(nu, qs) - spec) < 1e-12 * spec);
        const auto c = random_config(rng, 4, -2, 3);
        const double bi = schur_eval(nu, c, kLp, SchurMethod::Bialternant);
        const double br = schur_eval(nu, c, kLp, SchurMethod::Branching);
        CHECK(std::abs(bi - br) <= 1e-12 * std::max(1.0, std::abs(br)));
    }
    // signatures with negative parts
    const Signature neg({1, -2});
    const double v = schur_eval(neg, x);
    CHECK(v == doctest::Approx((std::pow(0.5, 2) * std::pow(1.0, -2) - std::pow(1.0, 2) * std::pow(0.5, -2)) / (0.5 - 1.0)));
}

TEST_CASE("schur tilde")
{
    const auto x = parse_points("+1,+0");
    CHECK(schur_tilde(Signature({0, 0}), x, kLp) == doctest::Approx(1.0));
    // X = q^{lambda + epsilon}: S~ equals S_nu(q^{lambda_i + N - i}) / S_nu(q^{N - i})
    const Signature lambda({3, 1, 0});
    std::vector<LatticePoint> pts;
    for (int i = 0; i < 3; ++i) pts.push_back(LatticePoint::plus(lambda.parts[i] + 2 - i));
    const auto c = Configuration::from_unsorted(pts);
    const Signature nu({2, 1, 0});
    std::vector<double> vals;
    for (int i = 0; i < 3; ++i) vals.push_back(std::pow(0.5, lambda.parts[i] + 2 - i));
    CHECK(schur_tilde(nu, c, kLp) == doctest::Approx(schur_eval(nu, vals) / schur_q_specialization(nu, QBase(0.5))));
}

TEST_CASE("symmetry of S~ under swapping lambda and nu")
{
    // S~_nu(q^{lambda+eps}) = S~_lambda(q^{nu+eps}) for partitions of equal length
    std::mt19937_64 rng(53);
    const QBase q(0.5);
    const auto parts = partitions_up_to(6, 3);
    for (int i = 0; i < 50; ++i) {
        const auto& lam = parts[rng() % parts.size()];
        const auto& nu = parts[rng() % parts.size()];
        std::vector<double> xl, xn;
        for (int j = 0; j < 3; ++j) {
            xl.push_back(q.pow(lam.parts[j] + 2 - j));
            xn.push_back(q.pow(nu.parts[j] + 2 - j));
        }
        const double a = schur_eval(nu, xl) / schur_q_specialization(nu, q);
        const double b = schur_eval(lam, xn) / schur_q_specialization(lam, q);
        CHECK(std::abs(a - b) < 1e-11 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("branching identity")
{
    const auto x = parse_points("+1,+0");
    const auto r = branching_identity_check(x, 1, Signature({1}), kLp);
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(r.rhs == doctest::Approx(1.0));
    const auto e = branching_identity_check(parse_points("-0,+0"), 1, Signature({0}), kLp);
    CHECK(e.residual() < 1e-12);

    std::mt19937_64 rng(59);
    for (int i = 0; i < 10; ++i) {
        const auto c = random_config(rng, 3, -2, 3);
        for (const auto& nu : partitions_up_to(4, 2)) CHECK(branching_identity_check(c, 2, nu, kLp).residual() < 1e-9);
    }
}

TEST_CASE("interlace_det")
{
    CHECK(interlace_det(parse_points("-0,+0"), parse_points("+0")) == 1);
    CHECK(interlace_det(parse_points("+2,+1"), parse_points("+0")) == 0);
    CHECK_THROWS_AS(interlace_det(parse_points("+0"), parse_points("+0")), Error);
}
