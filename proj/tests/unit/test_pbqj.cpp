#include "doctest.h"

#include "qzw/error.hpp"
#include "qzw/pbqj.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace qzw;

namespace {

const LatticeParams kLp(0.5, -1.0, 1.0);
const cplx I(0.0, 1.0);

PBQJParams reference() { return PBQJParams(1.0 + I, 1.0 - I, 8.0 * (1.0 + I), 8.0 * (1.0 - I), kLp); }
// four-particle ensemble parameters: c, d scaled by q^{-3}
PBQJParams n4() { return PBQJParams(1.0 + I, 1.0 - I, 64.0 * (1.0 + I), 64.0 * (1.0 - I), kLp); }
PBQJParams ex_a() { return PBQJParams(-1.0, 2.0, 8.0 * (1.0 + I), 8.0 * (1.0 - I), kLp); }
PBQJParams real_gap() { return PBQJParams(1.3, 1.4, 5.5, 6.0, kLp); }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

cplx direct_h0(const PBQJParams& p)
{
    return sum_lattice(p.lattice, [&](const LatticePoint& x) { return cplx(weight_w(x, p), 0.0); }).value;
}

} // namespace

TEST_CASE("pair classification")
{
    CHECK(classify_pair(1.0 + I, 1.0 - I, kLp) == PairKind::ConjugatePair);
    CHECK(classify_pair(1.3, 1.4, kLp) == PairKind::RealGap);
    CHECK(classify_pair(1.3, 2.6, kLp) == PairKind::Other);
    CHECK(classify_pair(2.0, 1.4, kLp) == PairKind::RealOnLattice);
    CHECK(classify_pair(1.0 + I, 2.0 - I, kLp) == PairKind::Other);
}

TEST_CASE("maximal degree")
{
    CHECK(n_max(reference()).n_max == 2);
    CHECK(n_max(n4()).n_max == 5);
    CHECK(n_max(ex_a()).n_max == kUnboundedDegree);
    // cdq/(ab) = 16 = q^{-4}: the strict inequality excludes n = 2
    const DegreeBound edge = n_max(PBQJParams(1.0, 1.0, 4.0, 8.0, kLp));
    CHECK(edge.n_max == 1);
    CHECK(edge.near_boundary);
}

TEST_CASE("weight")
{
    // 30-digit oracle values
    CHECK(rel(weight_w(LatticePoint::plus(0), n4()), 9.19393828755670602815644468243e-15) < 1e-12);
    CHECK(rel(weight_w(LatticePoint::minus(2), n4()), 4.74830144354299260511403936223e-10) < 1e-12);

    const PBQJParams same(0.3 + I, 0.3 - I, 0.3 + I, 0.3 - I, kLp);
    for (int m = -5; m <= 5; ++m) {
        CHECK(weight_w(LatticePoint::plus(m), same) == doctest::Approx(std::pow(0.5, m)).epsilon(1e-14));
        CHECK(weight_w(LatticePoint::minus(m), same) == doctest::Approx(std::pow(0.5, m)).epsilon(1e-14));
    }
    for (int m = -20; m <= 20; ++m) {
        CHECK(weight_w(LatticePoint::plus(m), reference()) > 0.0);
        CHECK(weight_w(LatticePoint::minus(m), reference()) > 0.0);
    }
    // w(z q^{-n-1}) / w(z q^{-n}) -> ab/(cdq)
    const PBQJParams p = reference();
    const double limit = 2.0 / (128.0 * 0.5);
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const double r = weight_w({b, -31}, p) / weight_w({b, -30}, p);
        CHECK(std::abs(r - limit) < 1e-6);
    }
    // a lattice zero of the denominator
    CHECK_THROWS_AS(weight_w(LatticePoint::plus(1), PBQJParams(1.0, 1.0, 2.0, 3.0, kLp)), Error);
    // degenerate example: vanishes outside [q/alpha, q/beta]
    CHECK(weight_w(LatticePoint::plus(0), ex_a()) == 0.0);
    CHECK(weight_w(LatticePoint::minus(0), ex_a()) == 0.0);
    CHECK(weight_w(LatticePoint::plus(2), ex_a()) > 0.0);
    CHECK(weight_w(LatticePoint::minus(1), ex_a()) > 0.0);
}

TEST_CASE("polynomial evaluation")
{
    const PBQJParams p = n4();
    CHECK(pbqj_eval(0, 0.37, p) == cplx(1.0, 0.0));
    CHECK(rel(pbqj_eval(2, 0.3, p), cplx(-32.2456934464421837641245748469, -343.282278148582414655576203057)) < 1e-12);
    CHECK(rel(pbqj_eval(3, -0.7, p), cplx(-37133.4013604268451640691397983, -23664.5485873439570498475065179)) < 1e-12);

    // n = 1 by hand: 1 + (1 - q^{-1})(1 - cdq^2/(ab))(1 - cx) q / ((1 - cq/b)(1 - cq/a)(1 - q))
    const double q = 0.5;
    for (double x : {-0.4, 0.2, 1.7}) {
        const cplx e = 1.0 + (1.0 - 1.0 / q) * (1.0 - p.c * p.d * q * q / (p.a * p.b)) * (1.0 - p.c * x) * q /
                                 ((1.0 - p.c * q / p.b) * (1.0 - p.c * q / p.a) * (1.0 - q));
        CHECK(rel(pbqj_eval(1, x, p), e) < 1e-14);
    }
}

TEST_CASE("relation to big q-Jacobi")
{
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const PBQJParams p = n4();
    const QBase q(0.5);
    for (int i = 0; i < 100; ++i) {
        const int n = static_cast<int>(rng() % 6);
        const cplx x(u(rng), 0.3 * u(rng));
        const cplx a = pbqj_eval(n, x, p);
        const cplx b = big_qjacobi_eval(n, p.c * x, p.c / p.b, p.d / p.a, p.c / p.a, q);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("symmetries")
{
    const PBQJParams p = n4();
    const PBQJParams swap_ab(p.b, p.a, p.c, p.d, kLp);
    const PBQJParams swap_cd(p.a, p.b, p.d, p.c, kLp);
    for (int n = 0; n <= 4; ++n) {
        for (double x : {-1.0, -0.25, 0.125, 2.0}) {
            CHECK(pbqj_eval(n, x, p) == pbqj_eval(n, x, swap_ab));
            const cplx m1 = pbqj_eval(n, x, p) / leading_coeff(n, p);
            const cplx m2 = pbqj_eval(n, x, swap_cd) / leading_coeff(n, swap_cd);
            CHECK(std::abs(m1 - m2) <= 1e-10 * std::max(1.0, std::abs(m1)));
        }
    }
}

TEST_CASE("leading coefficients")
{
    const PBQJParams p = n4();
    CHECK(leading_coeff(0, p) == cplx(1.0, 0.0));
    CHECK(rel(leading_coeff(1, p), cplx(-63.8751219512195121951219512195, 67.9960975609756097560975609756)) < 1e-13);
    CHECK(rel(leading_coeff(2, p), cplx(-418.294659617262671936371679519, -4453.09523050877552832262350488)) < 1e-13);
    CHECK(rel(leading_coeff(3, p), cplx(94715.3104712285268665703814351, 60360.6183246228403232753494657)) < 1e-13);

    const cplx slope = pbqj_eval(1, 1.0, p) - pbqj_eval(1, 0.0, p);
    CHECK(rel(slope, leading_coeff(1, p)) < 1e-12);

    // top coefficient of the interpolating polynomial through n+1 nodes,
    // and the interpolation residual at a further node
    for (int n = 1; n <= 4; ++n) {
        std::vector<double> nodes;
        for (int j = 0; j <= n; ++j) nodes.push_back(-1.0 + 2.0 * j / n);
        cplx top(0.0, 0.0);
        for (int j = 0; j <= n; ++j) {
            double den = 1.0;
            for (int k = 0; k <= n; ++k)
                if (k != j) den *= nodes[j] - nodes[k];
            top += pbqj_eval(n, nodes[j], p) / den;
        }
        CHECK(rel(top, leading_coeff(n, p)) < 1e-11);

        // P_n - k_n x^n has degree n-1: its n-point interpolant reproduces it at an extra node
        auto reduced = [&](double x) { return pbqj_eval(n, x, p) - leading_coeff(n, p) * std::pow(x, n); };
        const double extra = 0.37;
        cplx interp(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            cplx l(1.0, 0.0);
            for (int k = 0; k < n; ++k)
                if (k != j) l *= (extra - nodes[k]) / (nodes[j] - nodes[k]);
            interp += reduced(nodes[j]) * l;
        }
        CHECK(std::abs(interp - reduced(extra)) <= 1e-10 * std::abs(pbqj_eval(n, extra, p)) + 1e-10);
    }
}

TEST_CASE("norms")
{
    // closed forms at 30 digits
    CHECK(rel(norm_h(0, reference()), 0.931623932966860041014097382594) < 1e-12);
    CHECK(rel(norm_h(0, ex_a()), 1.06089934922364671479902898169) < 1e-12);
    CHECK(rel(norm_h(0, real_gap()), 24.8896183830920224364122097036) < 1e-12);
    const PBQJParams p = n4();
    CHECK(rel(norm_h(0, p), 0.169789560503809236468436069489) < 1e-12);
    CHECK(rel(norm_h(1, p), cplx(-0.0106222410741039970609473784068, -0.169789884668881078021080751721)) < 1e-12);
    CHECK(rel(norm_h(2, p), cplx(-0.252446076336726365610714744593, 0.0478484594164001923807138731642)) < 1e-12);
    CHECK(rel(norm_h(3, p), cplx(0.194879434576423870648832726649, 0.418253343700008285330425769733)) < 1e-12);
    CHECK(rel(monic_norm(1, p), 1.95463687215066142860003444903e-5) < 1e-12);
    CHECK(rel(monic_norm(2, p), 1.28438037473495367313284558626e-8) < 1e-12);
    CHECK(rel(monic_norm(3, p), 3.65793141853686304585307255155e-11) < 1e-12);
    for (int n = 0; n <= 5; ++n) CHECK(monic_norm(n, p) > 0.0);
    CHECK_THROWS_AS(norm_h(6, p), Error);
}

TEST_CASE("Dougall analog against direct lattice sums")
{
    for (const PBQJParams& p : {reference(), n4(), ex_a(), real_gap()}) {
        CHECK(rel(direct_h0(p), norm_h(0, p)) < 1e-10);
    }
}

TEST_CASE("orthogonality")
{
    const PBQJParams p = n4();
    for (int m = 0; m <= 3; ++m) {
        for (int n = 0; n <= 3; ++n) {
            const InnerProduct ip = orthogonality_check(m, n, p);
            if (m == n) {
                CHECK(rel(ip.value, norm_h(n, p)) < 1e-8);
            } else {
                CHECK(ip.normalized < 1e-8);
            }
        }
    }
}

TEST_CASE("moment Gram-Schmidt reproduces the monic polynomials")
{
    const PBQJParams p = n4();
    const int deg = 3;
    std::vector<double> mom(2 * deg + 1);
    for (int k = 0; k <= 2 * deg; ++k) {
        mom[k] = sum_lattice(p.lattice, [&](const LatticePoint& x) {
                     const double v = p.lattice.value(x);
                     return cplx(std::pow(v, k) * weight_w(x, p), 0.0);
                 }).value.real();
    }
    for (int n = 1; n <= deg; ++n) {
        // monic p_n = x^n + sum c_j x^j with <p_n, x^i> = 0 for i < n
        Eigen::MatrixXd h(n, n);
        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) h(i, j) = mom[i + j];
            rhs(i) = -mom[i + n];
        }
        const Eigen::VectorXd c = h.fullPivLu().solve(rhs);
        for (double x : {-0.6, 0.15, 1.1}) {
            double v = std::pow(x, n);
            for (int j = 0; j < n; ++j) v += c(j) * std::pow(x, j);
            const cplx monic = pbqj_eval(n, x, p) / leading_coeff(n, p);
            CHECK(std::abs(monic - v) < 1e-6 * std::max(1.0, std::abs(v)));
        }
    }
}

TEST_CASE("backward shift")
{
    const PBQJParams p = n4();
    for (int n = 0; n <= 2; ++n) {
        for (int m = -1; m <= 8; ++m) {
            for (Branch b : {Branch::Minus, Branch::Plus}) {
                const ShiftCheck s = backward_shift_check(n, {b, m}, p);
                CHECK(s.rel_error() < 1e-9);
            }
        }
    }
    // far left the identity reduces to 0 = 0
    const ShiftCheck far = backward_shift_check(1, LatticePoint::minus(-40), p);
    CHECK(std::abs(far.rhs) < 1e-20);
    CHECK(std::abs(far.lhs) < 1e-20);

    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const QBase q(0.5);
    for (int i = 0; i < 50; ++i) {
        const cplx x(u(rng), u(rng));
        const int n = static_cast<int>(rng() % 5);
        const ShiftCheck s = big_qjacobi_shift_check(n, x, p.c / p.b, p.d / p.a, p.c / p.a, q);
        CHECK(std::abs(s.lhs - s.rhs) <= 1e-10 * std::max({1.0, std::abs(s.lhs), std::abs(s.rhs)}));
    }
}
