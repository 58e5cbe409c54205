#include "qzw/acceptance.hpp"

#include "qzw/boundary_approx.hpp"
#include "qzw/error.hpp"
#include "qzw/graph_links.hpp"
#include "qzw/limit_kernel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>

namespace qzw {

namespace {

using Clock = std::chrono::steady_clock;

Configuration random_config(std::mt19937_64& rng, std::size_t n, int lo, int hi)
{
    std::uniform_int_distribution<int> m(lo, hi), s(0, 1);
    std::set<LatticePoint> pts;
    while (pts.size() < n) pts.insert({s(rng) ? Branch::Plus : Branch::Minus, m(rng)});
    return Configuration(std::vector<LatticePoint>(pts.begin(), pts.end()));
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// max_i err_i < tol and the sequence decreases
bool decreasing(const std::vector<ConvergenceRow>& rows)
{
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].error < rows[i - 1].error)) return false;
    }
    return true;
}

std::string table(const std::vector<ConvergenceRow>& rows)
{
    std::string s;
    for (const auto& r : rows) s += fmt("N=%.0f:%.2e ", r.n, r.error);
    return s;
}

CriterionResult criterion(int id, const char* name, double tol)
{
    CriterionResult r;
    r.id = id;
    r.name = name;
    r.tolerance = tol;
    return r;
}

struct Context {
    RunConfig cfg;
    LatticeParams lp;
    ParamQuadruple pq;
    std::mt19937_64 rng;
};

CriterionResult stochasticity(Context& c)
{
    CriterionResult r = criterion(1, "q-link stochasticity", 1e-10);
    r.time_limit = 60.0;
    std::size_t rows = 0;
    for (std::size_t n = 2; n <= 6; ++n) {
        for (int i = 0; i < 50; ++i) {
            const LinkRow row = link_row(random_config(c.rng, n, -2, 4), c.lp, c.cfg.tail);
            const double mass = row.enumerated_mass();
            r.measured = std::max({r.measured, mass - 1.0, 1.0 - row.tail_mass_bound - mass});
            ++rows;
        }
    }
    r.passed = r.measured < r.tolerance;
    r.detail = fmt("%.0f rows, N=2..6", static_cast<double>(rows));
    return r;
}

CriterionResult dimension(Context& c)
{
    CriterionResult r = criterion(2, "dimension recurrence", 1e-10);
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 4);
        r.measured = std::max(r.measured, dim_recurrence_check(random_config(c.rng, n, -2, 4), c.lp, c.cfg.tail).residual());
    }
    r.passed = r.measured < r.tolerance;
    r.detail = "50 configurations, N=2..5";
    return r;
}

CriterionResult geometric(Context& c)
{
    CriterionResult r = criterion(3, "geometric summation identity", 1e-12);
    for (int i = 0; i < 200; ++i) {
        const Configuration ab = random_config(c.rng, 2, -3, 5);
        const int n = 1 + static_cast<int>(c.rng() % 4);
        r.measured = std::max(r.measured, geometric_summation_check(ab[0], ab[1], n, c.lp, c.cfg.tail).residual());
    }
    r.passed = r.measured < r.tolerance;
    r.detail = "200 draws of (a, b, n)";
    return r;
}

CriterionResult branching(Context& c)
{
    CriterionResult r = criterion(4, "Schur branching", 1e-9);
    std::size_t checks = 0;
    for (std::size_t n = 2; n <= 4; ++n) {
        for (int i = 0; i < 2; ++i) {
            const Configuration x = random_config(c.rng, n, -2, 3);
            for (std::size_t k = 1; k < n; ++k) {
                ComposeOptions co;
                co.tail = c.cfg.tail;
                const LinkRow row = link_compose(x, k, c.lp, co);
                for (const auto& nu : partitions_up_to(4, k)) {
                    r.measured = std::max(r.measured, branching_identity_check(row, k, nu, c.lp).residual());
                    ++checks;
                }
            }
        }
    }
    r.passed = r.measured < r.tolerance;
    r.detail = fmt("%.0f identities, |nu| <= 4, N <= 4", static_cast<double>(checks));
    return r;
}

PBQJParams four_particle(const Context& c)
{
    return PBQJParams(c.pq.alpha, c.pq.beta, c.pq.gamma, c.pq.delta, c.lp).shifted(-3, -3);
}

CriterionResult orthogonality(Context& c)
{
    CriterionResult r = criterion(5, "orthogonality and norms", 1e-8);
    const PBQJParams p = four_particle(c);
    if (n_max(p).n_max < 3) fail(ErrorCode::InvalidParams, "P_3 is not square summable for these parameters");
    for (int m = 0; m <= 3; ++m) {
        for (int n = 0; n <= 3; ++n) {
            const InnerProduct ip = orthogonality_check(m, n, p);
            const cplx h = norm_h(n, p);
            r.measured = std::max(r.measured, m == n ? std::abs(ip.value - h) / std::abs(h) : ip.normalized);
        }
    }
    r.passed = r.measured < r.tolerance;
    r.detail = "Gram matrix of P_0..P_3, c and d scaled by q^-3";
    return r;
}

CriterionResult dougall(Context& c)
{
    CriterionResult r = criterion(6, "Dougall analog", 1e-10);
    const std::vector<PBQJParams> sets{
        PBQJParams(c.pq.alpha, c.pq.beta, c.pq.gamma, c.pq.delta, c.lp), four_particle(c),
        PBQJParams(-1.0, 2.0, c.pq.gamma, c.pq.delta, c.lp)};
    for (const auto& p : sets) {
        const cplx direct = sum_lattice(p.lattice, [&](const LatticePoint& x) { return cplx(weight_w(x, p), 0.0); }).value;
        const cplx closed = norm_h(0, p);
        r.measured = std::max(r.measured, std::abs(direct - closed) / std::abs(closed));
    }
    r.passed = r.measured < r.tolerance;
    r.detail = "reference, q^-3 shifted, degenerate (alpha, beta) = (-1, 2)";
    return r;
}

CriterionResult backward_shift(Context& c)
{
    CriterionResult r = criterion(7, "backward shift identity", 1e-9);
    const PBQJParams p = four_particle(c);
    for (int n = 0; n <= 2; ++n) {
        for (int m = -1; m <= 8; ++m) {
            for (Branch b : {Branch::Minus, Branch::Plus}) {
                r.measured = std::max(r.measured, backward_shift_check(n, {b, m}, p).rel_error());
            }
        }
    }
    r.passed = r.measured < r.tolerance;
    r.detail = "20 points x n = 0, 1, 2";
    return r;
}

CriterionResult coherency(Context& c)
{
    CriterionResult r = criterion(8, "coherency", 1e-6);
    r.time_limit = 300.0;
    double tail = 0.0;
    for (int n = 1; n <= 3; ++n) {
        const EnsembleN next(c.pq, n + 1);
        for (int i = 0; i < 10; ++i) {
            const CoherencyCheck cc = coherency_check(next, random_config(c.rng, static_cast<std::size_t>(n), -2, 6));
            r.measured = std::max(r.measured, cc.rel_error());
            tail = std::max(tail, cc.tail_bound / std::max(std::abs(cc.rhs), 1e-300));
        }
    }
    r.passed = r.measured < r.tolerance;
    r.detail = fmt("N=1,2,3 x 10 configurations, max relative tail %.1e", tail);
    return r;
}

CriterionResult phi32_asymptotics(Context&)
{
    CriterionResult r = criterion(9, "3phi2 to 2phi1 asymptotics", 1e-3);
    const auto rows = phi32_limit_check({5, 10, 15, 20, 25}, {0.3, 0.1}, {0.7, 0.0}, {2.0, 0.5}, {1.5, -0.2},
                                        QBase(0.5));
    bool geometric = true;
    std::string s;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        s += fmt("n=%.0f:%.2e ", rows[i].n, rows[i].ratio_error);
        if (i > 0 && !(rows[i].ratio_error < 0.5 * rows[i - 1].ratio_error)) geometric = false;
    }
    r.measured = rows.back().ratio_error;
    r.passed = r.measured < r.tolerance && geometric;
    r.detail = s + (geometric ? "" : "(not geometric)");
    return r;
}

std::vector<int> schedule(const Context& c)
{
    return c.cfg.schedule;
}

std::vector<LatticePoint> ten_points()
{
    using LP = LatticePoint;
    return {LP::plus(-2), LP::plus(0), LP::plus(1), LP::plus(3), LP::plus(6),
            LP::minus(-1), LP::minus(0), LP::minus(2), LP::minus(4), LP::minus(7)};
}

CriterionResult polynomial_limit(Context& c)
{
    CriterionResult r = criterion(10, "polynomial limit", 1e-3);
    const auto rows = polynomial_limit_table(c.pq, schedule(c), ten_points(), {0, 1});
    r.measured = rows.back().error;
    r.passed = r.measured < r.tolerance && decreasing(rows);
    r.detail = table(rows);
    return r;
}

CriterionResult norm_limit(Context& c)
{
    CriterionResult r = criterion(11, "norm limit", 1e-3);
    const auto rows = norm_limit_table(c.pq, schedule(c), {0, 1});
    r.measured = rows.back().error;
    r.passed = r.measured < r.tolerance && decreasing(rows);
    r.detail = table(rows);
    return r;
}

CriterionResult kernel_validity(Context& c)
{
    CriterionResult r = criterion(12, "kernel convergence and validity", 1e-3);
    const auto pts = ten_points();
    std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
    for (const auto& x : pts) {
        for (const auto& y : pts) {
            if (x.sign() == y.sign() && !(y < x)) pairs.emplace_back(x, y);
        }
    }
    const auto rows = kernel_limit_table(c.pq, schedule(c), pairs);
    const BoundaryKernel bk(c.pq);

    double minor_excess = 0.0;
    std::uniform_int_distribution<int> size(1, 4);
    for (int t = 0; t < 200; ++t) {
        const Configuration s = random_config(c.rng, static_cast<std::size_t>(size(c.rng)), -4, 30);
        const double d = boundary_correlation(s.points(), bk).raw;
        minor_excess = std::max({minor_excess, -d, d - 1.0});
    }

    const EnsembleN big(c.pq, schedule(c).back());
    double rho_gap = 0.0;
    for (const auto& x : pts) rho_gap = std::max(rho_gap, std::abs(cd_kernel_N(x, x, big) - bk(x, x)));

    r.measured = std::max(rows.back().error, rho_gap);
    r.passed = rows.back().error < 1e-3 && minor_excess <= 1e-8 && rho_gap < 1e-3;
    r.detail = table(rows) + fmt("| minors excess %.1e | rho1 gap %.1e", std::max(minor_excess, 0.0), rho_gap);
    return r;
}

CriterionResult sampler(Context& c)
{
    CriterionResult r = criterion(13, "DPP sampler law", 0.02);
    r.time_limit = 120.0;
    const EnsembleN e(c.pq, 2);
    EnsembleSamplerState dpp(e, EnsembleSampler::Dpp);
    const auto& w = dpp.window().points;
    std::map<Configuration, double> law;
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = i + 1; j < w.size(); ++j) {
            const Configuration cfg({w[i], w[j]});
            law[cfg] = measure_weight(cfg, e);
        }
    }
    std::mt19937_64 rng(c.cfg.seed);
    const int draws = 100'000;
    std::map<Configuration, double> emp;
    for (int i = 0; i < draws; ++i) emp[dpp.sample(rng)] += 1.0 / draws;
    double tv = 0.0;
    for (const auto& [cfg, p] : law) {
        const auto it = emp.find(cfg);
        tv += std::abs((it == emp.end() ? 0.0 : it->second) - p);
    }
    for (const auto& [cfg, p] : emp) {
        if (!law.count(cfg)) tv += p;
    }
    r.measured = 0.5 * tv;
    r.passed = r.measured < r.tolerance;
    r.detail = fmt("N=2, %.0f draws, %.0f enumerated configurations", draws, static_cast<double>(law.size()));
    return r;
}

CriterionResult lln(Context& c)
{
    CriterionResult r = criterion(14, "law of large numbers", 0.99);
    std::vector<LatticePoint> prefix;
    for (int m = 0; m < 12; ++m) prefix.push_back(m % 2 == 0 ? LatticePoint::plus(m) : LatticePoint::minus(m));
    const BoundaryPoint bp = make_boundary_point(prefix, c.lp);
    ApproxOptions o;
    o.threads = c.cfg.threads;
    o.seed = c.cfg.seed;
    const auto rows = lln_check(bp, 1, {2, 4, 6, 8, 10}, 20'000, c.lp, o);
    bool monotone = true;
    std::string s;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        s += fmt("L=%.0f:%.4f ", static_cast<double>(rows[i].level), rows[i].probability);
        if (i > 0 && rows[i].probability < rows[i - 1].probability - 2.0 * std::hypot(rows[i].std_error, rows[i - 1].std_error)) {
            monotone = false;
        }
    }
    r.measured = rows.back().probability;
    r.passed = r.measured > r.tolerance && monotone;
    r.detail = s + (monotone ? "" : "(not monotone)");
    return r;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& report)
{
    Context ctx{opts.config, opts.config.lattice(), opts.config.quadruple(), std::mt19937_64(opts.config.seed)};
    if (!ctx.pq.kernel_regime) fail(ErrorCode::ConfigError, "acceptance needs parameters in the kernel regime");
    using Fn = CriterionResult (*)(Context&);
    const std::vector<std::pair<int, Fn>> all{
        {1, stochasticity},  {2, dimension},      {3, geometric},         {4, branching},
        {5, orthogonality},  {6, dougall},        {7, backward_shift},    {8, coherency},
        {9, phi32_asymptotics}, {10, polynomial_limit}, {11, norm_limit}, {12, kernel_validity},
        {13, sampler},       {14, lln}};
    static const char* names[] = {"",
                                  "q-link stochasticity",
                                  "dimension recurrence",
                                  "geometric summation identity",
                                  "Schur branching",
                                  "orthogonality and norms",
                                  "Dougall analog",
                                  "backward shift identity",
                                  "coherency",
                                  "3phi2 to 2phi1 asymptotics",
                                  "polynomial limit",
                                  "norm limit",
                                  "kernel convergence and validity",
                                  "DPP sampler law",
                                  "law of large numbers"};
    std::vector<CriterionResult> out;
    for (const auto& [id, fn] : all) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
        // each criterion draws from its own stream so that subsets reproduce the full run
        ctx.rng.seed(opts.config.seed + static_cast<std::uint64_t>(id));
        const auto t0 = Clock::now();
        CriterionResult r;
        try {
            r = fn(ctx);
        } catch (const std::exception& e) {
            r.id = id;
            r.name = names[id];
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        if (r.time_limit > 0.0 && r.seconds > r.time_limit) {
            r.passed = false;
            r.detail += fmt(" (exceeded %.0f s)", r.time_limit);
        }
        if (report) report(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %2d  %-32s measured=%.3g tol=%.3g  %.1fs  ", r.passed ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.measured, r.tolerance, r.seconds);
    return buf + r.detail;
}

nlohmann::json result_to_json(const CriterionResult& r)
{
    return {{"id", r.id},           {"name", r.name},         {"passed", r.passed},
            {"measured", r.measured}, {"tolerance", r.tolerance}, {"seconds", r.seconds},
            {"time_limit", r.time_limit}, {"detail", r.detail}};
}

} // namespace qzw
