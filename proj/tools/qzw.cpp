#include "qzw/acceptance.hpp"
#include "qzw/boundary_approx.hpp"
#include "qzw/error.hpp"
#include "qzw/graph_links.hpp"
#include "qzw/io.hpp"
#include "qzw/limit_kernel.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

using namespace qzw;
using nlohmann::json;

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    std::string points;
    std::size_t k = 1;
    int n = 0;
    std::string prefix;
};

RunConfig resolve(const Flags& f)
{
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (const char* env = std::getenv("QZW_OUT_DIR"); env && *env && f.config.empty()) c.out_dir = env;
    if (f.seed) c.seed = *f.seed;
    if (f.tol) c.tol = *f.tol;
    if (f.out) c.out_dir = *f.out;
    if (f.threads) {
        if (*f.threads == 0) fail(ErrorCode::ConfigError, "--threads must be at least 1");
        c.threads = *f.threads;
    }
    return c;
}

json meta(const std::string& verb, const RunConfig& c)
{
    return {{"verb", verb}, {"config", config_to_json(c)}};
}

std::filesystem::path out_path(const RunConfig& c, const std::string& name)
{
    return std::filesystem::path(c.out_dir) / name;
}

Configuration need_points(const Flags& f)
{
    if (f.points.empty()) fail(ErrorCode::ConfigError, "--points is required");
    return parse_points(f.points);
}

void write_json(const std::filesystem::path& p, const json& j)
{
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream(p) << j.dump(2) << "\n";
}

void done(const std::filesystem::path& p)
{
    std::printf("wrote %s\n", p.string().c_str());
}

json row_json(const LinkRow& row)
{
    json entries = json::array();
    for (const auto& e : row.entries) {
        json v{{"configuration", to_string(e.config)}, {"probability", e.probability}};
        if (row.samples) v["std_error"] = e.std_error;
        entries.push_back(v);
    }
    return entries;
}

int links(const std::string& sub, const Flags& f)
{
    const RunConfig c = resolve(f);
    const LatticeParams lp = c.lattice();
    const Configuration x = need_points(f);
    json j = meta("links " + sub, c);
    j["source"] = to_string(x);
    if (sub == "row" || sub == "compose") {
        ComposeOptions co;
        co.tail = c.tail;
        co.seed = c.seed;
        co.threads = c.threads;
        const LinkRow row = sub == "row" ? link_row(x, lp, c.tail) : link_compose(x, f.k, lp, co);
        j["k"] = sub == "row" ? x.size() - 1 : f.k;
        j["tail_mass_bound"] = row.tail_mass_bound;
        j["rows"] = row_json(row);
        const auto p = out_path(c, "links_" + sub + ".json");
        write_json(p, j);
        done(p);
        return 0;
    }
    // verify-branching
    ComposeOptions co;
    co.tail = c.tail;
    const LinkRow row = link_compose(x, f.k, lp, co);
    const auto p = out_path(c, "links_branching.csv");
    CsvWriter w(p, j, {"nu", "lhs", "rhs", "residual"});
    double worst = 0.0;
    for (const auto& nu : partitions_up_to(4, f.k)) {
        const IdentityCheck ic = branching_identity_check(row, f.k, nu, lp);
        std::string s;
        for (int v : nu.parts) s += (s.empty() ? "" : " ") + std::to_string(v);
        w.row({s, CsvWriter::cell(ic.lhs), CsvWriter::cell(ic.rhs), CsvWriter::cell(ic.residual())});
        worst = std::max(worst, ic.residual());
    }
    done(p);
    std::printf("max residual %.3g\n", worst);
    return worst < 1e-9 ? 0 : 3;
}

int report(const std::string& verb, const RunConfig& c, std::vector<int> ids, const std::string& file)
{
    AcceptanceOptions o{c, std::move(ids)};
    json results = json::array();
    bool ok = true;
    run_acceptance(o, [&](const CriterionResult& r) {
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
        results.push_back(result_to_json(r));
        ok = ok && r.passed;
    });
    json j = meta(verb, c);
    j["passed"] = ok;
    j["results"] = results;
    const auto p = out_path(c, file);
    write_json(p, j);
    done(p);
    if (!ok) {
        std::fprintf(stderr, "%s: %s\n", to_string(ErrorCode::CheckFailed), j.dump().c_str());
        return 3;
    }
    return 0;
}

int pbqj(const Flags& f)
{
    return report("pbqj verify", resolve(f), {5, 6, 7}, "pbqj_verify.json");
}

int zw(const std::string& sub, const Flags& f)
{
    const RunConfig c = resolve(f);
    const ParamQuadruple pq = c.quadruple();
    const int n = f.n > 0 ? f.n : c.ensemble_size;
    if (sub == "verify-coherency") return report("zw verify-coherency", c, {8}, "zw_coherency.json");
    const EnsembleN ens(pq, n);
    json j = meta("zw " + sub, c);
    j["n"] = n;
    if (sub == "kernel") {
        std::vector<LatticePoint> pts;
        if (f.points.empty()) {
            const KernelWindow win = kernel_window(ens);
            pts = win.points;
            j["window"] = {{"from", to_string(pts.front())}, {"to", to_string(pts.back())}, {"trace", win.trace}};
        } else {
            pts = parse_points(f.points).points();
            j["window"] = {{"points", f.points}};
        }
        const auto p = out_path(c, "zw_kernel.csv");
        CsvWriter w(p, j, {"x", "y", "K"});
        const Eigen::MatrixXd k = kernel_matrix(pts, ens);
        for (std::size_t a = 0; a < pts.size(); ++a) {
            for (std::size_t b = 0; b < pts.size(); ++b) {
                w.row({CsvWriter::cell(pts[a]), CsvWriter::cell(pts[b]), CsvWriter::cell(k(a, b))});
            }
        }
        done(p);
        return 0;
    }
    // sample
    std::mt19937_64 rng(c.seed);
    EnsembleSamplerState s(ens, EnsembleSampler::Dpp);
    j["samples"] = c.samples;
    const auto p = out_path(c, "zw_sample.csv");
    CsvWriter w(p, j, {"draw", "configuration"});
    for (std::size_t i = 0; i < c.samples; ++i) w.row({std::to_string(i), CsvWriter::cell(s.sample(rng))});
    done(p);
    return 0;
}

int kernel(const std::string& sub, const Flags& f)
{
    const RunConfig c = resolve(f);
    const ParamQuadruple pq = c.quadruple();
    json j = meta("kernel " + sub, c);
    if (sub == "eval") {
        const BoundaryKernel bk(pq);
        const auto pts = need_points(f).points();
        const auto p = out_path(c, "kernel_eval.csv");
        CsvWriter w(p, j, {"x", "y", "K"});
        auto put = [&](const LatticePoint& x, const LatticePoint& y) {
            w.row({CsvWriter::cell(x), CsvWriter::cell(y), CsvWriter::cell(bk(x, y))});
        };
        if (pts.size() == 1) put(pts[0], pts[0]);
        for (std::size_t a = 0; a < pts.size(); ++a) {
            for (std::size_t b = a + 1; b < pts.size(); ++b) put(pts[a], pts[b]);
        }
        done(p);
        return 0;
    }
    if (sub == "correlations") {
        const auto pts = need_points(f).points();
        j["points"] = f.points;
        const auto p = out_path(c, "kernel_correlations.csv");
        CsvWriter w(p, j, {"N", "rho_N", "rho", "gap"});
        for (const auto& r : correlation_convergence(pq, c.schedule, pts)) {
            w.row({std::to_string(r.n), CsvWriter::cell(r.finite), CsvWriter::cell(r.limit), CsvWriter::cell(r.gap)});
        }
        done(p);
        return 0;
    }
    // converge
    using LP = LatticePoint;
    const std::vector<LP> pts = f.points.empty() ? std::vector<LP>{LP::plus(-2), LP::plus(0), LP::plus(3), LP::minus(0),
                                                                   LP::minus(4)}
                                                 : parse_points(f.points).points();
    std::vector<std::pair<LP, LP>> pairs;
    for (const auto& x : pts) {
        for (const auto& y : pts) {
            if (x.sign() == y.sign() && !(y < x)) pairs.emplace_back(x, y);
        }
    }
    const auto p = out_path(c, "kernel_converge.csv");
    CsvWriter w(p, j, {"quantity", "N", "error"});
    auto put = [&](const char* name, const std::vector<ConvergenceRow>& rows) {
        for (const auto& r : rows) w.row({name, std::to_string(r.n), CsvWriter::cell(r.error)});
    };
    put("polynomial", polynomial_limit_table(pq, c.schedule, pts, {0, 1}));
    put("norm", norm_limit_table(pq, c.schedule, {0, 1}));
    put("kernel", kernel_limit_table(pq, c.schedule, pairs));
    done(p);
    return 0;
}

int boundary(const Flags& f)
{
    const RunConfig c = resolve(f);
    const LatticeParams lp = c.lattice();
    const std::string text = f.prefix.empty() ? f.points : f.prefix;
    if (text.empty()) fail(ErrorCode::ConfigError, "--prefix is required");
    // order of the prefix matters here, so no sorting through Configuration
    std::vector<LatticePoint> prefix;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        prefix.push_back(parse_point(text.substr(start, end - start)));
        start = end + 1;
    }
    const BoundaryPoint bp = make_boundary_point(prefix, lp);
    std::vector<std::size_t> schedule;
    for (std::size_t n = f.k + 1; n <= bp.length(); ++n) schedule.push_back(n);
    ApproxOptions o;
    o.seed = c.seed;
    o.threads = c.threads;
    const ApproxReport rep = approx_boundary_link(bp, f.k, schedule, lp, o);
    json j = meta("boundary approx", c);
    j["prefix"] = text;
    j["k"] = f.k;
    j["stabilized"] = rep.stabilized;
    const auto p = out_path(c, "boundary_approx.csv");
    CsvWriter w(p, j, {"N", "exact", "support", "tv_to_previous", "max_moment_residual", "moments_checked", "top",
                       "top_probability"});
    for (const auto& s : rep.steps) {
        const auto top = std::max_element(s.row.entries.begin(), s.row.entries.end(),
                                          [](const LinkEntry& a, const LinkEntry& b) { return a.probability < b.probability; });
        w.row({std::to_string(s.n), s.exact ? "1" : "0", std::to_string(s.row.entries.size()),
               CsvWriter::cell(s.tv_to_previous), CsvWriter::cell(s.max_moment_residual),
               std::to_string(s.moments_checked), top == s.row.entries.end() ? "" : CsvWriter::cell(top->config),
               top == s.row.entries.end() ? "" : CsvWriter::cell(top->probability)});
    }
    done(p);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"q-zw-measures on the double q-lattice"};
    app.require_subcommand(1);
    Flags f;
    auto common = [&](CLI::App* s) {
        s->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
        s->add_option("--seed", f.seed, "random seed");
        s->add_option("--tol", f.tol, "tolerance");
        s->add_option("--out", f.out, "output directory (default: $QZW_OUT_DIR or the config's out_dir)");
        s->add_option("--threads", f.threads, "worker threads");
    };
    int status = 0;
    std::function<int()> action;

    auto* links_cmd = app.add_subcommand("links", "q-link rows");
    links_cmd->require_subcommand(1);
    for (const char* sub : {"row", "compose", "verify-branching"}) {
        auto* s = links_cmd->add_subcommand(sub);
        common(s);
        s->add_option("--points", f.points, "configuration X, e.g. \"+0,-1,+3\"")->required();
        if (std::string(sub) != "row") s->add_option("--k", f.k, "target level K < N");
        s->callback([&f, &action, sub] { action = [&f, sub] { return links(sub, f); }; });
    }

    auto* pbqj_cmd = app.add_subcommand("pbqj", "pseudo big q-Jacobi identities");
    pbqj_cmd->require_subcommand(1);
    auto* verify = pbqj_cmd->add_subcommand("verify");
    common(verify);
    verify->callback([&] { action = [&] { return pbqj(f); }; });

    auto* zw_cmd = app.add_subcommand("zw", "finite-N ensembles");
    zw_cmd->require_subcommand(1);
    for (const char* sub : {"kernel", "sample", "verify-coherency"}) {
        auto* s = zw_cmd->add_subcommand(sub);
        common(s);
        s->add_option("--n", f.n, "ensemble size (default: ensemble_size)");
        if (std::string(sub) == "kernel") s->add_option("--points", f.points, "points (default: trace window)");
        s->callback([&f, &action, sub] { action = [&f, sub] { return zw(sub, f); }; });
    }

    auto* kernel_cmd = app.add_subcommand("kernel", "boundary kernel");
    kernel_cmd->require_subcommand(1);
    for (const char* sub : {"eval", "converge", "correlations"}) {
        auto* s = kernel_cmd->add_subcommand(sub);
        common(s);
        s->add_option("--points", f.points, "lattice points");
        s->callback([&f, &action, sub] { action = [&f, sub] { return kernel(sub, f); }; });
    }

    auto* boundary_cmd = app.add_subcommand("boundary", "boundary approximation");
    boundary_cmd->require_subcommand(1);
    auto* approx = boundary_cmd->add_subcommand("approx");
    common(approx);
    approx->add_option("--prefix,--points", f.prefix, "boundary point prefix in order, e.g. \"+0,-1,+2,-3\"")->required();
    approx->add_option("--k", f.k, "level K");
    approx->callback([&] { action = [&] { return boundary(f); }; });

    auto* all = app.add_subcommand("verify-all", "full acceptance suite");
    common(all);
    all->callback([&] { action = [&] { return report("verify-all", resolve(f), {}, "verify_all.json"); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        status = action();
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return e.code() == ErrorCode::ConfigError ? 2 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return status;
}
