#include "qzw/io.hpp"

#include "qzw/error.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace qzw {

using nlohmann::json;

namespace {

cplx read_complex(const json& v, const std::string& key)
{
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    fail(ErrorCode::ConfigError, "'" + key + "' must be a number or [re, im]");
}

template <class T>
T read_number(const json& v, const std::string& key)
{
    if (!v.is_number()) fail(ErrorCode::ConfigError, "'" + key + "' must be a number");
    if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) fail(ErrorCode::ConfigError, "'" + key + "' must be an integer");
        if (std::is_unsigned_v<T> && v.get<long long>() < 0 && !v.is_number_unsigned()) {
            fail(ErrorCode::ConfigError, "'" + key + "' must be nonnegative");
        }
    }
    return v.get<T>();
}

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cells.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cells.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back();
        } else {
            cells.back() += c;
        }
    }
    return cells;
}

} // namespace

LatticeParams RunConfig::lattice() const
{
    try {
        return LatticeParams(q, zeta_minus, zeta_plus);
    } catch (const Error& e) {
        fail(ErrorCode::ConfigError, std::string("invalid lattice: ") + e.what());
    }
}

ParamQuadruple RunConfig::quadruple() const
{
    ParamQuadruple pq(alpha, beta, gamma, delta, lattice());
    if (!pq.admissible()) {
        fail(ErrorCode::ConfigError, "parameters are " + pq.reason);
    }
    return pq;
}

RunConfig parse_config(const json& j)
{
    if (!j.is_object()) fail(ErrorCode::ConfigError, "config must be a JSON object");
    static const std::set<std::string> known{"q",     "zeta_minus", "zeta_plus", "alpha",         "beta",
                                             "gamma", "delta",      "tol",       "seed",          "threads",
                                             "tail",  "ensemble_size", "schedule", "samples",     "out_dir"};
    for (const auto& [k, v] : j.items()) {
        if (!known.contains(k)) fail(ErrorCode::ConfigError, "unknown config key '" + k + "'");
    }
    RunConfig c;
    if (j.contains("q")) c.q = read_number<double>(j["q"], "q");
    if (j.contains("zeta_minus")) c.zeta_minus = read_number<double>(j["zeta_minus"], "zeta_minus");
    if (j.contains("zeta_plus")) c.zeta_plus = read_number<double>(j["zeta_plus"], "zeta_plus");
    if (j.contains("alpha")) c.alpha = read_complex(j["alpha"], "alpha");
    if (j.contains("beta")) c.beta = read_complex(j["beta"], "beta");
    if (j.contains("gamma")) c.gamma = read_complex(j["gamma"], "gamma");
    if (j.contains("delta")) c.delta = read_complex(j["delta"], "delta");
    if (j.contains("tol")) c.tol = read_number<double>(j["tol"], "tol");
    if (j.contains("seed")) c.seed = read_number<std::uint64_t>(j["seed"], "seed");
    if (j.contains("threads")) c.threads = read_number<unsigned>(j["threads"], "threads");
    if (j.contains("ensemble_size")) c.ensemble_size = read_number<int>(j["ensemble_size"], "ensemble_size");
    if (j.contains("samples")) c.samples = read_number<std::size_t>(j["samples"], "samples");
    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) fail(ErrorCode::ConfigError, "'out_dir' must be a string");
        c.out_dir = j["out_dir"].get<std::string>();
    }
    if (j.contains("schedule")) {
        if (!j["schedule"].is_array()) fail(ErrorCode::ConfigError, "'schedule' must be an array");
        c.schedule.clear();
        for (const auto& v : j["schedule"]) c.schedule.push_back(read_number<int>(v, "schedule"));
    }
    if (j.contains("tail")) {
        const json& t = j["tail"];
        if (!t.is_object()) fail(ErrorCode::ConfigError, "'tail' must be an object");
        for (const auto& [k, v] : t.items()) {
            if (k != "cutoff" && k != "cap") fail(ErrorCode::ConfigError, "unknown tail key '" + k + "'");
        }
        if (t.contains("cutoff")) c.tail.cutoff = read_number<double>(t["cutoff"], "tail.cutoff");
        if (t.contains("cap")) c.tail.cap = read_number<double>(t["cap"], "tail.cap");
    }
    if (!(c.tol > 0.0)) fail(ErrorCode::ConfigError, "'tol' must be positive");
    if (c.threads == 0) fail(ErrorCode::ConfigError, "'threads' must be at least 1");
    if (c.ensemble_size < 1) fail(ErrorCode::ConfigError, "'ensemble_size' must be at least 1");
    c.lattice();
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::ConfigError, "config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json config_to_json(const RunConfig& c)
{
    auto cx = [](cplx z) { return json::array({z.real(), z.imag()}); };
    return json{{"q", c.q},
                {"zeta_minus", c.zeta_minus},
                {"zeta_plus", c.zeta_plus},
                {"alpha", cx(c.alpha)},
                {"beta", cx(c.beta)},
                {"gamma", cx(c.gamma)},
                {"delta", cx(c.delta)},
                {"tol", c.tol},
                {"seed", c.seed},
                {"threads", c.threads},
                {"tail", {{"cutoff", c.tail.cutoff}, {"cap", c.tail.cap}}},
                {"ensemble_size", c.ensemble_size},
                {"schedule", c.schedule},
                {"samples", c.samples},
                {"out_dir", c.out_dir}};
}

void CsvWriter::Closer::operator()(std::FILE* f) const
{
    if (f) std::fclose(f);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const json& meta, const std::vector<std::string>& columns)
    : path_(path), columns_(columns.size())
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    file_.reset(std::fopen(path.string().c_str(), "w"));
    if (!file_) fail(ErrorCode::ConfigError, "cannot write " + path.string());
    std::fprintf(file_.get(), "# %s\n", meta.dump().c_str());
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) fail(ErrorCode::SizeMismatch, "CSV row width differs from the header");
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += quote(cells[i]);
    }
    std::fprintf(file_.get(), "%s\n", line.c_str());
}

std::string CsvWriter::cell(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvWriter::cell(const LatticePoint& p) { return to_string(p); }

std::string CsvWriter::cell(const Configuration& c) { return to_string(c); }

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
        fail(ErrorCode::ConfigError, path.string() + " lacks the JSON header line");
    }
    try {
        t.meta = json::parse(line.substr(2));
    } catch (const json::exception& e) {
        fail(ErrorCode::ConfigError, std::string("bad CSV header: ") + e.what());
    }
    if (!std::getline(in, line)) fail(ErrorCode::ConfigError, path.string() + " lacks the column line");
    t.columns = split_csv(line);
    while (std::getline(in, line)) {
        if (!line.empty()) t.rows.push_back(split_csv(line));
    }
    return t;
}

} // namespace qzw
