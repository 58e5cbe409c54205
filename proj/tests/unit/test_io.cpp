#include "doctest.h"

#include "qzw/error.hpp"
#include "qzw/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qzw;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "qzw_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

ErrorCode code_of(const json& j)
{
    try {
        parse_config(j);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::CheckFailed;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parsing")
{
    const json j = json::parse(R"({"q": 0.25, "alpha": [1, 2], "beta": [1, -2], "gamma": 40, "delta": 50,
                                   "seed": 7, "threads": 3, "tail": {"cutoff": 1e-8}, "schedule": [4, 8]})");
    const RunConfig c = parse_config(j);
    CHECK(c.q == 0.25);
    CHECK(c.alpha == cplx(1.0, 2.0));
    CHECK(c.gamma == cplx(40.0, 0.0));
    CHECK(c.seed == 7);
    CHECK(c.threads == 3);
    CHECK(c.tail.cutoff == 1e-8);
    CHECK(c.tail.cap == -1.0);
    CHECK(c.schedule == std::vector<int>{4, 8});
    CHECK(c.zeta_minus == -1.0);

    const RunConfig back = parse_config(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));

    CHECK(code_of(json::parse(R"({"qq": 0.5})")) == ErrorCode::ConfigError);
    CHECK(code_of(json::parse(R"({"q": "half"})")) == ErrorCode::ConfigError);
    CHECK(code_of(json::parse(R"({"q": 1.5})")) == ErrorCode::ConfigError);
    CHECK(code_of(json::parse(R"({"alpha": [1, 2, 3]})")) == ErrorCode::ConfigError);
    CHECK(code_of(json::parse(R"({"threads": 0})")) == ErrorCode::ConfigError);
    CHECK(code_of(json::parse(R"({"seed": -1})")) == ErrorCode::ConfigError);
    CHECK(code_of(json::parse(R"({"tail": {"floor": 1}})")) == ErrorCode::ConfigError);
    CHECK(code_of(json::parse(R"([1, 2])")) == ErrorCode::ConfigError);
}

TEST_CASE("shipped configs")
{
    const RunConfig ref = load_config(std::filesystem::path(QZW_SOURCE_DIR) / "configs/reference.json");
    const ParamQuadruple pq = ref.quadruple();
    CHECK(pq.kernel_regime);
    CHECK(pq.alpha == cplx(1.0, 1.0));

    const RunConfig bad = load_config(std::filesystem::path(QZW_SOURCE_DIR) / "tests/data/inadmissible.json");
    try {
        bad.quadruple();
        FAIL("inadmissible quadruple accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
        CHECK(std::string(e.what()).find("admissible and nondegenerate") != std::string::npos);
    }

    const auto broken = scratch("broken.json");
    std::ofstream(broken) << "{ \"q\": ";
    CHECK_THROWS_AS(load_config(broken), Error);
    CHECK_THROWS_AS(load_config(scratch("missing.json")), Error);
}

TEST_CASE("CSV with a JSON header")
{
    const auto path = scratch("table.csv");
    const json meta{{"verb", "kernel eval"}, {"q", 0.5}};
    {
        CsvWriter w(path, meta, {"x", "y", "K"});
        w.row({CsvWriter::cell(LatticePoint::plus(0)), CsvWriter::cell(LatticePoint::minus(2)), CsvWriter::cell(0.1)});
        w.row({CsvWriter::cell(parse_points("+0,-1")), "a\"b", CsvWriter::cell(-2.5e-300)});
        CHECK_THROWS_AS(w.row({"1"}), Error);
    }
    const std::string text = slurp(path);
    CHECK(text.rfind("# {", 0) == 0);
    CHECK(text.find("\nx,y,K\n") != std::string::npos);

    const CsvTable t = read_csv(path);
    CHECK(t.meta == meta);
    CHECK(t.columns == std::vector<std::string>{"x", "y", "K"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == "-2");
    CHECK(std::stod(t.rows[0][2]) == 0.1);
    CHECK(t.rows[1][0] == "-1,+0");
    CHECK(t.rows[1][1] == "a\"b");
    CHECK(std::stod(t.rows[1][2]) == -2.5e-300);

    // byte-identical output for identical input
    const auto again = scratch("table2.csv");
    {
        CsvWriter w(again, meta, {"x", "y", "K"});
        w.row({CsvWriter::cell(LatticePoint::plus(0)), CsvWriter::cell(LatticePoint::minus(2)), CsvWriter::cell(0.1)});
        w.row({CsvWriter::cell(parse_points("+0,-1")), "a\"b", CsvWriter::cell(-2.5e-300)});
    }
    CHECK(slurp(again) == text);
}
