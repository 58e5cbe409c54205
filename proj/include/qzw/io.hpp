#pragma once

#include "qzw/zw_measures.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace qzw {

struct RunConfig {
    double q = 0.5;
    double zeta_minus = -1.0;
    double zeta_plus = 1.0;
    cplx alpha{1.0, 1.0}, beta{1.0, -1.0}, gamma{8.0, 8.0}, delta{8.0, -8.0};
    double tol = 1e-10;
    std::uint64_t seed = 20240611;
    unsigned threads = 1;
    TailSpec tail;
    int ensemble_size = 2;
    std::vector<int> schedule{10, 15, 20, 25, 30};
    std::size_t samples = 10'000;
    std::string out_dir = ".";

    LatticeParams lattice() const;
    // ConfigError unless the quadruple is admissible and nondegenerate (or the degenerate example).
    ParamQuadruple quadruple() const;
};

// Unknown keys and malformed values raise ConfigError. Complex numbers are [re, im] or plain numbers.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const RunConfig& c);

class CsvWriter {
public:
    // First line: "# " followed by the metadata as one-line JSON; second line: the column names.
    CsvWriter(const std::filesystem::path& path, const nlohmann::json& meta, const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& cells);
    static std::string cell(double v);
    static std::string cell(const LatticePoint& p);
    static std::string cell(const Configuration& c);

private:
    std::filesystem::path path_;
    std::size_t columns_;
    struct Closer {
        void operator()(std::FILE* f) const;
    };
    std::unique_ptr<std::FILE, Closer> file_;
};

struct CsvTable {
    nlohmann::json meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace qzw
