#pragma once

#include "qzw/io.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qzw {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double measured = 0.0;  // worst error seen
    double tolerance = 0.0;
    double seconds = 0.0;
    double time_limit = 0.0; // 0: none
    std::string detail;
};

struct AcceptanceOptions {
    RunConfig config;
    std::vector<int> only; // empty: all criteria
};

// Runs criteria 1..14 in order; `report` sees each result as soon as it is available.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& report = {});

// "PASS  7  backward shift identity  measured=3.1e-15 tol=1e-09  0.2s  detail"
std::string format_result(const CriterionResult& r);
nlohmann::json result_to_json(const CriterionResult& r);

} // namespace qzw
