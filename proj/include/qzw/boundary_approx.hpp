#pragma once

#include "qzw/graph_links.hpp"
#include "qzw/limit_kernel.hpp"

#include <cstdint>
#include <vector>

namespace qzw {

// Finite prefix of the variational series of a point of the boundary.
struct BoundaryPoint {
    VariationalSeries prefix;
    double tail_bound = 0.0; // |x_(1)| q^{floor((P-1)/2)}

    std::size_t length() const { return prefix.terms.size(); }
    // X(N): the first N terms as a configuration.
    Configuration truncate(std::size_t n) const;
};

// Fails with InvalidArgument unless the prefix is nonempty, repetition free and obeys the decay bound.
BoundaryPoint make_boundary_point(std::vector<LatticePoint> points, const LatticeParams& lp);

enum class ApproxStrategy { Auto, Exact, MonteCarlo };

struct ApproxOptions {
    ApproxStrategy strategy = ApproxStrategy::Auto; // Auto: exact while N - K <= 3
    std::size_t paths = 100'000;
    std::uint64_t seed = 20240611;
    unsigned threads = 1;
    int moment_max_size = 3; // |nu| bound for the moment identities, exact rows only
    double stabilization_tv = 1e-3;
    TailSpec tail{1e-9, -1.0}; // points with |y| < 1e-9 are omitted; their mass is reported
};

struct ApproxStep {
    std::size_t n = 0;
    LinkRow row;
    bool exact = false;
    double tv_to_previous = -1.0;   // -1 on the first step
    double max_moment_residual = 0.0;
    std::size_t moments_checked = 0;
};

struct ApproxReport {
    std::size_t k = 0;
    std::vector<ApproxStep> steps;
    bool stabilized = false; // two consecutive TV distances below the threshold
};

// Lambda^N_K(X(N), .) along the schedule. PrefixTooShort when a scheduled N exceeds the prefix.
ApproxReport approx_boundary_link(const BoundaryPoint& bp, std::size_t k, const std::vector<std::size_t>& schedule,
                                  const LatticeParams& lp, const ApproxOptions& opts = {});

struct LlnRow {
    std::size_t level = 0;
    std::size_t n = 0;       // level of X(N) used for the approximant
    double probability = 0.0;
    double std_error = 0.0;
    bool exact = false;
};

// P[y_(k) = x_(k)] for Y drawn from Lambda^N_L(X(N), .), N = prefix length, for each L in the schedule.
std::vector<LlnRow> lln_check(const BoundaryPoint& bp, std::size_t k, const std::vector<std::size_t>& levels,
                              std::size_t sample_budget, const LatticeParams& lp, const ApproxOptions& opts = {});

struct CorrelationRow {
    int n = 0;
    double finite = 0.0;
    double limit = 0.0;
    double gap = 0.0;
};

// rho_N(points) against the boundary correlation for each N in the schedule.
std::vector<CorrelationRow> correlation_convergence(const ParamQuadruple& pq, const std::vector<int>& schedule,
                                                    const std::vector<LatticePoint>& points);

} // namespace qzw
