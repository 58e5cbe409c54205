#pragma once

#include "qzw/lattice.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

namespace qzw {

struct LinkEntry {
    Configuration config;
    double probability = 0.0;
    double std_error = 0.0;
};

struct LinkRow {
    Configuration source;
    std::vector<LinkEntry> entries; // sorted by configuration
    double tail_mass_bound = 0.0;
    std::size_t samples = 0;        // Monte-Carlo rows only

    double enumerated_mass() const;
    double probability_of(const Configuration& y) const;
};

double total_variation(const LinkRow& a, const LinkRow& b);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double tail_bound = 0.0;
    double scale = 1.0;
    // |lhs - rhs| in excess of the tail bound, relative to scale.
    double residual() const;
};

double weight_wt(const Configuration& x, const Configuration& y, const LatticeParams& lp);

double log_dim(const Configuration& x, const LatticeParams& lp);
double dim(const Configuration& x, const LatticeParams& lp);

IdentityCheck dim_recurrence_check(const Configuration& x, const LatticeParams& lp, const TailSpec& tail = {});

IdentityCheck geometric_summation_check(const LatticePoint& a, const LatticePoint& b, int n,
                                        const LatticeParams& lp, const TailSpec& tail = {});

// Closed-form entry of the (N+1 -> N) link; zero when Y does not interlace X.
double link_entry(const Configuration& x, const Configuration& y, const LatticeParams& lp);

LinkRow link_row(const Configuration& x, const LatticeParams& lp, const TailSpec& tail = {});

enum class SampleMethod { Gibbs, Enumeration };

struct SampleOptions {
    SampleMethod method = SampleMethod::Gibbs;
    int sweeps = 20;
    TailSpec tail;
};

// Draws from the row Lambda^{N+1}_N(X, .). Keeps a cache of rows for the
// enumeration method, so one sampler should not be shared between threads.
class LinkSampler {
public:
    LinkSampler(LatticeParams lp, SampleOptions opts = {});
    Configuration sample(const Configuration& x, std::mt19937_64& rng);

private:
    Configuration sample_gibbs(const Configuration& x, std::mt19937_64& rng);
    Configuration sample_enumeration(const Configuration& x, std::mt19937_64& rng);

    LatticeParams lp_;
    SampleOptions opts_;
    std::map<Configuration, std::pair<std::vector<Configuration>, std::vector<double>>> cache_;
};

Configuration link_sample(const Configuration& x, const LatticeParams& lp, std::mt19937_64& rng,
                          const SampleOptions& opts = {});

enum class ComposeStrategy { Exact, MonteCarlo };

struct ComposeOptions {
    ComposeStrategy strategy = ComposeStrategy::Exact;
    std::size_t budget = 4'000'000;  // exact: max intermediate configurations
    std::size_t paths = 100'000;     // monte carlo
    std::uint64_t seed = 20240611;
    unsigned threads = 1;
    SampleOptions sampling;
    TailSpec tail;
};

// Lambda^N_K(X, .) for X at level N.
LinkRow link_compose(const Configuration& x, std::size_t k, const LatticeParams& lp,
                     const ComposeOptions& opts = {});

// Seed for the b-th block of Monte-Carlo paths; independent of thread count.
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block);

struct Signature {
    std::vector<int> parts;

    Signature() = default;
    explicit Signature(std::vector<int> p);
    std::size_t length() const { return parts.size(); }
    int size() const;
    Signature padded(std::size_t n) const;
};

// All partitions with at most max_len parts and |nu| <= max_size, padded to max_len.
std::vector<Signature> partitions_up_to(int max_size, std::size_t max_len);

enum class SchurMethod { Bialternant, Branching };

double schur_eval(const Signature& nu, std::span<const double> x, SchurMethod method = SchurMethod::Bialternant);
double schur_eval(const Signature& nu, const Configuration& x, const LatticeParams& lp,
                  SchurMethod method = SchurMethod::Bialternant);
// S_nu(1, q, ..., q^{N-1}) by the product formula.
double schur_q_specialization(const Signature& nu, const QBase& q);
double schur_tilde(const Signature& nu, const Configuration& x, const LatticeParams& lp);

IdentityCheck branching_identity_check(const Configuration& x, std::size_t k, const Signature& nu,
                                       const LatticeParams& lp, const TailSpec& tail = {});
// Same identity against an already composed row Lambda^N_K(X, .).
IdentityCheck branching_identity_check(const LinkRow& row, std::size_t k, const Signature& nu, const LatticeParams& lp);

// det[A(x_i, y_j)] with y_{N+1} = +inf, A(x,y) = 1 iff x < y (y > 0) or x <= y (y < 0).
int interlace_det(const Configuration& x, const Configuration& y);

} // namespace qzw
