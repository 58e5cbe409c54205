#pragma once

#include "qzw/pbqj.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace qzw {

enum class ParamClass { Nondegenerate, DegenerateExA, Invalid };

const char* to_string(ParamClass c);

struct ParamQuadruple {
    cplx alpha, beta, gamma, delta;
    LatticeParams lattice;
    ParamClass classification = ParamClass::Invalid;
    bool kernel_regime = false; // alpha beta < q^2 gamma delta
    std::string reason;         // why the quadruple is invalid, empty otherwise

    ParamQuadruple(cplx alpha, cplx beta, cplx gamma, cplx delta, LatticeParams lp);
    bool admissible() const { return classification != ParamClass::Invalid; }
    const QBase& q() const { return lattice.q(); }
};

// sqrt(w_N(x)) and the monic polynomials p_0..p_N at one lattice point.
struct KernelPoint {
    LatticePoint point;
    double value = 0.0;
    Scaled sqrt_w;
    std::vector<Scaled> p;
};

class EnsembleN {
public:
    // Fails with InvalidParams unless the quadruple is admissible.
    EnsembleN(ParamQuadruple params, int n);

    const ParamQuadruple& params() const { return params_; }
    int size() const { return n_; }
    const LatticeParams& lattice() const { return params_.lattice; }
    // (alpha, beta, gamma q^{1-N}, delta q^{1-N})
    const PBQJParams& poly() const { return poly_; }
    const Scaled& monic_norm(int k) const { return norms_[k]; }
    double log_z() const { return log_z_; }

    KernelPoint evaluate(const LatticePoint& x) const;
    Scaled weight(const LatticePoint& x) const;

private:
    ParamQuadruple params_;
    int n_;
    PBQJParams poly_;
    std::vector<Scaled> norms_; // h_k / k_k^2, k < N
    double log_z_ = 0.0;
};

double measure_weight(const Configuration& x, const EnsembleN& ens);

double cd_kernel_N(const KernelPoint& x, const KernelPoint& y, const EnsembleN& ens);
double cd_kernel_N(const LatticePoint& x, const LatticePoint& y, const EnsembleN& ens);
// sum_{n<N} sqrt(w(x)w(y)) p_n(x) p_n(y) / h^_n
double cd_kernel_sum_form(const KernelPoint& x, const KernelPoint& y, const EnsembleN& ens);

Eigen::MatrixXd kernel_matrix(const std::vector<LatticePoint>& pts, const EnsembleN& ens);

struct CorrelationValue {
    double value = 0.0; // clamped to [0, 1]
    double raw = 0.0;
    bool clamped = false; // raw was outside [-tol, 1 + tol]
};

CorrelationValue determinant_correlation(const Eigen::MatrixXd& k, double tol);
CorrelationValue correlation_N(const std::vector<LatticePoint>& pts, const EnsembleN& ens);

struct CoherencyCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double tail_bound = 0.0;
    double rel_error() const;
};

// sum_{X > Y} M_{N+1}(X) Lambda^{N+1}_N(X, Y) against M_N(Y), for ens at level N+1.
CoherencyCheck coherency_check(const EnsembleN& ens_next, const Configuration& y);
// Same left-hand side by explicit enumeration over truncated intervals.
double coherency_lhs_enumerated(const EnsembleN& ens_next, const Configuration& y, const TailSpec& tail);

// Lattice window carrying nearly all of the kernel's trace.
struct KernelWindow {
    std::vector<LatticePoint> points; // increasing
    std::vector<KernelPoint> data;
    Eigen::MatrixXd kernel;
    double trace = 0.0;
};

KernelWindow kernel_window(const EnsembleN& ens, double trace_tol = 1e-6);

enum class EnsembleSampler { Dpp, Gibbs };

class EnsembleSamplerState {
public:
    EnsembleSamplerState(const EnsembleN& ens, EnsembleSampler method, int gibbs_sweeps = 50);
    Configuration sample(std::mt19937_64& rng);
    const KernelWindow& window() const { return window_; }

private:
    Configuration sample_dpp(std::mt19937_64& rng);
    Configuration sample_gibbs(std::mt19937_64& rng);

    const EnsembleN& ens_;
    EnsembleSampler method_;
    int sweeps_;
    KernelWindow window_;
    Eigen::MatrixXd basis_;       // window x N orthonormal eigenvectors
    std::vector<double> log_w_;   // Gibbs: log w_N on the window
};

Configuration sample_ensemble(const EnsembleN& ens, std::mt19937_64& rng, EnsembleSampler method);

// Sum of f over the lattice points of I~(a, b), with the geometric tail bound.
LatticeSum sum_interval_tilde(const LatticeParams& lp, const Endpoint& a, const Endpoint& b,
                              const std::function<cplx(const LatticePoint&)>& f, double rel_tol = 1e-16);

} // namespace qzw
