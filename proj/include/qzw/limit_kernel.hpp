#pragma once

#include "qzw/zw_measures.hpp"

#include <vector>

namespace qzw {

// F_r(y) = sqrt(R(y)) * G_r(y). R is the radicand |y|(y alpha, y beta)_inf / theta(y gamma) theta(y delta)
// with |y| continued as sign * y; G_r carries the power, the Pochhammer ratio and the 2phi1.
struct FPieces {
    Scaled radicand;
    Scaled g;
};

struct FOptions {
    // which of the four representations to use: bit 0 swaps alpha/beta, bit 1 gamma/delta;
    // -1 picks the one with the smallest 2phi1 argument
    int swap = -1;
};

// Representation used for F_r: the swap with the smallest |q^{r-1} beta / gamma| (< 1).
int f_swap_choice(int r, const ParamQuadruple& pq);
FPieces f_pieces(int r, cplx y, int sign, const ParamQuadruple& pq, const FOptions& opts = {});

double F_r(int r, const LatticePoint& x, const ParamQuadruple& pq, const FOptions& opts = {});
double h_frak(int r, const ParamQuadruple& pq);

struct DiagonalEstimate {
    double value = 0.0;          // Cauchy trapezoid, finer rule
    double cauchy_coarse = 0.0;  // coarser rule
    double finite_difference = 0.0;
    double rel_disagreement = 0.0; // |Cauchy - FD| / |Cauchy|
};

class BoundaryKernel {
public:
    // Fails with InvalidParams outside the kernel regime.
    explicit BoundaryKernel(ParamQuadruple pq);

    const ParamQuadruple& params() const { return pq_; }
    double h1() const { return h1_; }

    double operator()(const LatticePoint& x, const LatticePoint& y) const;
    // Throws QuadratureDisagreement when the two diagonal routes differ by more than 1e-6.
    DiagonalEstimate diagonal(const LatticePoint& x, int nodes = 128) const;
    Eigen::MatrixXd matrix(const std::vector<LatticePoint>& pts) const;

private:
    ParamQuadruple pq_;
    double h1_;
};

double boundary_kernel(const LatticePoint& x, const LatticePoint& y, const BoundaryKernel& bk);
CorrelationValue boundary_correlation(const std::vector<LatticePoint>& pts, const BoundaryKernel& bk);

struct Phi32LimitRow {
    int n = 0;
    Scaled lhs, rhs;
    double ratio_error = 0.0; // |lhs/rhs - 1|
};

std::vector<Phi32LimitRow> phi32_limit_check(const std::vector<int>& ns, cplx b, cplx c, cplx d, cplx e,
                                             const QBase& q);

// Finite-N quantities with the diverging prefactors cancelled analytically:
// phi_r(x) -> F_r(x), H_r -> h_r, kernel -> K_N with sign factors sgn(x)^{N-1} sgn(y)^{N-1}.
class ScaledFiniteN {
public:
    ScaledFiniteN(const ParamQuadruple& pq, int n);

    int size() const { return ens_.size(); }
    const EnsembleN& ensemble() const { return ens_; }

    double phi(int r, const LatticePoint& x) const;
    double big_h(int r) const;
    // K_N(x, y) assembled from the scaled pieces; equals cd_kernel_N.
    double kernel(const LatticePoint& x, const LatticePoint& y) const;
    // sgn(x)^{N-1} sgn(y)^{N-1} K_N(x, y), the quantity that converges to K(x, y).
    double kernel_signed(const LatticePoint& x, const LatticePoint& y) const;

private:
    Scaled prefactor(const LatticePoint& x) const; // x^{-(N-1)} sqrt(w / ((q/(gamma x))_{N-1} (q/(delta x))_{N-1}))

    EnsembleN ens_;
    PBQJParams base_;
};

struct ConvergenceRow {
    int n = 0;
    double error = 0.0;
};

// max over points and r of |phi_r - F_r| / max(|F_r|, floor)
std::vector<ConvergenceRow> polynomial_limit_table(const ParamQuadruple& pq, const std::vector<int>& ns,
                                                   const std::vector<LatticePoint>& pts, const std::vector<int>& rs);
// max over r of |H_r / h_r - 1|
std::vector<ConvergenceRow> norm_limit_table(const ParamQuadruple& pq, const std::vector<int>& ns,
                                             const std::vector<int>& rs);
// max over pairs of |sgn K_N - K| (absolute)
std::vector<ConvergenceRow> kernel_limit_table(const ParamQuadruple& pq, const std::vector<int>& ns,
                                               const std::vector<std::pair<LatticePoint, LatticePoint>>& pairs);

} // namespace qzw
