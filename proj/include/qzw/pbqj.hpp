#pragma once

#include "qzw/lattice.hpp"

#include <functional>
#include <limits>
#include <optional>

namespace qzw {

enum class PairKind { ConjugatePair, RealGap, RealOnLattice, Other };

const char* to_string(PairKind k);

// Classifies (a,b) for positivity of (ax,bx;q)_inf on the lattice.
PairKind classify_pair(cplx a, cplx b, const LatticeParams& lp);

struct PBQJParams {
    cplx a, b, c, d;
    LatticeParams lattice;

    PBQJParams(cplx a, cplx b, cplx c, cplx d, LatticeParams lp);
    const QBase& q() const { return lattice.q(); }
    PBQJParams shifted(int c_shift, int d_shift) const; // c q^{c_shift}, d q^{d_shift}
};

inline constexpr int kUnboundedDegree = std::numeric_limits<int>::max();

struct DegreeBound {
    int n_max = -1;            // kUnboundedDegree when ab < 0
    bool near_boundary = false; // cdq/(ab) within 1e-9 of a power q^{-2n}
};

DegreeBound n_max(const PBQJParams& p);

// w(x) = |x| (ax,bx;q)_inf / (cx,dx;q)_inf as a product of per-factor ratios.
Scaled weight_w_scaled(const LatticePoint& x, const PBQJParams& p, double tol = kDefaultTol);
double weight_w(const LatticePoint& x, const PBQJParams& p, double tol = kDefaultTol);
// Same product for a complex argument; `abs_x` replaces |x|.
Scaled weight_w_complex(cplx x, cplx abs_x, cplx a, cplx b, cplx c, cplx d, const QBase& q,
                        double tol = kDefaultTol);

Scaled pbqj_eval_scaled(int n, cplx x, const PBQJParams& p);
cplx pbqj_eval(int n, cplx x, const PBQJParams& p);
// (P_n(y) - P_n(x)) / (y - x) summed term by term, so no cancellation as y -> x.
Scaled pbqj_divided_difference_scaled(int n, cplx x, cplx y, const PBQJParams& p);
cplx big_qjacobi_eval(int n, cplx u, cplx a, cplx b, cplx c, const QBase& q);

Scaled leading_coeff_scaled(int n, const PBQJParams& p);
cplx leading_coeff(int n, const PBQJParams& p);

// Squared norms. h_n is complex for complex parameters; h_n / k_n^2 is the
// squared norm of the monic polynomial and is real and positive.
Scaled norm_h0_scaled(const PBQJParams& p);
Scaled norm_h_scaled(int n, const PBQJParams& p);
cplx norm_h(int n, const PBQJParams& p);
Scaled monic_norm_scaled(int n, const PBQJParams& p);
double monic_norm(int n, const PBQJParams& p);

struct LatticeSum {
    cplx value{0.0, 0.0};
    double tail_bound = 0.0;
    double abs_sum = 0.0;
    std::size_t points = 0;
};

// Sum of f over x = zeta_b q^m for m = start, start+dir, ...; stops once the
// observed geometric decay bounds the remainder below rel_tol of the sum.
LatticeSum sum_branch(const LatticeParams& lp, Branch b, std::int64_t start, int dir,
                      const std::function<cplx(const LatticePoint&)>& f, double rel_tol = 1e-16);
LatticeSum sum_lattice(const LatticeParams& lp, const std::function<cplx(const LatticePoint&)>& f,
                       double rel_tol = 1e-16);

struct InnerProduct {
    cplx value;
    double tail_bound = 0.0;
    double normalized = 0.0; // |value| / sqrt(|h_m h_n|)
};

InnerProduct orthogonality_check(int m, int n, const PBQJParams& p);

struct ShiftCheck {
    cplx lhs, rhs;
    double tail_bound = 0.0;
    double abs_terms = 0.0; // sum of |terms| on the left, a scale for cancellation
    double rel_error() const;
};

// Sum_{x <| y} w*(x) P*_{n+1}(x) against cq/((b-c)(a-c)) w(y) P_n(y)/|y|.
ShiftCheck backward_shift_check(int n, const LatticePoint& y, const PBQJParams& p);

// Pointwise backward shift relation for the big q-Jacobi polynomials.
ShiftCheck big_qjacobi_shift_check(int n, cplx u, cplx a, cplx b, cplx c, const QBase& q);

} // namespace qzw
