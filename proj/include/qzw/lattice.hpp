#pragma once

#include "qzw/qspecial.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qzw {

enum class Branch : int { Minus = -1, Plus = 1 };

// Point zeta_branch * q^m of the double lattice. Ordering follows the real values
// and does not depend on q or the zetas.
struct LatticePoint {
    Branch branch = Branch::Plus;
    std::int64_t m = 0;

    static LatticePoint plus(std::int64_t m) { return {Branch::Plus, m}; }
    static LatticePoint minus(std::int64_t m) { return {Branch::Minus, m}; }

    bool positive() const { return branch == Branch::Plus; }
    int sign() const { return static_cast<int>(branch); }

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b);
};

std::string to_string(const LatticePoint& p);

struct TailSpec {
    // Points with |x| < cutoff (near 0) or |x| > cap are not enumerated.
    // Nonpositive values select the defaults q^64 min|zeta| and q^-64 max|zeta|.
    double cutoff = -1.0;
    double cap = -1.0;
};

class LatticeParams {
public:
    LatticeParams(double q, double zeta_minus, double zeta_plus);

    const QBase& q() const { return q_; }
    double zeta_minus() const { return zeta_minus_; }
    double zeta_plus() const { return zeta_plus_; }
    double zeta(Branch b) const { return b == Branch::Plus ? zeta_plus_ : zeta_minus_; }

    double value(const LatticePoint& p) const;
    double abs_value(const LatticePoint& p) const { return std::abs(value(p)); }
    double log_abs(const LatticePoint& p) const;

    // Sign of |a| - |b|, exact whenever |zeta_-|/zeta_+ is an integer power of q.
    int compare_abs(const LatticePoint& a, const LatticePoint& b) const;

    // Exact location of a real number on the lattice, if it is a lattice point.
    std::optional<LatticePoint> locate(double x) const;

    double cutoff(const TailSpec& t) const;
    double cap(const TailSpec& t) const;
    // Largest exponent with |zeta_b| q^m >= cutoff.
    std::int64_t innermost(Branch b, const TailSpec& t) const;
    // Smallest exponent with |zeta_b| q^m <= cap.
    std::int64_t outermost(Branch b, const TailSpec& t) const;

    bool operator==(const LatticeParams& o) const
    {
        return q_.value() == o.q_.value() && zeta_minus_ == o.zeta_minus_ && zeta_plus_ == o.zeta_plus_;
    }

private:
    QBase q_;
    double zeta_minus_;
    double zeta_plus_;
    // |zeta_-| q^m = zeta_+ q^{m + shift_}
    double shift_;
    std::optional<std::int64_t> integer_shift_;
};

class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::vector<LatticePoint> points);
    // Sorts the input, rejecting repeated points.
    static Configuration from_unsorted(std::vector<LatticePoint> points);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const LatticePoint& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<LatticePoint>& points() const { return points_; }
    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }
    bool contains(const LatticePoint& p) const;

    std::vector<double> values(const LatticeParams& lp) const;

    friend bool operator==(const Configuration&, const Configuration&) = default;
    friend auto operator<=>(const Configuration& a, const Configuration& b)
    {
        return a.points_ <=> b.points_;
    }

private:
    std::vector<LatticePoint> points_;
};

std::string to_string(const Configuration& c);
// Compact form "+0,-1,+3": sign gives the branch, the integer the exponent.
Configuration parse_points(const std::string& text);
LatticePoint parse_point(const std::string& text);

struct Endpoint {
    enum class Kind { NegInf, Finite, PosInf };
    Kind kind = Kind::Finite;
    LatticePoint point;

    static Endpoint neg_inf() { return {Kind::NegInf, {}}; }
    static Endpoint pos_inf() { return {Kind::PosInf, {}}; }
    static Endpoint at(LatticePoint p) { return {Kind::Finite, p}; }
};

struct IntervalPoints {
    std::vector<LatticePoint> points; // increasing
    bool truncated = false;
};

// I(a,b): [a,b) for a<b<0, [a,b] for a<0<b, (a,b] for 0<a<b.
bool in_interval_I(const LatticePoint& x, const LatticePoint& a, const LatticePoint& b);
IntervalPoints interval_I(const LatticePoint& a, const LatticePoint& b, const LatticeParams& lp,
                          const TailSpec& tail = {});

// I~(a,b): (a,b] for a<b<0, (a,b) for a<0<b, [a,b) for 0<a<b; infinite ends allowed.
bool in_interval_I_tilde(const LatticePoint& x, const Endpoint& a, const Endpoint& b);
IntervalPoints interval_I_tilde(const Endpoint& a, const Endpoint& b, const LatticeParams& lp,
                                const TailSpec& tail = {});

// Y < X, with |X| = |Y| + 1, via the I intervals.
bool interlace(const Configuration& x, const Configuration& y);
// Same relation via the I~ splitting of the lattice by Y.
bool interlace_tilde(const Configuration& x, const Configuration& y);

struct VariationalSeries {
    std::vector<LatticePoint> terms;
};

VariationalSeries variational_series(const Configuration& x, const LatticeParams& lp);
VariationalSeries variational_series(std::vector<LatticePoint> points, const LatticeParams& lp);
// |x_(2n)| <= |x_(1)| q^{n-1} and |x_(2n+1)| <= |x_(1)| q^n.
bool satisfies_decay_bound(const VariationalSeries& s, const LatticeParams& lp);

} // namespace qzw
