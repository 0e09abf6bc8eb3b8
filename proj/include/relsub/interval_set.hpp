#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relsub/extreal.hpp"

namespace relsub {

/// One real interval with independently open/closed finite endpoints.
/// Invariants: lo <= hi; lo == hi forces both endpoints closed (a singleton);
/// an endpoint at +-inf is always open.
struct Interval {
    ExtReal lo, hi;
    bool lo_closed = true;
    bool hi_closed = true;

    static Interval closed(double a, double b);
    static Interval point(double a) { return closed(a, a); }
    static Interval make(ExtReal lo, bool lo_closed, ExtReal hi, bool hi_closed);
    static Interval all();                       // (-inf, inf)
    static Interval ray_ge(double a, bool closed = true);  // [a, inf) or (a, inf)
    static Interval ray_le(double a, bool closed = true);  // (-inf, a] or (-inf, a)

    bool is_singleton() const { return lo == hi; }
    bool contains(double x) const;
};

/// Canonical finite union of disjoint, non-adjacent intervals sorted by lo.
/// The empty union represents the empty set.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(Interval iv) : parts_{iv} {}

    /// Canonicalize an arbitrary interval list (sort, merge overlaps and
    /// touching endpoints).
    static IntervalSet canonicalize(std::vector<Interval> parts);

    static IntervalSet empty() { return IntervalSet(); }
    static IntervalSet all() { return IntervalSet(Interval::all()); }
    static IntervalSet point(double a) { return IntervalSet(Interval::point(a)); }

    const std::vector<Interval>& parts() const { return parts_; }
    bool is_empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    bool contains(double x) const;
    /// Distance from x to the set (+inf for the empty set).
    double distance(double x) const;

    bool operator==(const IntervalSet& o) const;
    bool operator!=(const IntervalSet& o) const { return !(*this == o); }

    bool subset_of(const IntervalSet& o, double slack = 0.0) const;

    ExtReal inf() const;  // +inf for empty set
    ExtReal sup() const;  // -inf for empty set
    bool left_unbounded() const { return !parts_.empty() && parts_.front().lo.is_neg_inf(); }
    bool right_unbounded() const { return !parts_.empty() && parts_.back().hi.is_pos_inf(); }

    std::string to_string() const;

private:
    std::vector<Interval> parts_;
};

IntervalSet iset_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet iset_intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet iset_complement(const IntervalSet& a);
IntervalSet iset_difference(const IntervalSet& a, const IntervalSet& b);

/// Image {lambda * x + c : x in A}; lambda must be nonzero.
IntervalSet iset_affine(const IntervalSet& a, double lambda, double c);

/// Elementwise sum {x + y : x in A, y in B} (empty if either is empty).
IntervalSet iset_minkowski_sum(const IntervalSet& a, const IntervalSet& b);

/// Hausdorff distance after clipping both sets to [-cap, cap].
/// Returns 0 for two empty clips, +inf if exactly one clip is empty.
double iset_hausdorff_clipped(const IntervalSet& a, const IntervalSet& b, double cap);

/// Numerical Painleve-Kuratowski outer limit of an interval-set sequence.
struct OuterLimitResult {
    IntervalSet set;
    bool converged = false;
    std::string diagnostic;  // raw data summary when not converged
};

/// Outer limit from endpoint-sequence convergence detection. `seq` pairs a
/// strictly increasing index with each set; `tol_lim` bounds the accepted
/// endpoint oscillation (default 1e-7).
OuterLimitResult iset_outer_limit(const std::vector<std::pair<int, IntervalSet>>& seq,
                                  double tol_lim = 1e-7);

} // namespace relsub
