#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "relsub/geometry.hpp"
#include "relsub/interval_set.hpp"
#include "relsub/trit.hpp"

namespace relsub {

struct SegmentSet {
    Vec a, b;  // a != b
};

struct BoxSet {
    Vec lo, hi;  // lo <= hi componentwise
};

/// Intersection of half-spaces <normal_i, x> <= offset_i. `unbounded` flags
/// polytopes that are known to have a nontrivial recession cone.
struct PolytopeSet {
    std::vector<Vec> normals;
    std::vector<double> offsets;
    bool unbounded = false;
};

/// Nonempty closed set in R^n (n <= 3): a 1-D interval union, a segment, a
/// box, an H-polytope, or a finite union of convex pieces.
class ClosedSet {
public:
    using Union = std::vector<ClosedSet>;
    using Variant = std::variant<IntervalSet, SegmentSet, BoxSet, PolytopeSet, Union>;

    static ClosedSet interval1d(IntervalSet parts);
    static ClosedSet segment(Vec a, Vec b);
    static ClosedSet box(Vec lo, Vec hi);
    static ClosedSet polytope(std::vector<Vec> normals, std::vector<double> offsets,
                              bool unbounded = false);
    static ClosedSet finite_union(std::vector<ClosedSet> members);

    int dim() const { return dim_; }
    const Variant& v() const { return *v_; }
    bool is_union() const { return std::holds_alternative<Union>(*v_); }
    bool is_convex() const;

    /// Exact interval-union view of a 1-D set (any variant).
    IntervalSet as_interval_set() const;

    std::string describe() const;

private:
    ClosedSet(int dim, Variant v) : dim_(dim), v_(std::make_shared<Variant>(std::move(v))) {}
    int dim_;
    std::shared_ptr<const Variant> v_;
};

/// Tangent cone representation: an interval cone in 1-D, otherwise a union of
/// polyhedral cones, each given by homogeneous rows <n, v> <= 0 (no rows =
/// the whole space).
struct ConeRep {
    int dim = 1;
    IntervalSet line;                      // dim == 1
    std::vector<std::vector<Vec>> cones;   // dim >= 2

    bool contains(const Vec& v, double tol = 1e-9) const;
};

/// dist(x, S) <= tol.
bool contains(const ClosedSet& s, const Vec& x, double tol);

double distance(const ClosedSet& s, const Vec& x);

/// Euclidean nearest point; requires a convex variant.
Vec project(const ClosedSet& s, const Vec& x);

/// Tangent cone of S at a point of S. For finite unions only the members
/// containing the point contribute (the rest are positively separated).
ConeRep tangent_cone(const ClosedSet& s, const Vec& xbar);

/// Membership of xstar in the eps-normal set to convex S at xbar, decided by
/// || proj_{T(xbar,S)} xstar || <= eps, which for convex sets is equivalent to
/// sup_{x in S} (<xstar, x-xbar> - eps||x-xbar||) <= 0.
Trit eps_normal_contains(const ClosedSet& s, const Vec& xbar, const Vec& xstar, double eps,
                         double tol);

/// Duality mapping J restricted to the Euclidean setting: the identity.
inline Vec duality_map(const Vec& v) { return v; }

/// Projection of v onto the polyhedral cone {w : <n_i, w> <= 0}.
Vec project_onto_cone(const std::vector<Vec>& normals, const Vec& v, int dim);

} // namespace relsub
