#pragma once

#include <string>
#include <vector>

#include "relsub/piecewise.hpp"

namespace relsub {

/// One-sided lower Dini quotients of f_omega at a point. d_minus is the left
/// quotient liminf_{t->0+} (f_omega(x-t) - f_omega(x))/t; an inaccessible side
/// reports +inf.
struct DiniData {
    ExtReal d_plus{0.0};
    ExtReal d_minus{0.0};
    bool right_accessible = false;
    bool left_accessible = false;
};

enum class Exactness { exact, estimated };
enum class SubdiffKind { regular_fomega, eps_regular, limiting_relative, limiting_plain };

/// Result of a subdifferential query: a 1-D interval set, read intrinsically
/// or along `direction` for segment queries.
struct SubdiffSet {
    IntervalSet set;
    Vec direction{1.0};
    SubdiffKind kind = SubdiffKind::eps_regular;
    double eps = 0.0;
    Exactness exactness = Exactness::exact;
    double tol = 0.0;                      // estimation tolerance when estimated
    bool left_capped = false;              // estimated sets: candidate cap was hit
    bool right_capped = false;
    std::vector<std::string> notes;
};

/// Local classification of f_omega on one side of a base point.
struct SideInfo {
    bool accessible = false;      // omega extends on this side
    ExtReal value_limit{0.0};     // one-sided limit of f within omega
    bool value_continuous = false;  // value_limit equals f(xbar)
    ExtReal slope{0.0};           // one-sided derivative limit when continuous
    bool slope_exact = false;
};

struct PointAnalysis {
    double x = 0.0;
    double f_value = 0.0;
    SideInfo right, left;
    IntervalSet tangent;          // T(xbar, omega)
};

/// Classify f_omega around a point of omega with f finite there: side
/// accessibility, one-sided value limits (jump detection) and derivative
/// limits of the adjacent pieces, plus the 1-D tangent cone.
PointAnalysis analyze_point(const PiecewiseFunc& f, const ClosedSet& omega, double xbar);

DiniData dini(const PiecewiseFunc& f, const ClosedSet& omega, double xbar);

/// Regular (Frechet) subdifferential of the restriction f_omega:
/// [-d_minus, d_plus] with infinite endpoints open.
SubdiffSet regular_subdiff_fomega(const PiecewiseFunc& f, const ClosedSet& omega, double xbar);

/// eps-regular subdifferential relative to omega: geometric eps-subgradients
/// of f_omega intersected with the tangent cone (J = identity).
SubdiffSet eps_regular_relative(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                                double eps);

/// Limiting subdifferential relative to omega: outer limit of eps_k-regular
/// relative sets along omega-approaches with value convergence.
SubdiffSet limiting_relative(const PiecewiseFunc& f, const ClosedSet& omega, double xbar);

/// Standard limiting subdifferential of f_omega (no tangent intersection).
SubdiffSet limiting_plain(const PiecewiseFunc& f, const ClosedSet& omega, double xbar);

/// Relative subdifferentials of an n-D function on the segment [a, b],
/// reduced to arclength parametrization. The returned scalars sigma stand for
/// vectors sigma * direction.
SubdiffSet segment_subdiff(const PiecewiseFunc& f, const Vec& a, const Vec& b, const Vec& xbar,
                           SubdiffKind kind, double eps = 0.0);

} // namespace relsub
