#include "relsub/subdiff.hpp"

#include <algorithm>
#include <cmath>

#include "relsub/estimator.hpp"

namespace relsub {

namespace {

// Signals that the exact side classification failed and the sampling
// estimator should take over.
struct NeedEstimator {};

// One-sided numeric limit of an expression at x from the given side, used
// when closure evaluation hits a pole. Returns +-inf for divergence.
ExtReal one_sided_limit(const ExprPtr& e, double x, int side, double delta, bool& exact) {
    exact = false;
    std::vector<double> vals;
    for (int j = 6; j <= 40; ++j) {
        double t = x + side * delta * std::pow(0.5, j);
        try {
            ExtReal v = eval_expr(*e, Vec(t));
            if (!v.is_finite()) return v;
            vals.push_back(v.raw());
        } catch (const EvalError&) {
            // keep shrinking
        }
    }
    if (vals.size() < 4) throw NeedEstimator{};
    double last = vals.back();
    if (std::abs(last) > 1e8 && std::abs(last) > 4.0 * std::abs(vals[vals.size() / 2]))
        return last > 0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
    if (std::abs(vals[vals.size() - 1] - vals[vals.size() - 2]) <= 1e-9 * (1.0 + std::abs(last)))
        return ExtReal(last);
    throw NeedEstimator{};
}

SideInfo classify_side(const PiecewiseFunc& f, double xbar, double fbar, int side,
                       const Interval& part) {
    SideInfo info;
    info.accessible = side > 0 ? ExtReal(xbar) < part.hi : ExtReal(xbar) > part.lo;
    if (!info.accessible) return info;

    // probe distance: stay inside the part and before the next f-breakpoint
    double delta = 1.0;
    if (side > 0 && part.hi.is_finite()) delta = std::min(delta, part.hi.raw() - xbar);
    if (side < 0 && part.lo.is_finite()) delta = std::min(delta, xbar - part.lo.raw());
    for (double b : f.breakpoints_1d()) {
        if (side > 0 && b > xbar) delta = std::min(delta, b - xbar);
        if (side < 0 && b < xbar) delta = std::min(delta, xbar - b);
    }
    double probe = xbar + side * delta / 2.0;
    auto idx = f.piece_at(Vec(probe));

    if (!idx) {
        info.value_limit = f.default_value();
        info.value_continuous =
            info.value_limit.is_finite() && info.value_limit.raw() == fbar;
        if (info.value_continuous) {
            info.slope = ExtReal(0.0);  // constant default
            info.slope_exact = true;
        }
        return info;
    }
    const ExprPtr& expr = f.pieces()[*idx].expr;
    bool exact = true;
    ExtReal limit;
    try {
        limit = eval_expr(*expr, Vec(xbar));
    } catch (const EvalError&) {
        limit = one_sided_limit(expr, xbar, side, delta, exact);
    }
    info.value_limit = limit;
    if (limit.is_finite()) {
        double scale = 1.0 + std::abs(fbar);
        info.value_continuous = exact ? limit.raw() == fbar
                                      : std::abs(limit.raw() - fbar) <= 1e-12 * scale;
    }
    if (!info.value_continuous) return info;

    ExprPtr dexpr = piece_derivative(f, *idx);
    bool dexact = true;
    ExtReal g;
    try {
        g = eval_expr(*dexpr, Vec(xbar));
    } catch (const EvalError&) {
        g = one_sided_limit(dexpr, xbar, side, delta, dexact);
    }
    info.slope = g;
    info.slope_exact = dexact && exact;
    return info;
}

IntervalSet tangent_of_part(double xbar, const Interval& part) {
    bool right = ExtReal(xbar) < part.hi;
    bool left = ExtReal(xbar) > part.lo;
    if (left && right) return IntervalSet::all();
    if (right) return IntervalSet(Interval::ray_ge(0.0));
    if (left) return IntervalSet(Interval::ray_le(0.0));
    return IntervalSet::point(0.0);
}

}  // namespace

PointAnalysis analyze_point(const PiecewiseFunc& f, const ClosedSet& omega, double xbar) {
    if (f.dim() != 1) throw std::invalid_argument("subdiff: function must be 1-D");
    IntervalSet dom = omega.as_interval_set();
    const Interval* part = nullptr;
    for (const Interval& p : dom.parts())
        if (p.contains(xbar)) {
            part = &p;
            break;
        }
    if (!part) throw std::domain_error("subdiff: xbar not in omega");
    ExtReal fbar = f.eval(Vec(xbar));
    if (!fbar.is_finite()) throw std::domain_error("subdiff: f(xbar) is not finite");

    PointAnalysis a;
    a.x = xbar;
    a.f_value = fbar.raw();
    a.right = classify_side(f, xbar, fbar.raw(), +1, *part);
    a.left = classify_side(f, xbar, fbar.raw(), -1, *part);
    a.tangent = tangent_of_part(xbar, *part);
    return a;
}

namespace {

ExtReal dini_quotient(const SideInfo& s, double fbar, int side) {
    if (!s.accessible) return ExtReal::pos_inf();
    if (s.value_limit.is_pos_inf()) return ExtReal::pos_inf();
    if (s.value_continuous) return side > 0 ? s.slope : ext_neg(s.slope);
    if (s.value_limit.is_neg_inf() || s.value_limit.raw() < fbar) return ExtReal::neg_inf();
    return ExtReal::pos_inf();  // jump up
}

IntervalSet interval_from_bounds(ExtReal lo, ExtReal hi) {
    if (lo > hi) return IntervalSet::empty();
    if (lo == hi && !lo.is_finite()) return IntervalSet::empty();
    return IntervalSet(Interval::make(lo, lo.is_finite(), hi, hi.is_finite()));
}

// Sublevel set {s : sup over one side's epigraph tangent directions of
// <(s,-1), d> <= eps}, assembled from the side classification. `side` is +1
// for the right side, -1 for the left.
IntervalSet side_sublevel(const SideInfo& s, double fbar, int side, double eps) {
    if (!s.accessible) return IntervalSet::all();
    if (s.value_limit.is_pos_inf()) return IntervalSet::all();
    bool halfplane = false;
    if (!s.value_continuous) {
        if (s.value_limit.is_neg_inf() || s.value_limit.raw() < fbar)
            halfplane = true;  // jump down: epigraph fills the whole side locally
        else
            return IntervalSet::all();  // jump up: locally invisible
    } else if (!s.slope.is_finite()) {
        // value-continuous with infinite slope: only the steep-descent side
        // fills a half-plane, the steep-ascent side degenerates to vertical
        if ((side > 0 && s.slope.is_neg_inf()) || (side < 0 && s.slope.is_pos_inf()))
            halfplane = true;
        else
            return IntervalSet::all();
    }
    if (halfplane) {
        if (eps < 1.0) return IntervalSet::empty();
        double a = std::sqrt(eps * eps - 1.0);
        return side > 0 ? IntervalSet(Interval::ray_le(a)) : IntervalSet(Interval::ray_ge(-a));
    }
    if (!s.slope_exact) throw NeedEstimator{};
    double g = s.slope.raw();
    double ray_bound = g + side * eps * std::sqrt(1.0 + g * g);
    IntervalSet out = side > 0 ? IntervalSet(Interval::ray_le(ray_bound))
                               : IntervalSet(Interval::ray_ge(ray_bound));
    // (s,-1) can point inside the epigraph tangent sector when the boundary
    // ray dips below horizontal; there the sup is ||(s,-1)|| itself.
    if ((side > 0 && g < 0) || (side < 0 && g > 0)) {
        IntervalSet in_sector = side > 0 ? IntervalSet(Interval::ray_ge(-1.0 / g))
                                         : IntervalSet(Interval::ray_le(-1.0 / g));
        IntervalSet ball = IntervalSet::empty();
        if (eps >= 1.0) {
            double a = std::sqrt(eps * eps - 1.0);
            ball = IntervalSet(Interval::closed(-a, a));
        }
        out = iset_intersect(out, iset_union(iset_complement(in_sector), ball));
    }
    return out;
}

IntervalSet eps_geometric_set(const PointAnalysis& a, double eps) {
    IntervalSet s = IntervalSet::all();
    s = iset_intersect(s, side_sublevel(a.right, a.f_value, +1, eps));
    s = iset_intersect(s, side_sublevel(a.left, a.f_value, -1, eps));
    return s;
}

SubdiffSet estimated_eps_fallback(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                                  double eps) {
    Schedule sched;
    SubdiffSet out = reconstruct_1d(f, omega, xbar, eps, sched, 1e-4);
    out.kind = SubdiffKind::eps_regular;
    out.eps = eps;
    return out;
}

}  // namespace

DiniData dini(const PiecewiseFunc& f, const ClosedSet& omega, double xbar) {
    PointAnalysis a = analyze_point(f, omega, xbar);
    DiniData d;
    d.right_accessible = a.right.accessible;
    d.left_accessible = a.left.accessible;
    d.d_plus = dini_quotient(a.right, a.f_value, +1);
    d.d_minus = dini_quotient(a.left, a.f_value, -1);
    return d;
}

SubdiffSet regular_subdiff_fomega(const PiecewiseFunc& f, const ClosedSet& omega, double xbar) {
    DiniData d = dini(f, omega, xbar);
    SubdiffSet out;
    out.set = interval_from_bounds(ext_neg(d.d_minus), d.d_plus);
    out.kind = SubdiffKind::regular_fomega;
    return out;
}

SubdiffSet eps_regular_relative(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                                double eps) {
    if (eps < 0) throw std::invalid_argument("eps_regular_relative: eps must be >= 0");
    PointAnalysis a = analyze_point(f, omega, xbar);
    try {
        SubdiffSet out;
        out.set = iset_intersect(eps_geometric_set(a, eps), a.tangent);
        out.kind = SubdiffKind::eps_regular;
        out.eps = eps;
        return out;
    } catch (const NeedEstimator&) {
        return estimated_eps_fallback(f, omega, xbar, eps);
    }
}

namespace {

// Approach-mode contributions to the limiting sets: each accessible,
// value-continuous side with a finite derivative limit feeds the one-point
// limit of the smooth eps_k-regular sets along that side. A value-continuous
// side with an infinite derivative limit is not relatively Lipschitz, and the
// estimator verdict takes precedence.
struct SideModes {
    IntervalSet points;
    bool need_estimator = false;
};

SideModes side_mode_contributions(const PointAnalysis& a) {
    SideModes m;
    for (const SideInfo* s : {&a.right, &a.left}) {
        if (!s->accessible || !s->value_continuous) continue;
        if (!s->slope_exact || !s->slope.is_finite()) {
            m.need_estimator = true;
            continue;
        }
        m.points = iset_union(m.points, IntervalSet::point(s->slope.raw()));
    }
    return m;
}

SubdiffSet limiting_generic(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                            bool intersect_tangent) {
    PointAnalysis a = analyze_point(f, omega, xbar);
    SideModes modes = side_mode_contributions(a);
    SubdiffKind kind =
        intersect_tangent ? SubdiffKind::limiting_relative : SubdiffKind::limiting_plain;
    if (modes.need_estimator) {
        Schedule sched;
        SubdiffSet out = limiting_estimate(f, omega, xbar, sched);
        out.kind = kind;
        out.notes.push_back("non-Lipschitz approach; sampling estimate used");
        return out;
    }
    try {
        IntervalSet stationary = eps_geometric_set(a, 0.0);
        if (intersect_tangent) stationary = iset_intersect(stationary, a.tangent);
        SubdiffSet out;
        out.set = iset_union(stationary, modes.points);
        out.kind = kind;
        return out;
    } catch (const NeedEstimator&) {
        Schedule sched;
        SubdiffSet out = limiting_estimate(f, omega, xbar, sched);
        out.kind = kind;
        return out;
    }
}

}  // namespace

SubdiffSet limiting_relative(const PiecewiseFunc& f, const ClosedSet& omega, double xbar) {
    return limiting_generic(f, omega, xbar, true);
}

SubdiffSet limiting_plain(const PiecewiseFunc& f, const ClosedSet& omega, double xbar) {
    return limiting_generic(f, omega, xbar, false);
}

SubdiffSet segment_subdiff(const PiecewiseFunc& f, const Vec& a, const Vec& b, const Vec& xbar,
                           SubdiffKind kind, double eps) {
    if (a.dim != f.dim() || b.dim != f.dim() || xbar.dim != f.dim())
        throw std::invalid_argument("segment_subdiff: dimension mismatch");
    Vec d = b - a;
    double len = norm(d);
    if (len == 0.0) throw std::invalid_argument("segment_subdiff: a == b");
    Vec u = (1.0 / len) * d;
    double s0 = dot(xbar - a, u);
    Vec nearest = a + std::clamp(s0, 0.0, len) * u;
    if (norm(xbar - nearest) > 1e-9) throw std::domain_error("segment_subdiff: xbar off segment");
    s0 = std::clamp(s0, 0.0, len);

    PiecewiseFunc g = pullback_line(f, a, u);
    ClosedSet omega_s = ClosedSet::interval1d(IntervalSet(Interval::closed(0.0, len)));
    SubdiffSet out;
    switch (kind) {
        case SubdiffKind::regular_fomega:
            out = regular_subdiff_fomega(g, omega_s, s0);
            break;
        case SubdiffKind::eps_regular:
            out = eps_regular_relative(g, omega_s, s0, eps);
            break;
        case SubdiffKind::limiting_relative:
            out = limiting_relative(g, omega_s, s0);
            break;
        case SubdiffKind::limiting_plain:
            out = limiting_plain(g, omega_s, s0);
            break;
    }
    out.direction = u;
    return out;
}

} // namespace relsub
