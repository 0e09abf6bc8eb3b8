#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relsub/expr.hpp"
#include "relsub/sets.hpp"
#include "relsub/trit.hpp"

namespace relsub {

/// Piece guard: exact interval union in 1-D, a closed region (or the whole
/// space) in higher dimension. `clips` holds extra intersections accumulated
/// by restriction.
struct GuardRegion {
    bool all_space = false;
    std::optional<IntervalSet> iset;   // 1-D
    std::optional<ClosedSet> region;   // n-D
    std::vector<ClosedSet> clips;

    static GuardRegion whole_space() {
        GuardRegion g;
        g.all_space = true;
        return g;
    }
    static GuardRegion interval(IntervalSet s) {
        GuardRegion g;
        g.iset = std::move(s);
        return g;
    }
    static GuardRegion closed_set(ClosedSet s) {
        GuardRegion g;
        g.region = std::move(s);
        return g;
    }

    bool contains(const Vec& x) const;
};

struct Piece {
    GuardRegion guard;
    ExprPtr expr;
};

/// Extended-real piecewise function: disjoint guards (validated), a default
/// value outside every guard, evaluation total.
class PiecewiseFunc {
public:
    PiecewiseFunc(int dim, std::vector<Piece> pieces, ExtReal default_value = ExtReal::pos_inf());

    int dim() const { return dim_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    ExtReal default_value() const { return default_; }

    ExtReal eval(const Vec& x) const;
    /// Index of the matching piece, or nullopt when the default applies.
    std::optional<std::size_t> piece_at(const Vec& x) const;

    /// Finite 1-D guard endpoints, sorted, deduplicated.
    std::vector<double> breakpoints_1d() const;

private:
    int dim_;
    std::vector<Piece> pieces_;
    ExtReal default_;
};

/// Guard disjointness (exact in 1-D, sampled otherwise), pole exclusion for
/// Div denominators, and abs-split checks. Throws on violation.
void validate(const PiecewiseFunc& f);

/// f restricted to omega: f on omega, +inf outside.
PiecewiseFunc restrict_func(const PiecewiseFunc& f, const ClosedSet& omega);

/// lambda * f (lambda > 0) and f + c.
PiecewiseFunc scale_func(double lambda, const PiecewiseFunc& f);
PiecewiseFunc shift_func(const PiecewiseFunc& f, double c);

/// Exact pointwise sum of two validated 1-D functions (guards overlaid).
PiecewiseFunc add_funcs(const PiecewiseFunc& f, const PiecewiseFunc& g);

/// 1-D pullback g(s) = f(p + s * d) of an n-D function onto a line.
PiecewiseFunc pullback_line(const PiecewiseFunc& f, const Vec& p, const Vec& d);

/// Symbolic derivative of one piece, valid on the piece interior.
ExprPtr piece_derivative(const PiecewiseFunc& f, std::size_t piece_index);

struct LipEstimate {
    ExtReal value{0.0};
    std::vector<double> radii;
    bool confident = false;
};

/// Grid estimate of the relative Lipschitz modulus lip of f on omega at xbar:
/// max pairwise quotient per radius, minimized over the radius schedule.
LipEstimate lip_estimate(const PiecewiseFunc& f, const ClosedSet& omega, const Vec& xbar,
                         const std::vector<double>& radii, int grid_density = 64,
                         std::uint64_t seed = 0);

/// Lower semicontinuity of f relative to omega at xbar (sampled liminf).
Trit check_lsc_relative(const PiecewiseFunc& f, const ClosedSet& omega, const Vec& xbar,
                        double tol);

struct AroundCheck {
    bool ok = false;
    double radius = 0.0;   // radius at which the property held (when ok)
    std::string note;      // failure description otherwise
};

/// Relative lower semicontinuity *around* xbar: lsc relative to omega at every
/// sampled point of some neighborhood (points outside dom f count as failures).
AroundCheck lsc_relative_around(const PiecewiseFunc& f, const ClosedSet& omega, const Vec& xbar,
                                double tol);

/// Deterministic grid over omega intersected with the closed ball B(center, r).
std::vector<Vec> sample_in_ball(const ClosedSet& s, const Vec& center, double r, int per_dim);

} // namespace relsub
