#pragma once

#include "relsub/calculus.hpp"

namespace relsub {

enum class OptimalityCondition { fermat_eps, fermat_limiting, sum_exact, sum_fuzzy };
enum class OptimalityStatus { holds, violated, inconclusive };

/// Necessary-condition verdict. `violated` certifies non-optimality and
/// carries the gap dist(0, relevant set).
struct OptimalityVerdict {
    OptimalityCondition condition = OptimalityCondition::fermat_limiting;
    OptimalityStatus status = OptimalityStatus::inconclusive;
    std::vector<HypothesisCheck> hypotheses;
    std::vector<std::pair<std::string, std::string>> witnesses;
    double gap = 0.0;
    bool non_optimality_certificate = false;
    std::vector<std::string> notes;
};

/// Fermat rules: 0 in the eps-regular relative subdifferential for every
/// listed eps, and 0 in the limiting relative subdifferential.
OptimalityVerdict fermat_check(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                               const std::vector<double>& eps_list);

/// Sum problem optimality: 0 in D f1(xbar) + D f2(xbar) over convex C, under
/// the relative Lipschitz / relative lsc hypotheses.
OptimalityVerdict sum_optimality_check(const PiecewiseFunc& f1, const PiecewiseFunc& f2,
                                       const ClosedSet& c, double xbar);

/// Approximate optimality: search for x1, x2 near a verified minimizer with
/// 0 nearly in the eta~-regular sum, eta~ < 4 eta (l+1).
FuzzyCertificate approx_optimality_search(const PiecewiseFunc& f1, const PiecewiseFunc& f2,
                                          const ClosedSet& c, double xbar, double eta);

struct LocalMin {
    double x = 0.0;
    double value = 0.0;
    double basin = 0.0;
};

/// Grid + refinement scan for local minimizers of f restricted to omega.
std::vector<LocalMin> local_min_scan(const PiecewiseFunc& f, const ClosedSet& omega,
                                     int grid_density);

struct MeanValueWitness {
    Vec c{0.0};
    double arc_c = 0.0;          // arclength of c from a
    Vec direction{1.0};
    double xstar = 0.0;          // scalar sigma; the selection is sigma * direction
    double phi_min = 0.0;
    double delta_f = 0.0;        // f(b) - f(a)
    double pairing = 0.0;        // <x*, b - a> = sigma * |b - a|
    double ineq_residual = 0.0;      // pairing - delta_f
    double scaled_residual = 0.0;    // <x*, b-c> - (|b-c|/|b-a|) delta_f
    bool equality_case = false;      // c != a
    double equality_residual = 0.0;  // |pairing - delta_f| when c != a
    bool valid = false;
    std::string note;
};

/// Mean value witness: minimize phi(x) = f(x) + ((f(b)-f(a))/|b-a|)|x-b| over
/// [a, b], take the relative limiting subdifferential at the minimizer, and
/// select the endpoint maximizing <x*, b-a>. `trace`, when given, receives
/// (t, f(a+t u), phi(a+t u)) rows.
MeanValueWitness mean_value_witness(const PiecewiseFunc& f, const Vec& a, const Vec& b,
                                    std::vector<std::array<double, 3>>* trace = nullptr);

/// Secant-inequality convexity test of f on the segment [a, b].
Trit convexity_check(const PiecewiseFunc& f, const Vec& a, const Vec& b, int grid, double tol);

/// Set-valued monotonicity of the selected subdifferential map along [a, b]:
/// sup F(u) <= inf F(v) + tol for u < v in arclength order.
Trit monotonicity_check(SubdiffKind kind, const PiecewiseFunc& f, const Vec& a, const Vec& b,
                        int grid, double tol);

/// Equivalence of (i) convexity, (ii) monotone plain limiting map, (iii) (ii)
/// plus relative Lipschitz continuity, (iv) monotone relative limiting map
/// plus relative Lipschitz continuity; includes the convex => Lipschitz
/// consequence.
RuleReport equivalence_report(const PiecewiseFunc& f, const Vec& a, const Vec& b);

} // namespace relsub
