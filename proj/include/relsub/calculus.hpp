#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relsub/estimator.hpp"
#include "relsub/subdiff.hpp"

namespace relsub {

struct HypothesisCheck {
    std::string name;
    bool passed = false;
    std::string note;
};

enum class RuleVerdict { holds, fails, inconclusive };

struct RuleReport {
    std::string rule_id;
    std::vector<HypothesisCheck> hypotheses;
    RuleVerdict conclusion = RuleVerdict::inconclusive;
    std::vector<std::pair<std::string, std::string>> witnesses;
    double tol = 0.0;
    std::vector<std::string> notes;

    bool hypotheses_ok() const {
        for (const auto& h : hypotheses)
            if (!h.passed) return false;
        return true;
    }
};

/// Certificate produced by the fuzzy searches: base points, inflation levels,
/// subgradients and the residual gamma_bar = ||x* - s1 - s2||.
struct FuzzyCertificate {
    double eta = 0.0;
    Vec x1{0.0}, x2{0.0};
    double eta1 = 0.0, eta2 = 0.0;
    double s1 = 0.0, s2 = 0.0;
    double gamma_bar = 0.0;
    bool valid = false;
    std::string note;
    std::vector<std::pair<double, double>> eta_trend;  // (eta, gamma_bar)
};

/// Upper bound for the relative Lipschitz modulus of f on omega around xbar:
/// sup |f'| over the clipped neighborhood (breakpoints and endpoints
/// included), +inf when values jump or blow up there.
ExtReal certified_lipschitz_modulus(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                                    double radius);

/// Scalar multiplication sandwich lambda*D^{eps_hat} c D^{eps}(lambda f) c
/// lambda*D^{eps_tilde}, plus the exact equalities at eps = 0.
RuleReport scalar_rule_check(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                             double lambda, double eps);

/// Subgradient norm bound |s| <= l + eps(1+l) over a neighborhood grid.
RuleReport lipschitz_bound_check(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                                 double eps, double radius);

/// Inclusion chain regular c limiting-relative c limiting-plain.
RuleReport inclusion_chain_check(const PiecewiseFunc& f, const ClosedSet& omega, double xbar);

/// Exact sum rule D(f1+f2) c D f1 + D f2 for the relative limiting sets.
RuleReport sum_rule_check(const PiecewiseFunc& f1, const PiecewiseFunc& f2,
                          const ClosedSet& omega, double xbar);

/// Fuzzy sum rule search: find x1, x2 near xbar with value proximity and
/// subgradients nearly decomposing x*; sweeps eta downward to record the
/// residual trend.
FuzzyCertificate fuzzy_sum_search(const PiecewiseFunc& f1, const PiecewiseFunc& f2,
                                  const ClosedSet& omega, double xbar, double xstar, double eps,
                                  double eta);

/// Nearest point of a nonempty interval set to x.
double nearest_point_in(const IntervalSet& s, double x);

} // namespace relsub
