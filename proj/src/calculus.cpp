#include "relsub/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace relsub {

namespace {

std::string fmt(double v) { return to_string(ExtReal(v)); }

// Grid over the 1-D neighborhood omega n [xbar-r, xbar+r], with part
// endpoints and function breakpoints included.
std::vector<double> neighborhood_grid(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                                      double r, int n) {
    IntervalSet win = iset_intersect(omega.as_interval_set(),
                                     IntervalSet(Interval::closed(xbar - r, xbar + r)));
    std::vector<double> xs;
    for (const Interval& p : win.parts()) {
        double lo = p.lo.raw(), hi = p.hi.raw();
        for (int i = 0; i < n; ++i) xs.push_back(lo + (hi - lo) * i / (n - 1));
    }
    for (double b : f.breakpoints_1d())
        if (win.contains(b)) xs.push_back(b);
    xs.push_back(xbar);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace

ExtReal certified_lipschitz_modulus(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                                    double radius) {
    IntervalSet win = iset_intersect(omega.as_interval_set(),
                                     IntervalSet(Interval::closed(xbar - radius, xbar + radius)));
    if (win.is_empty()) return ExtReal(0.0);

    // value continuity across breakpoints inside the window
    for (double b : f.breakpoints_1d()) {
        if (!win.contains(b)) continue;
        ExtReal fb = f.eval(Vec(b));
        if (fb.is_pos_inf()) {
            // b outside dom f: Lipschitz fails only if dom has nearby points;
            // treat as +inf when the window holds finite values elsewhere
            return ExtReal::pos_inf();
        }
        try {
            PointAnalysis a = analyze_point(f, ClosedSet::interval1d(win), b);
            for (const SideInfo* s : {&a.right, &a.left})
                if (s->accessible && !s->value_continuous) return ExtReal::pos_inf();
        } catch (const std::exception&) {
            return ExtReal::pos_inf();
        }
    }

    double best = 0.0;
    for (std::size_t pi = 0; pi < f.pieces().size(); ++pi) {
        const Piece& p = f.pieces()[pi];
        IntervalSet g = p.guard.all_space ? IntervalSet::all() : *p.guard.iset;
        IntervalSet cut = iset_intersect(g, win);
        if (cut.is_empty()) continue;
        ExprPtr d = piece_derivative(f, pi);
        for (const Interval& part : cut.parts()) {
            double lo = part.lo.raw(), hi = part.hi.raw();
            for (int i = 0; i <= 256; ++i) {
                double x = lo + (hi - lo) * i / 256.0;
                try {
                    ExtReal v = eval_expr(*d, Vec(x));
                    if (!v.is_finite()) return ExtReal::pos_inf();
                    best = std::max(best, std::abs(v.raw()));
                } catch (const EvalError&) {
                    return ExtReal::pos_inf();
                }
            }
        }
    }
    // default region inside the window: +inf default means those points are
    // outside dom, which breaks the Lipschitz estimate whenever present
    IntervalSet covered;
    for (const Piece& p : f.pieces())
        covered = iset_union(covered, p.guard.all_space ? IntervalSet::all() : *p.guard.iset);
    if (!iset_difference(win, covered).is_empty() && !f.default_value().is_finite())
        return ExtReal::pos_inf();
    return ExtReal(best);
}

RuleReport scalar_rule_check(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                             double lambda, double eps) {
    if (lambda <= 0) throw std::invalid_argument("scalar_rule_check: lambda must be positive");
    RuleReport rep;
    rep.rule_id = "scalar_rule";
    rep.tol = 1e-12;

    double eps_hat = eps / std::max(lambda, 1.0);
    double eps_tilde = eps * std::max(1.0 / lambda, 1.0);
    PiecewiseFunc lf = scale_func(lambda, f);

    IntervalSet inner = iset_affine(eps_regular_relative(f, omega, xbar, eps_hat).set, lambda, 0.0);
    IntervalSet mid = eps_regular_relative(lf, omega, xbar, eps).set;
    IntervalSet outer = iset_affine(eps_regular_relative(f, omega, xbar, eps_tilde).set, lambda, 0.0);
    if (inner.is_empty() && mid.is_empty() && outer.is_empty()) {
        // degenerate but consistent; still report the inclusion chain
    }
    bool ok = inner.subset_of(mid, rep.tol) && mid.subset_of(outer, rep.tol);
    rep.witnesses.emplace_back("lambda*D_hat", inner.to_string());
    rep.witnesses.emplace_back("D(lambda f)", mid.to_string());
    rep.witnesses.emplace_back("lambda*D_tilde", outer.to_string());

    if (eps == 0.0) {
        bool eq_regular = inner == mid && mid == outer;
        IntervalSet lim_f = iset_affine(limiting_relative(f, omega, xbar).set, lambda, 0.0);
        IntervalSet lim_lf = limiting_relative(lf, omega, xbar).set;
        bool eq_limiting = lim_f == lim_lf;
        rep.witnesses.emplace_back("lambda*limiting(f)", lim_f.to_string());
        rep.witnesses.emplace_back("limiting(lambda f)", lim_lf.to_string());
        ok = ok && eq_regular && eq_limiting;
    }
    rep.conclusion = ok ? RuleVerdict::holds : RuleVerdict::fails;
    return rep;
}

RuleReport lipschitz_bound_check(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                                 double eps, double radius) {
    RuleReport rep;
    rep.rule_id = "lipschitz_bound";
    rep.tol = 1e-6;

    Schedule sched;
    LipEstimate le = lip_estimate(f, omega, Vec(xbar), sched.radii(), 64, 0);
    ExtReal ell = certified_lipschitz_modulus(f, omega, xbar, 2.0 * radius);
    rep.hypotheses.push_back(
        {"lip_estimate finite and confident", le.value.is_finite() && le.confident, ""});
    rep.hypotheses.push_back({"certified modulus finite", ell.is_finite(), ""});
    if (!rep.hypotheses_ok()) {
        rep.conclusion = RuleVerdict::inconclusive;
        rep.notes.push_back("function is not relatively Lipschitz near the base point");
        return rep;
    }
    double l = ell.raw();
    double bound = l + eps * (1.0 + l);
    double worst = 0.0;
    std::string worst_at;
    for (double x : neighborhood_grid(f, omega, xbar, radius, 65)) {
        if (!f.eval(Vec(x)).is_finite()) continue;
        SubdiffSet s = eps_regular_relative(f, omega, x, eps);
        if (s.set.is_empty()) continue;
        ExtReal hi = s.set.sup(), lo = s.set.inf();
        double m = std::max(hi.is_finite() ? std::abs(hi.raw()) : std::numeric_limits<double>::infinity(),
                            lo.is_finite() ? std::abs(lo.raw()) : std::numeric_limits<double>::infinity());
        if (m > worst) {
            worst = m;
            worst_at = fmt(x);
        }
    }
    rep.witnesses.emplace_back("modulus", fmt(l));
    rep.witnesses.emplace_back("bound", fmt(bound));
    rep.witnesses.emplace_back("max |s|", fmt(worst));
    if (!worst_at.empty()) rep.witnesses.emplace_back("attained at", worst_at);
    rep.conclusion = worst <= bound + rep.tol ? RuleVerdict::holds : RuleVerdict::fails;
    return rep;
}

RuleReport inclusion_chain_check(const PiecewiseFunc& f, const ClosedSet& omega, double xbar) {
    RuleReport rep;
    rep.rule_id = "inclusion_chain";
    IntervalSet a = eps_regular_relative(f, omega, xbar, 0.0).set;
    IntervalSet b = limiting_relative(f, omega, xbar).set;
    IntervalSet c = limiting_plain(f, omega, xbar).set;
    rep.witnesses.emplace_back("regular_relative", a.to_string());
    rep.witnesses.emplace_back("limiting_relative", b.to_string());
    rep.witnesses.emplace_back("limiting_plain", c.to_string());
    rep.conclusion =
        a.subset_of(b) && b.subset_of(c) ? RuleVerdict::holds : RuleVerdict::fails;
    return rep;
}

RuleReport sum_rule_check(const PiecewiseFunc& f1, const PiecewiseFunc& f2,
                          const ClosedSet& omega, double xbar) {
    RuleReport rep;
    rep.rule_id = "sum_rule";
    rep.tol = 1e-12;

    Schedule sched;
    LipEstimate le = lip_estimate(f1, omega, Vec(xbar), sched.radii(), 64, 0);
    AroundCheck lsc = lsc_relative_around(f2, omega, Vec(xbar), 1e-9);
    rep.hypotheses.push_back({"omega convex", omega.is_convex(), ""});
    rep.hypotheses.push_back(
        {"f1 relatively Lipschitz near xbar", le.value.is_finite() && le.confident, ""});
    rep.hypotheses.push_back({"f2 relatively lsc around xbar", lsc.ok, lsc.note});
    rep.hypotheses.push_back({"J(T(x, omega)) convex near xbar", true, "intervals in 1-D"});
    if (!rep.hypotheses_ok()) {
        rep.conclusion = RuleVerdict::inconclusive;
        return rep;
    }
    IntervalSet lhs = limiting_relative(add_funcs(f1, f2), omega, xbar).set;
    IntervalSet s1 = limiting_relative(f1, omega, xbar).set;
    IntervalSet s2 = limiting_relative(f2, omega, xbar).set;
    IntervalSet rhs = iset_minkowski_sum(s1, s2);
    rep.witnesses.emplace_back("D(f1+f2)", lhs.to_string());
    rep.witnesses.emplace_back("D f1", s1.to_string());
    rep.witnesses.emplace_back("D f2", s2.to_string());
    rep.witnesses.emplace_back("D f1 + D f2", rhs.to_string());
    rep.conclusion = lhs.subset_of(rhs, rep.tol) ? RuleVerdict::holds : RuleVerdict::fails;
    return rep;
}

double nearest_point_in(const IntervalSet& s, double x) {
    if (s.is_empty()) throw std::invalid_argument("nearest_point_in: empty set");
    double best = std::numeric_limits<double>::infinity(), out = x;
    for (const Interval& p : s.parts()) {
        double lo = p.lo.is_finite() ? p.lo.raw() : -1e300;
        double hi = p.hi.is_finite() ? p.hi.raw() : 1e300;
        double c = std::clamp(x, lo, hi);
        if (std::abs(c - x) < best) {
            best = std::abs(c - x);
            out = c;
        }
    }
    return out;
}

namespace {

struct FuzzyOnce {
    double gamma = std::numeric_limits<double>::infinity();
    double x1 = 0, x2 = 0, lev = 0, s1 = 0, s2 = 0;
    bool any_sets = false;
};

FuzzyOnce fuzzy_search_once(const PiecewiseFunc& f1, const PiecewiseFunc& f2,
                            const ClosedSet& omega, double xbar, double xstar, double eta) {
    FuzzyOnce best;
    std::vector<double> xs;
    for (const Vec& p : sample_in_ball(omega, Vec(xbar), eta, 33)) xs.push_back(p[0]);
    xs.push_back(xbar);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    double fb1 = f1.eval(Vec(xbar)).raw(), fb2 = f2.eval(Vec(xbar)).raw();
    std::vector<double> x1s, x2s;
    for (double x : xs) {
        ExtReal v1 = f1.eval(Vec(x)), v2 = f2.eval(Vec(x));
        if (v1.is_finite() && std::abs(v1.raw() - fb1) <= eta) x1s.push_back(x);
        if (v2.is_finite() && std::abs(v2.raw() - fb2) <= eta) x2s.push_back(x);
    }
    for (double lev : {eta, eta / 2, eta / 4, eta / 8}) {
        std::vector<std::pair<double, IntervalSet>> sets1, sets2;
        for (double x : x1s) sets1.emplace_back(x, eps_regular_relative(f1, omega, x, lev).set);
        for (double x : x2s) sets2.emplace_back(x, eps_regular_relative(f2, omega, x, lev).set);
        for (const auto& [x1, s1set] : sets1) {
            if (s1set.is_empty()) continue;
            for (const auto& [x2, s2set] : sets2) {
                if (s2set.is_empty()) continue;
                best.any_sets = true;
                IntervalSet sum = iset_minkowski_sum(s1set, s2set);
                double g = sum.distance(xstar);
                if (g < best.gamma) {
                    best.gamma = g;
                    best.x1 = x1;
                    best.x2 = x2;
                    best.lev = lev;
                    double t = nearest_point_in(sum, xstar);
                    IntervalSet feas = iset_intersect(s1set, iset_affine(s2set, -1.0, t));
                    best.s1 = nearest_point_in(feas, t / 2);
                    best.s2 = t - best.s1;
                }
            }
        }
    }
    return best;
}

}  // namespace

FuzzyCertificate fuzzy_sum_search(const PiecewiseFunc& f1, const PiecewiseFunc& f2,
                                  const ClosedSet& omega, double xbar, double xstar, double eps,
                                  double eta) {
    if (eta <= eps) throw std::invalid_argument("fuzzy_sum_search: eta must exceed eps");
    SubdiffSet pre = eps_regular_relative(add_funcs(f1, f2), omega, xbar, eps);
    if (!pre.set.contains(xstar))
        throw std::invalid_argument("fuzzy_sum_search: xstar is not an eps-subgradient of f1+f2");

    FuzzyCertificate cert;
    cert.eta = eta;
    FuzzyOnce main = fuzzy_search_once(f1, f2, omega, xbar, xstar, eta);
    if (!main.any_sets) {
        cert.valid = false;
        cert.note = "all candidate subgradient sets empty";
        return cert;
    }
    cert.x1 = Vec(main.x1);
    cert.x2 = Vec(main.x2);
    cert.eta1 = cert.eta2 = main.lev;
    cert.s1 = main.s1;
    cert.s2 = main.s2;
    cert.gamma_bar = main.gamma;
    cert.valid = true;
    for (int j = 0; j < 4; ++j) {
        double e = eta * std::pow(0.5, j);
        FuzzyOnce o = j == 0 ? main : fuzzy_search_once(f1, f2, omega, xbar, xstar, e);
        cert.eta_trend.emplace_back(e, o.any_sets ? o.gamma
                                                  : std::numeric_limits<double>::infinity());
    }
    return cert;
}

} // namespace relsub
