#include "relsub/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace relsub {

namespace {

std::string fmt(double v) { return to_string(ExtReal(v)); }

constexpr double kGapTol = 1e-9;

}  // namespace

OptimalityVerdict fermat_check(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                               const std::vector<double>& eps_list) {
    OptimalityVerdict v;
    v.condition = OptimalityCondition::fermat_limiting;
    double worst_gap = 0.0;
    std::string worst_where;
    bool any_estimated = false;
    for (double eps : eps_list) {
        SubdiffSet s = eps_regular_relative(f, omega, xbar, eps);
        any_estimated = any_estimated || s.exactness == Exactness::estimated;
        double gap = s.set.distance(0.0);
        v.witnesses.emplace_back("eps=" + fmt(eps), s.set.to_string());
        if (gap > worst_gap) {
            worst_gap = gap;
            worst_where = "eps=" + fmt(eps);
        }
    }
    SubdiffSet lim = limiting_relative(f, omega, xbar);
    any_estimated = any_estimated || lim.exactness == Exactness::estimated;
    double gap = lim.set.distance(0.0);
    v.witnesses.emplace_back("limiting", lim.set.to_string());
    if (gap > worst_gap) {
        worst_gap = gap;
        worst_where = "limiting";
    }
    v.gap = worst_gap;
    if (worst_gap == 0.0) {
        v.status = OptimalityStatus::holds;
    } else if (worst_gap > 3 * kGapTol) {
        v.status = OptimalityStatus::violated;
        v.non_optimality_certificate = true;
        v.notes.push_back("0 is separated from the subdifferential at " + worst_where +
                          " by " + fmt(worst_gap));
    } else {
        v.status = any_estimated ? OptimalityStatus::inconclusive : OptimalityStatus::violated;
    }
    return v;
}

OptimalityVerdict sum_optimality_check(const PiecewiseFunc& f1, const PiecewiseFunc& f2,
                                       const ClosedSet& c, double xbar) {
    OptimalityVerdict v;
    v.condition = OptimalityCondition::sum_exact;
    Schedule sched;
    LipEstimate le = lip_estimate(f1, c, Vec(xbar), sched.radii(), 64, 0);
    AroundCheck lsc = lsc_relative_around(f2, c, Vec(xbar), 1e-9);
    v.hypotheses.push_back({"C convex", c.is_convex(), ""});
    v.hypotheses.push_back(
        {"f1 relatively Lipschitz near xbar", le.value.is_finite() && le.confident, ""});
    v.hypotheses.push_back({"f2 relatively lsc around xbar", lsc.ok, lsc.note});
    for (const auto& h : v.hypotheses)
        if (!h.passed) {
            v.status = OptimalityStatus::inconclusive;
            v.notes.push_back("hypothesis failed: " + h.name +
                              (h.note.empty() ? "" : " (" + h.note + ")"));
            return v;
        }
    IntervalSet s1 = limiting_relative(f1, c, xbar).set;
    IntervalSet s2 = limiting_relative(f2, c, xbar).set;
    IntervalSet sum = iset_minkowski_sum(s1, s2);
    v.witnesses.emplace_back("D f1", s1.to_string());
    v.witnesses.emplace_back("D f2", s2.to_string());
    v.witnesses.emplace_back("D f1 + D f2", sum.to_string());
    v.gap = sum.distance(0.0);
    if (v.gap == 0.0) {
        v.status = OptimalityStatus::holds;
    } else if (v.gap > 3 * kGapTol) {
        v.status = OptimalityStatus::violated;
        v.non_optimality_certificate = true;
    } else {
        v.status = OptimalityStatus::inconclusive;
    }
    return v;
}

std::vector<LocalMin> local_min_scan(const PiecewiseFunc& f, const ClosedSet& omega,
                                     int grid_density) {
    if (f.dim() != 1) throw std::invalid_argument("local_min_scan: 1-D only");
    IntervalSet dom = omega.as_interval_set();
    std::vector<LocalMin> out;
    for (const Interval& part : dom.parts()) {
        double lo = part.lo.is_finite() ? part.lo.raw() : -1e3;
        double hi = part.hi.is_finite() ? part.hi.raw() : 1e3;
        int n = std::max(grid_density, 8);
        if (lo == hi) n = 1;
        std::vector<double> xs(n), vs(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
            ExtReal v = f.eval(Vec(xs[i]));
            vs[i] = v.is_finite() ? v.raw()
                                  : (v.is_pos_inf() ? std::numeric_limits<double>::infinity()
                                                    : -std::numeric_limits<double>::infinity());
        }
        for (int i = 0; i < n; ++i) {
            if (!std::isfinite(vs[i])) continue;
            double left = i > 0 ? vs[i - 1] : std::numeric_limits<double>::infinity();
            double right = i + 1 < n ? vs[i + 1] : std::numeric_limits<double>::infinity();
            if (vs[i] > left || vs[i] > right) continue;
            // golden-section refinement inside the bracket
            double a = i > 0 ? xs[i - 1] : xs[i];
            double b = i + 1 < n ? xs[i + 1] : xs[i];
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            auto val = [&](double t) {
                ExtReal v = f.eval(Vec(t));
                return v.is_finite() ? v.raw() : std::numeric_limits<double>::infinity();
            };
            double v1 = val(x1), v2 = val(x2);
            for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
                if (v1 <= v2) {
                    b = x2;
                    x2 = x1;
                    v2 = v1;
                    x1 = b - gr * (b - a);
                    v1 = val(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    v1 = v2;
                    x2 = a + gr * (b - a);
                    v2 = val(x2);
                }
            }
            double xm = 0.5 * (a + b);
            double candidates[3] = {xm, xs[i], std::clamp(xs[i], a, b)};
            double bx = candidates[0], bv = val(candidates[0]);
            for (double cnd : candidates)
                if (val(cnd) < bv) {
                    bv = val(cnd);
                    bx = cnd;
                }
            LocalMin m;
            m.x = bx;
            m.value = bv;
            m.basin = (n == 1) ? 0.0 : (hi - lo) / (n - 1);
            bool dup = false;
            for (const LocalMin& e : out)
                if (std::abs(e.x - m.x) <= 1e-9 * (1.0 + std::abs(m.x))) dup = true;
            if (!dup) out.push_back(m);
        }
    }
    std::sort(out.begin(), out.end(), [](const LocalMin& a, const LocalMin& b) { return a.x < b.x; });
    return out;
}

FuzzyCertificate approx_optimality_search(const PiecewiseFunc& f1, const PiecewiseFunc& f2,
                                          const ClosedSet& c, double xbar, double eta) {
    PiecewiseFunc fsum = add_funcs(f1, f2);
    // xbar must be a grid-certified local minimizer of f1+f2 on C
    bool certified = false;
    for (const LocalMin& m : local_min_scan(fsum, c, 512))
        if (std::abs(m.x - xbar) <= std::max(2.0 * m.basin, 1e-9)) certified = true;
    if (!certified)
        throw std::domain_error("approx_optimality_search: xbar is not a grid-local minimizer");

    ExtReal ell = certified_lipschitz_modulus(f1, c, xbar, 2.0 * eta);
    double l = ell.is_finite() ? ell.raw() : 0.0;
    double eta_cap = 4.0 * eta * (l + 1.0);

    std::vector<double> xs;
    for (const Vec& p : sample_in_ball(c, Vec(xbar), eta, 33)) xs.push_back(p[0]);
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

    FuzzyCertificate cert;
    cert.eta = eta;
    cert.gamma_bar = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 6; ++j) {
        double lev = eta_cap * std::pow(0.5, j);
        for (double x1 : x1s) {
            IntervalSet s1 = eps_regular_relative(f1, c, x1, lev).set;
            if (s1.is_empty()) continue;
            for (double x2 : x2s) {
                IntervalSet s2 = eps_regular_relative(f2, c, x2, lev).set;
                if (s2.is_empty()) continue;
                IntervalSet sum = iset_minkowski_sum(s1, s2);
                double g = sum.distance(0.0);
                if (g < cert.gamma_bar) {
                    cert.gamma_bar = g;
                    cert.x1 = Vec(x1);
                    cert.x2 = Vec(x2);
                    cert.eta1 = cert.eta2 = lev;
                    double t = nearest_point_in(sum, 0.0);
                    IntervalSet feas = iset_intersect(s1, iset_affine(s2, -1.0, t));
                    cert.s1 = nearest_point_in(feas, t / 2);
                    cert.s2 = t - cert.s1;
                }
            }
        }
        if (cert.gamma_bar == 0.0) break;  // exact decomposition found
    }
    cert.valid = cert.gamma_bar <= 1e-6;
    if (!cert.valid) cert.note = "no certificate with residual below tolerance";
    return cert;
}

MeanValueWitness mean_value_witness(const PiecewiseFunc& f, const Vec& a, const Vec& b,
                                    std::vector<std::array<double, 3>>* trace) {
    MeanValueWitness w;
    Vec d = b - a;
    double len = norm(d);
    if (len == 0.0) throw std::invalid_argument("mean_value_witness: a == b");
    Vec u = (1.0 / len) * d;
    ExtReal fa = f.eval(a), fb = f.eval(b);
    if (!fa.is_finite() || !fb.is_finite())
        throw std::domain_error("mean_value_witness: f must be finite at a and b");
    w.direction = u;
    w.delta_f = fb.raw() - fa.raw();
    double slope = w.delta_f / len;

    PiecewiseFunc g = pullback_line(f, a, u);
    auto phi = [&](double s) {
        ExtReal v = g.eval(Vec(s));
        if (!v.is_finite())
            return v.is_pos_inf() ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
        return v.raw() + slope * (len - s);
    };
    if (trace) {
        for (int i = 0; i <= 512; ++i) {
            double s = len * i / 512.0;
            ExtReal v = g.eval(Vec(s));
            trace->push_back({s, v.is_finite() ? v.raw() : std::numeric_limits<double>::infinity(),
                              phi(s)});
        }
    }

    const int n = 4097;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> sgrid(n);
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        sgrid[i] = len * i / (n - 1);
        vals[i] = phi(sgrid[i]);
        best_val = std::min(best_val, vals[i]);
    }
    // refine every grid-local minimizer, then pick the smallest-arclength
    // global minimizer in [0, len)
    double c_s = 0.0, c_val = std::numeric_limits<double>::infinity();
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 0; i < n; ++i) {
        double left = i > 0 ? vals[i - 1] : std::numeric_limits<double>::infinity();
        double right = i + 1 < n ? vals[i + 1] : std::numeric_limits<double>::infinity();
        if (vals[i] > left || vals[i] > right) continue;
        if (vals[i] > best_val + 1e-9 * (1.0 + std::abs(best_val))) continue;
        double lo = i > 0 ? sgrid[i - 1] : sgrid[i];
        double hi = i + 1 < n ? sgrid[i + 1] : sgrid[i];
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double v1 = phi(x1), v2 = phi(x2);
        for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
            if (v1 <= v2) {
                hi = x2;
                x2 = x1;
                v2 = v1;
                x1 = hi - gr * (hi - lo);
                v1 = phi(x1);
            } else {
                lo = x1;
                x1 = x2;
                v1 = v2;
                x2 = lo + gr * (hi - lo);
                v2 = phi(x2);
            }
        }
        double sm = 0.5 * (lo + hi);
        double vm = phi(sm);
        if (vm < c_val - 1e-12 || (vm <= c_val + 1e-12 && sm < c_s)) {
            c_val = vm;
            c_s = sm;
        }
    }
    // phi(0) = phi(len): when only the far endpoint was found, the near one
    // is a minimizer as well and is preferred (c must lie in [a, b))
    if (c_s >= len - 1e-12) {
        c_s = 0.0;
        c_val = phi(0.0);
    }
    w.arc_c = c_s;
    w.c = a + c_s * u;
    w.phi_min = c_val;

    SubdiffSet ds = segment_subdiff(f, a, b, w.c, SubdiffKind::limiting_relative);
    if (ds.set.is_empty()) {
        w.valid = false;
        w.note = "empty relative limiting subdifferential at the minimizer";
        return w;
    }
    ExtReal sig = ds.set.sup();
    w.xstar = sig.is_finite() ? sig.raw() : std::numeric_limits<double>::infinity();
    w.pairing = w.xstar * len;
    w.ineq_residual = w.pairing - w.delta_f;
    w.scaled_residual = w.xstar * (len - c_s) - ((len - c_s) / len) * w.delta_f;
    w.equality_case = c_s > 1e-12;
    if (w.equality_case) w.equality_residual = std::abs(w.pairing - w.delta_f);
    w.valid = true;
    return w;
}

Trit convexity_check(const PiecewiseFunc& f, const Vec& a, const Vec& b, int grid, double tol) {
    Vec d = b - a;
    double len = norm(d);
    if (len == 0.0) throw std::invalid_argument("convexity_check: a == b");
    Vec u = (1.0 / len) * d;
    PiecewiseFunc g = pullback_line(f, a, u);
    int n = std::max(grid, 5);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double si = len * i / (n - 1);
        ExtReal vi = g.eval(Vec(si));
        for (int j = i + 1; j < n; ++j) {
            double sj = len * j / (n - 1);
            ExtReal vj = g.eval(Vec(sj));
            for (int l = 1; l <= 7; ++l) {
                double lam = l / 8.0;
                ExtReal mix = g.eval(Vec(lam * si + (1 - lam) * sj));
                ExtReal rhs = ext_add(ext_mul(ExtReal(lam), vi), ext_mul(ExtReal(1 - lam), vj));
                // violation = mix - rhs
                if (rhs.is_pos_inf()) continue;
                if (mix.is_pos_inf()) return Trit::out(std::numeric_limits<double>::infinity());
                if (mix.is_neg_inf()) continue;
                double viol = mix.raw() - (rhs.is_neg_inf() ? -std::numeric_limits<double>::infinity()
                                                            : rhs.raw());
                worst = std::max(worst, viol);
            }
        }
    }
    if (worst <= tol) return Trit::in(tol - worst);
    if (worst > 3 * tol) return Trit::out(worst - 3 * tol);
    return Trit::unknown("violation within tolerance band");
}

Trit monotonicity_check(SubdiffKind kind, const PiecewiseFunc& f, const Vec& a, const Vec& b,
                        int grid, double tol) {
    Vec d = b - a;
    double len = norm(d);
    if (len == 0.0) throw std::invalid_argument("monotonicity_check: a == b");
    Vec u = (1.0 / len) * d;
    PiecewiseFunc g = pullback_line(f, a, u);
    ClosedSet omega_s = ClosedSet::interval1d(IntervalSet(Interval::closed(0.0, len)));

    int n = std::max(grid, 5);
    std::vector<double> ss;
    for (int i = 0; i < n; ++i) ss.push_back(len * i / (n - 1));
    for (double bp : g.breakpoints_1d())
        if (bp > 0 && bp < len) ss.push_back(bp);
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());

    std::vector<std::pair<double, IntervalSet>> values;
    for (double s : ss) {
        if (!g.eval(Vec(s)).is_finite()) continue;
        SubdiffSet ds = kind == SubdiffKind::limiting_plain
                            ? limiting_plain(g, omega_s, s)
                            : limiting_relative(g, omega_s, s);
        if (!ds.set.is_empty()) values.emplace_back(s, ds.set);
    }
    if (values.empty()) return Trit::unknown("all subdifferential values empty");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            ExtReal sup_u = values[i].second.sup();
            ExtReal inf_v = values[j].second.inf();
            double viol;
            if (sup_u.is_pos_inf() || inf_v.is_neg_inf())
                viol = std::numeric_limits<double>::infinity();
            else
                viol = sup_u.raw() - inf_v.raw();
            worst = std::max(worst, viol);
        }
    }
    if (worst <= tol) return Trit::in(tol - worst);
    if (worst > 3 * tol) return Trit::out(worst - 3 * tol);
    return Trit::unknown("violation within tolerance band");
}

RuleReport equivalence_report(const PiecewiseFunc& f, const Vec& a, const Vec& b) {
    RuleReport rep;
    rep.rule_id = "convexity_monotonicity_equivalence";
    rep.tol = 1e-9;
    Vec d = b - a;
    double len = norm(d);
    Vec u = (1.0 / len) * d;
    PiecewiseFunc g = pullback_line(f, a, u);
    ClosedSet omega_s = ClosedSet::interval1d(IntervalSet(Interval::closed(0.0, len)));

    // proper + relatively continuous on [a,b], verified by sampling
    bool continuous = true;
    double prev = 0.0;
    bool have_prev = false;
    for (int i = 0; i <= 256; ++i) {
        double s = len * i / 256.0;
        ExtReal v = g.eval(Vec(s));
        if (!v.is_finite()) {
            continuous = false;
            break;
        }
        if (have_prev && std::abs(v.raw() - prev) > 64.0 * len / 256.0 *
                             (1.0 + std::abs(prev) + std::abs(v.raw()))) {
            continuous = false;  // crude jump detector
            break;
        }
        prev = v.raw();
        have_prev = true;
    }
    rep.hypotheses.push_back({"f proper and relatively continuous on [a,b]", continuous, ""});
    if (!continuous) {
        rep.conclusion = RuleVerdict::inconclusive;
        return rep;
    }

    Trit cvx = convexity_check(f, a, b, 65, rep.tol);
    Trit mono_plain = monotonicity_check(SubdiffKind::limiting_plain, f, a, b, 65, rep.tol);
    Trit mono_rel = monotonicity_check(SubdiffKind::limiting_relative, f, a, b, 65, rep.tol);

    Schedule sched;
    bool lipschitz_all = true;
    for (int i = 1; i < 8; ++i) {
        double s = len * i / 8.0;
        LipEstimate le = lip_estimate(g, omega_s, Vec(s), sched.radii(), 64, 0);
        if (!le.value.is_finite() || !le.confident) lipschitz_all = false;
    }

    if (cvx.is_unknown() || mono_plain.is_unknown() || mono_rel.is_unknown()) {
        rep.conclusion = RuleVerdict::inconclusive;
        rep.notes.push_back("a verdict fell inside the tolerance band");
        return rep;
    }
    bool v1 = cvx.is_in();
    bool v2 = mono_plain.is_in();
    bool v3 = mono_plain.is_in() && lipschitz_all;
    bool v4 = mono_rel.is_in() && lipschitz_all;
    rep.witnesses.emplace_back("convex", v1 ? "in" : "out");
    rep.witnesses.emplace_back("monotone plain limiting map", v2 ? "in" : "out");
    rep.witnesses.emplace_back("monotone plain + relatively Lipschitz", v3 ? "in" : "out");
    rep.witnesses.emplace_back("monotone relative + relatively Lipschitz", v4 ? "in" : "out");
    bool agree = v1 == v2 && v2 == v3 && v3 == v4;
    // convex + relatively continuous must imply relatively Lipschitz
    bool lip_consequence = !v1 || lipschitz_all;
    rep.hypotheses.push_back({"convexity implies relative Lipschitz continuity", lip_consequence, ""});
    rep.notes.push_back(
        "monotonicity tested in the classical set-valued sense: sup F(u) <= inf F(v) for u < v");
    rep.conclusion = agree && lip_consequence ? RuleVerdict::holds : RuleVerdict::fails;
    return rep;
}

} // namespace relsub
