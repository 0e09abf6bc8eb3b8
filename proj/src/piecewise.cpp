#include "relsub/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace relsub {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr double kProbeClip = 100.0;

// Interior probe points of a 1-D guard part for validation checks. Closed
// finite endpoints are included; open endpoints are approached but excluded.
std::vector<double> probe_points(const Interval& part) {
    double lo = part.lo.is_finite() ? part.lo.raw() : -kProbeClip;
    double hi = part.hi.is_finite() ? part.hi.raw() : kProbeClip;
    if (lo > hi) return {};
    std::vector<double> pts;
    if (lo == hi) {
        pts.push_back(lo);
        return pts;
    }
    double w = hi - lo;
    for (int i = 0; i <= 64; ++i) pts.push_back(lo + w * i / 64.0);
    for (double off : {1e-9 * w, 1e-6 * w, 1e-3 * w}) {
        pts.push_back(lo + off);
        pts.push_back(hi - off);
    }
    auto inside = [&](double x) { return part.contains(x); };
    std::vector<double> kept;
    for (double x : pts)
        if (inside(x)) kept.push_back(x);
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    return kept;
}

}  // namespace

bool GuardRegion::contains(const Vec& x) const {
    bool base;
    if (all_space)
        base = true;
    else if (iset)
        base = iset->contains(x[0]);
    else if (region)
        base = distance(*region, x) <= 1e-12;
    else
        return false;
    if (!base) return false;
    for (const ClosedSet& c : clips)
        if (distance(c, x) > 1e-12) return false;
    return true;
}

PiecewiseFunc::PiecewiseFunc(int dim, std::vector<Piece> pieces, ExtReal default_value)
    : dim_(dim), pieces_(std::move(pieces)), default_(default_value) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("PiecewiseFunc: dim must be 1..3");
    for (const Piece& p : pieces_) {
        if (!p.expr) throw std::invalid_argument("PiecewiseFunc: null expression");
        if (max_var(*p.expr) >= dim)
            throw std::invalid_argument("PiecewiseFunc: expression references var >= dim");
        if (dim == 1 && p.guard.region)
            throw std::invalid_argument("PiecewiseFunc: 1-D pieces use interval guards");
        if (dim > 1 && p.guard.iset)
            throw std::invalid_argument("PiecewiseFunc: n-D pieces use region guards");
    }
}

std::optional<std::size_t> PiecewiseFunc::piece_at(const Vec& x) const {
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        if (pieces_[i].guard.contains(x)) return i;
    return std::nullopt;
}

ExtReal PiecewiseFunc::eval(const Vec& x) const {
    auto idx = piece_at(x);
    if (!idx) return default_;
    try {
        return eval_expr(*pieces_[*idx].expr, x);
    } catch (const EvalError& e) {
        throw EvalError("piece " + std::to_string(*idx) + ": " + e.what());
    }
}

std::vector<double> PiecewiseFunc::breakpoints_1d() const {
    std::set<double> pts;
    for (const Piece& p : pieces_) {
        if (!p.guard.iset) continue;
        for (const Interval& iv : p.guard.iset->parts()) {
            if (iv.lo.is_finite()) pts.insert(iv.lo.raw());
            if (iv.hi.is_finite()) pts.insert(iv.hi.raw());
        }
    }
    return std::vector<double>(pts.begin(), pts.end());
}

namespace {

void check_piece_1d(const Piece& piece, std::size_t index) {
    const IntervalSet& guard = piece.guard.iset ? *piece.guard.iset : IntervalSet::all();
    std::vector<ExprPtr> divs, abses;
    collect_nodes(piece.expr, Expr::Kind::Div, divs);
    collect_nodes(piece.expr, Expr::Kind::Abs, abses);
    for (const Interval& part : guard.parts()) {
        std::vector<double> pts = probe_points(part);
        if (pts.empty()) continue;
        for (const ExprPtr& d : divs) {
            for (double x : pts) {
                ExtReal den = eval_expr(*d->b, Vec(x));
                if (den.raw() == 0.0)
                    throw std::invalid_argument("piece " + std::to_string(index) +
                                                ": denominator vanishes inside the guard");
            }
            // a sign change between samples also means a pole inside
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                double a = eval_expr(*d->b, Vec(pts[i])).raw();
                double b = eval_expr(*d->b, Vec(pts[i + 1])).raw();
                if (a * b < 0)
                    throw std::invalid_argument("piece " + std::to_string(index) +
                                                ": denominator changes sign inside the guard");
            }
        }
        for (const ExprPtr& ab : abses) {
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                double a = eval_expr(*ab->a, Vec(pts[i])).raw();
                double b = eval_expr(*ab->a, Vec(pts[i + 1])).raw();
                if (a * b < 0) {
                    double lo = pts[i], hi = pts[i + 1];
                    for (int it = 0; it < 200; ++it) {
                        double m = 0.5 * (lo + hi);
                        double v = eval_expr(*ab->a, Vec(m)).raw();
                        if (v == 0.0) {
                            lo = hi = m;
                            break;
                        }
                        (a * v < 0 ? hi : lo) = m;
                    }
                    throw SplitRequiredError(0.5 * (lo + hi));
                }
            }
        }
    }
}

}  // namespace

void validate(const PiecewiseFunc& f) {
    const auto& pieces = f.pieces();
    if (f.dim() == 1) {
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const IntervalSet gi = pieces[i].guard.all_space ? IntervalSet::all()
                                                             : *pieces[i].guard.iset;
            for (std::size_t j = i + 1; j < pieces.size(); ++j) {
                const IntervalSet gj = pieces[j].guard.all_space ? IntervalSet::all()
                                                                 : *pieces[j].guard.iset;
                if (!iset_intersect(gi, gj).is_empty())
                    throw std::invalid_argument("guards of pieces " + std::to_string(i) + " and " +
                                                std::to_string(j) + " overlap");
            }
            check_piece_1d(pieces[i], i);
        }
        return;
    }
    // n-D: sampled disjointness over a probe box
    const int n = 13;
    std::array<int, 3> idx{0, 0, 0};
    std::vector<Vec> probes;
    std::function<void(int)> rec = [&](int d) {
        if (d == f.dim()) {
            Vec x = Vec::zero(f.dim());
            for (int k = 0; k < f.dim(); ++k) x[k] = -10.0 + 20.0 * idx[k] / (n - 1);
            probes.push_back(x);
            return;
        }
        for (idx[d] = 0; idx[d] < n; ++idx[d]) rec(d + 1);
    };
    rec(0);
    for (const Vec& x : probes) {
        int hits = 0;
        for (const Piece& p : pieces)
            if (p.guard.contains(x)) ++hits;
        if (hits > 1) throw std::invalid_argument("guards overlap (sampled) in n-D function");
    }
}

PiecewiseFunc restrict_func(const PiecewiseFunc& f, const ClosedSet& omega) {
    if (omega.dim() != f.dim()) throw std::invalid_argument("restrict: dimension mismatch");
    if (f.dim() == 1) {
        IntervalSet dom = omega.as_interval_set();
        std::vector<Piece> pieces;
        IntervalSet covered;
        for (const Piece& p : f.pieces()) {
            IntervalSet g = p.guard.all_space ? IntervalSet::all() : *p.guard.iset;
            IntervalSet cut = iset_intersect(g, dom);
            covered = iset_union(covered, cut);
            if (!cut.is_empty()) pieces.push_back(Piece{GuardRegion::interval(cut), p.expr});
        }
        IntervalSet rest = iset_difference(dom, covered);
        if (!rest.is_empty())
            pieces.push_back(Piece{GuardRegion::interval(rest), e_const(f.default_value())});
        return PiecewiseFunc(1, std::move(pieces), ExtReal::pos_inf());
    }
    // n-D: clip every piece by omega and capture the default on omega as a
    // final guard (regions outside every original guard).
    std::vector<Piece> pieces;
    for (const Piece& p : f.pieces()) {
        Piece q = p;
        q.guard.clips.push_back(omega);
        pieces.push_back(std::move(q));
    }
    return PiecewiseFunc(f.dim(), std::move(pieces), ExtReal::pos_inf());
}

PiecewiseFunc scale_func(double lambda, const PiecewiseFunc& f) {
    if (lambda <= 0) throw std::invalid_argument("scale_func: lambda must be positive");
    std::vector<Piece> pieces;
    for (const Piece& p : f.pieces())
        pieces.push_back(Piece{p.guard, e_mul(e_const(ExtReal(lambda)), p.expr)});
    return PiecewiseFunc(f.dim(), std::move(pieces), ext_mul(ExtReal(lambda), f.default_value()));
}

PiecewiseFunc shift_func(const PiecewiseFunc& f, double c) {
    std::vector<Piece> pieces;
    for (const Piece& p : f.pieces())
        pieces.push_back(Piece{p.guard, e_add(p.expr, e_const(ExtReal(c)))});
    return PiecewiseFunc(f.dim(), std::move(pieces), ext_add(f.default_value(), ExtReal(c)));
}

namespace {

IntervalSet guard_iset(const Piece& p) {
    return p.guard.all_space ? IntervalSet::all() : *p.guard.iset;
}

}  // namespace

PiecewiseFunc add_funcs(const PiecewiseFunc& f, const PiecewiseFunc& g) {
    if (f.dim() != 1 || g.dim() != 1)
        throw std::invalid_argument("add_funcs: exact sums are 1-D only");
    std::set<double> cuts;
    for (const PiecewiseFunc* h : {&f, &g})
        for (double b : h->breakpoints_1d()) cuts.insert(b);
    std::vector<double> v(cuts.begin(), cuts.end());
    struct Atom {
        Interval iv;
        double sample;
    };
    std::vector<Atom> atoms;
    if (v.empty()) {
        atoms.push_back({Interval::all(), 0.0});
    } else {
        atoms.push_back({Interval::make(ExtReal::neg_inf(), false, ExtReal(v[0]), false), v[0] - 1.0});
        for (std::size_t i = 0; i < v.size(); ++i) {
            atoms.push_back({Interval::point(v[i]), v[i]});
            if (i + 1 < v.size())
                atoms.push_back({Interval::make(ExtReal(v[i]), false, ExtReal(v[i + 1]), false),
                                 0.5 * (v[i] + v[i + 1])});
        }
        atoms.push_back({Interval::make(ExtReal(v.back()), false, ExtReal::pos_inf(), false),
                         v.back() + 1.0});
    }
    ExtReal def = ext_add(f.default_value(), g.default_value());
    // group consecutive atoms owned by the same piece pair
    std::vector<Piece> pieces;
    std::vector<Interval> run;
    int run_pf = -2, run_pg = -2;
    auto flush = [&]() {
        if (run.empty()) return;
        if (run_pf >= -1 || run_pg >= -1) {
            ExprPtr ef = run_pf >= 0 ? f.pieces()[run_pf].expr : e_const(f.default_value());
            ExprPtr eg = run_pg >= 0 ? g.pieces()[run_pg].expr : e_const(g.default_value());
            if (!(run_pf < 0 && run_pg < 0))
                pieces.push_back(
                    Piece{GuardRegion::interval(IntervalSet::canonicalize(run)), e_add(ef, eg)});
        }
        run.clear();
    };
    for (const Atom& a : atoms) {
        auto pf = f.piece_at(Vec(a.sample)), pg = g.piece_at(Vec(a.sample));
        int ipf = pf ? static_cast<int>(*pf) : -1;
        int ipg = pg ? static_cast<int>(*pg) : -1;
        if (ipf != run_pf || ipg != run_pg) {
            flush();
            run_pf = ipf;
            run_pg = ipg;
        }
        if (!(ipf == -1 && ipg == -1)) run.push_back(a.iv);
    }
    flush();
    return PiecewiseFunc(1, std::move(pieces), def);
}

namespace {

IntervalSet pullback_closedset_line(const ClosedSet& s, const Vec& p, const Vec& d) {
    if (const auto* iv = std::get_if<IntervalSet>(&s.v())) {
        if (d[0] == 0.0) throw std::invalid_argument("pullback: degenerate direction");
        return iset_affine(*iv, 1.0 / d[0], -p[0] / d[0]);
    }
    if (const auto* bx = std::get_if<BoxSet>(&s.v())) {
        IntervalSet acc = IntervalSet::all();
        for (int i = 0; i < s.dim(); ++i) {
            if (d[i] == 0.0) {
                if (p[i] < bx->lo[i] || p[i] > bx->hi[i]) return IntervalSet::empty();
                continue;
            }
            double t1 = (bx->lo[i] - p[i]) / d[i], t2 = (bx->hi[i] - p[i]) / d[i];
            acc = iset_intersect(acc, IntervalSet(Interval::closed(std::min(t1, t2),
                                                                   std::max(t1, t2))));
        }
        return acc;
    }
    if (const auto* poly = std::get_if<PolytopeSet>(&s.v())) {
        IntervalSet acc = IntervalSet::all();
        for (std::size_t i = 0; i < poly->normals.size(); ++i) {
            double a = dot(poly->normals[i], d);
            double b = poly->offsets[i] - dot(poly->normals[i], p);
            if (a == 0.0) {
                if (b < 0) return IntervalSet::empty();
                continue;
            }
            acc = iset_intersect(acc, a > 0 ? IntervalSet(Interval::ray_le(b / a))
                                            : IntervalSet(Interval::ray_ge(b / a)));
        }
        return acc;
    }
    if (const auto* u = std::get_if<ClosedSet::Union>(&s.v())) {
        IntervalSet acc;
        for (const auto& m : *u) acc = iset_union(acc, pullback_closedset_line(m, p, d));
        return acc;
    }
    throw std::invalid_argument("pullback: unsupported guard variant on a line");
}

}  // namespace

PiecewiseFunc pullback_line(const PiecewiseFunc& f, const Vec& p, const Vec& d) {
    std::vector<ExprPtr> subs;
    for (int i = 0; i < f.dim(); ++i)
        subs.push_back(e_add(e_const(ExtReal(p[i])), e_mul(e_const(ExtReal(d[i])), e_var(0))));
    std::vector<Piece> pieces;
    for (const Piece& pc : f.pieces()) {
        IntervalSet g;
        if (pc.guard.all_space)
            g = IntervalSet::all();
        else if (pc.guard.iset)
            g = iset_affine(*pc.guard.iset, 1.0 / d[0], -p[0] / d[0]);
        else
            g = pullback_closedset_line(*pc.guard.region, p, d);
        for (const ClosedSet& c : pc.guard.clips)
            g = iset_intersect(g, pullback_closedset_line(c, p, d));
        if (g.is_empty()) continue;
        pieces.push_back(Piece{GuardRegion::interval(g), substitute(pc.expr, subs)});
    }
    return PiecewiseFunc(1, std::move(pieces), f.default_value());
}

ExprPtr piece_derivative(const PiecewiseFunc& f, std::size_t piece_index) {
    if (f.dim() != 1) throw std::invalid_argument("piece_derivative: 1-D only");
    const Piece& p = f.pieces().at(piece_index);
    check_piece_1d(p, piece_index);  // throws SplitRequiredError when abs needs a split
    IntervalSet guard = guard_iset(p);
    AbsSignResolver sign_of = [&](const Expr& arg) {
        for (const Interval& part : guard.parts())
            for (double x : probe_points(part)) {
                double v = eval_expr(arg, Vec(x)).raw();
                if (v > 0) return 1;
                if (v < 0) return -1;
            }
        return 1;  // argument identically zero on the piece
    };
    return derivative(p.expr, 0, sign_of);
}

std::vector<Vec> sample_in_ball(const ClosedSet& s, const Vec& center, double r, int per_dim) {
    std::vector<Vec> out;
    if (const auto* iv = std::get_if<IntervalSet>(&s.v())) {
        for (const Interval& part : iv->parts()) {
            double lo = std::max(part.lo.is_finite() ? part.lo.raw() : center[0] - r,
                                 center[0] - r);
            double hi = std::min(part.hi.is_finite() ? part.hi.raw() : center[0] + r,
                                 center[0] + r);
            if (lo > hi) continue;
            if (lo == hi) {
                out.push_back(Vec(lo));
                continue;
            }
            for (int i = 0; i < per_dim; ++i)
                out.push_back(Vec(lo + (hi - lo) * i / (per_dim - 1)));
        }
        return out;
    }
    if (const auto* seg = std::get_if<SegmentSet>(&s.v())) {
        int n = 2 * per_dim + 1;
        for (int i = 0; i < n; ++i) {
            Vec x = seg->a + (double(i) / (n - 1)) * (seg->b - seg->a);
            if (norm(x - center) <= r) out.push_back(x);
        }
        Vec pr = project(s, center);
        if (norm(pr - center) <= r) out.push_back(pr);
        return out;
    }
    // box / polytope / union: product grid over the ball's bounding box,
    // filtered by membership
    if (const auto* u = std::get_if<ClosedSet::Union>(&s.v())) {
        for (const auto& m : *u) {
            auto sub = sample_in_ball(m, center, r, per_dim);
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    }
    const int dim = s.dim();
    std::array<int, 3> idx{0, 0, 0};
    std::function<void(int)> rec = [&](int d) {
        if (d == dim) {
            Vec x = Vec::zero(dim);
            for (int k = 0; k < dim; ++k)
                x[k] = center[k] - r + 2.0 * r * idx[k] / (per_dim - 1);
            if (distance(s, x) <= 1e-12 && norm(x - center) <= r) out.push_back(x);
            return;
        }
        for (idx[d] = 0; idx[d] < per_dim; ++idx[d]) rec(d + 1);
    };
    rec(0);
    return out;
}

LipEstimate lip_estimate(const PiecewiseFunc& f, const ClosedSet& omega, const Vec& xbar,
                         const std::vector<double>& radii, int grid_density, std::uint64_t seed) {
    if (!contains(omega, xbar, 1e-9)) throw std::domain_error("lip_estimate: xbar not in omega");
    ExtReal fbar = f.eval(xbar);
    if (!fbar.is_finite()) throw std::domain_error("lip_estimate: f(xbar) is not finite");

    LipEstimate est;
    est.radii = radii;
    std::vector<double> finite_maxq;
    ExtReal best = ExtReal::pos_inf();
    bool any_radius = false;
    for (double r : radii) {
        std::vector<Vec> pts = sample_in_ball(omega, xbar, r, grid_density);
        pts.push_back(xbar);
        std::vector<ExtReal> vals;
        vals.reserve(pts.size());
        for (const Vec& x : pts) vals.push_back(f.eval(x));
        const std::size_t n = pts.size();
        if (n < 2) continue;
        any_radius = true;
        ExtReal maxq = ExtReal::neg_inf();
        auto consider = [&](std::size_t i, std::size_t j) {
            double dx = norm(pts[i] - pts[j]);
            if (dx == 0.0) return;
            if (!vals[i].is_finite() || !vals[j].is_finite()) {
                maxq = ExtReal::pos_inf();
                return;
            }
            double q = std::abs(vals[i].raw() - vals[j].raw()) / dx;
            if (ExtReal(q) > maxq) maxq = ExtReal(q);
        };
        if (n * n <= 16384) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) consider(i, j);
        } else {
            std::uint64_t state = seed ^ 0xa5a5a5a5ULL;
            for (int k = 0; k < 16384; ++k) {
                std::size_t i = splitmix64(state) % n;
                std::size_t j = splitmix64(state) % n;
                if (i != j) consider(i, j);
            }
        }
        if (maxq.is_neg_inf()) continue;
        if (maxq < best) best = maxq;
        if (maxq.is_finite()) finite_maxq.push_back(maxq.raw());
    }
    bool diverging = false;
    if (finite_maxq.size() >= 5) {
        std::size_t n = finite_maxq.size();
        bool increasing = true;
        for (std::size_t i = n - 4; i < n - 1; ++i)
            increasing = increasing && finite_maxq[i + 1] > finite_maxq[i];
        double lo = *std::min_element(finite_maxq.begin(), finite_maxq.end());
        diverging = increasing && finite_maxq.back() >= 4.0 * std::max(lo, 1e-12);
    }
    if (!any_radius) {
        est.value = ExtReal(0.0);  // xbar isolated in omega: every modulus works
        est.confident = true;
        return est;
    }
    if (diverging || !best.is_finite()) {
        est.value = ExtReal::pos_inf();
        est.confident = false;
    } else {
        est.value = best;
        est.confident = true;
    }
    return est;
}

Trit check_lsc_relative(const PiecewiseFunc& f, const ClosedSet& omega, const Vec& xbar,
                        double tol) {
    if (!contains(omega, xbar, 1e-9)) throw std::domain_error("check_lsc_relative: xbar not in omega");
    ExtReal fbar = f.eval(xbar);
    if (fbar.is_pos_inf()) throw std::domain_error("check_lsc_relative: xbar not in dom f");
    if (fbar.is_neg_inf()) return Trit::in(0.0);
    std::vector<ExtReal> infs;
    for (int j = 0; j <= 16; ++j) {
        double r = std::pow(0.5, j);
        ExtReal lo = ExtReal::pos_inf();
        for (const Vec& x : sample_in_ball(omega, xbar, r, 64)) {
            if (norm(x - xbar) < 1e-15) continue;
            ExtReal v = f.eval(x);
            if (v < lo) lo = v;
        }
        infs.push_back(lo);
    }
    ExtReal liminf = ExtReal::neg_inf();
    for (std::size_t i = infs.size() >= 3 ? infs.size() - 3 : 0; i < infs.size(); ++i)
        if (infs[i] > liminf) liminf = infs[i];
    if (liminf >= ExtReal(fbar.raw() - tol)) {
        double m = liminf.is_finite() ? liminf.raw() - fbar.raw() : 1.0;
        return Trit::in(m);
    }
    if (liminf < ExtReal(fbar.raw() - 3 * tol)) {
        double m = liminf.is_finite() ? fbar.raw() - liminf.raw() : 1.0;
        return Trit::out(m);
    }
    return Trit::unknown("liminf within tolerance band");
}

AroundCheck lsc_relative_around(const PiecewiseFunc& f, const ClosedSet& omega, const Vec& xbar,
                                double tol) {
    AroundCheck res;
    for (double r : {1e-1, 1e-2, 1e-3}) {
        bool ok = true;
        std::string note;
        for (const Vec& y : sample_in_ball(omega, xbar, r, 33)) {
            ExtReal v = f.eval(y);
            if (v.is_pos_inf()) {
                ok = false;
                note = "point of omega near xbar lies outside dom f";
                break;
            }
            if (v.is_neg_inf()) continue;
            if (!check_lsc_relative(f, omega, y, tol).is_in()) {
                ok = false;
                note = "relative lsc fails at a nearby point";
                break;
            }
        }
        if (ok) {
            res.ok = true;
            res.radius = r;
            return res;
        }
        res.note = note;
    }
    res.ok = false;
    if (res.note.empty()) res.note = "no neighborhood passed the sampled lsc check";
    return res;
}

} // namespace relsub
