#include "relsub/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace relsub {

namespace {

constexpr double kActiveTol = 1e-9;

// Solve the n x n system M y = r by Gaussian elimination with partial
// pivoting; returns false when M is (numerically) singular.
bool solve_small(int n, double M[3][3], double r[3], double y[3]) {
    int piv[3] = {0, 1, 2};
    for (int c = 0; c < n; ++c) {
        int best = c;
        for (int i = c + 1; i < n; ++i)
            if (std::abs(M[piv[i]][c]) > std::abs(M[piv[best]][c])) best = i;
        std::swap(piv[c], piv[best]);
        double p = M[piv[c]][c];
        if (std::abs(p) < 1e-12) return false;
        for (int i = c + 1; i < n; ++i) {
            double f = M[piv[i]][c] / p;
            for (int j = c; j < n; ++j) M[piv[i]][j] -= f * M[piv[c]][j];
            r[piv[i]] -= f * r[piv[c]];
        }
    }
    for (int c = n - 1; c >= 0; --c) {
        double s = r[piv[c]];
        for (int j = c + 1; j < n; ++j) s -= M[piv[c]][j] * y[j];
        y[c] = s / M[piv[c]][c];
    }
    return true;
}

// Nearest point of {x : <n_i, x> <= c_i} to q via enumeration of active row
// subsets (dimension <= 3 keeps this exhaustive).
Vec project_halfspaces(const std::vector<Vec>& normals, const std::vector<double>& offsets,
                       const Vec& q) {
    const int d = q.dim;
    const int m = static_cast<int>(normals.size());
    auto feasible = [&](const Vec& y) {
        for (int i = 0; i < m; ++i)
            if (dot(normals[i], y) > offsets[i] + 1e-9 * (1.0 + std::abs(offsets[i]))) return false;
        return true;
    };
    double best = std::numeric_limits<double>::infinity();
    Vec best_y = q;
    bool found = false;
    std::vector<int> subset;
    auto try_subset = [&](const std::vector<int>& S) {
        const int k = static_cast<int>(S.size());
        Vec y = q;
        if (k > 0) {
            // y = q - A^T lambda with A y = c  =>  (A A^T) lambda = A q - c
            double M[3][3] = {{0}}, r[3] = {0}, lam[3] = {0};
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) M[i][j] = dot(normals[S[i]], normals[S[j]]);
                r[i] = dot(normals[S[i]], q) - offsets[S[i]];
            }
            if (!solve_small(k, M, r, lam)) return;
            for (int i = 0; i < k; ++i) y = y - (lam[i] * normals[S[i]]);
        }
        if (!feasible(y)) return;
        double dist2 = dot(y - q, y - q);
        if (dist2 < best) {
            best = dist2;
            best_y = y;
            found = true;
        }
    };
    // all subsets of size 0..d
    try_subset({});
    for (int i = 0; i < m; ++i) {
        try_subset({i});
        if (d >= 2)
            for (int j = i + 1; j < m; ++j) {
                try_subset({i, j});
                if (d >= 3)
                    for (int l = j + 1; l < m; ++l) try_subset({i, j, l});
            }
    }
    if (!found) throw std::invalid_argument("project: empty polytope");
    return best_y;
}

double part_distance_1d(const IntervalSet& s, double x) { return s.distance(x); }

Vec nearest_point(const ClosedSet& s, const Vec& x);

double dist_impl(const ClosedSet& s, const Vec& x) {
    if (const auto* u = std::get_if<ClosedSet::Union>(&s.v())) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& m : *u) best = std::min(best, dist_impl(m, x));
        return best;
    }
    if (const auto* iv = std::get_if<IntervalSet>(&s.v())) return part_distance_1d(*iv, x[0]);
    return norm(x - nearest_point(s, x));
}

Vec nearest_point(const ClosedSet& s, const Vec& x) {
    if (const auto* iv = std::get_if<IntervalSet>(&s.v())) {
        double best = std::numeric_limits<double>::infinity();
        double bx = x[0];
        for (const Interval& p : iv->parts()) {
            double cl = std::clamp(x[0], p.lo.is_finite() ? p.lo.raw() : -1e300,
                                   p.hi.is_finite() ? p.hi.raw() : 1e300);
            if (std::abs(cl - x[0]) < best) {
                best = std::abs(cl - x[0]);
                bx = cl;
            }
        }
        if (iv->is_empty()) throw std::invalid_argument("project: empty set");
        return Vec(bx);
    }
    if (const auto* seg = std::get_if<SegmentSet>(&s.v())) {
        Vec u = seg->b - seg->a;
        double t = std::clamp(dot(x - seg->a, u) / dot(u, u), 0.0, 1.0);
        return seg->a + t * u;
    }
    if (const auto* bx = std::get_if<BoxSet>(&s.v())) {
        Vec y = x;
        for (int i = 0; i < x.dim; ++i) y[i] = std::clamp(x[i], bx->lo[i], bx->hi[i]);
        return y;
    }
    if (const auto* p = std::get_if<PolytopeSet>(&s.v()))
        return project_halfspaces(p->normals, p->offsets, x);
    // finite union: nearest over members (first minimum wins deterministically)
    const auto& u = std::get<ClosedSet::Union>(s.v());
    double best = std::numeric_limits<double>::infinity();
    Vec by = x;
    for (const auto& m : u) {
        Vec y = nearest_point(m, x);
        double d = norm(y - x);
        if (d < best) {
            best = d;
            by = y;
        }
    }
    return by;
}

std::vector<Vec> orthogonal_complement(const Vec& u) {
    // unit vectors spanning the complement of span{u} in R^dim
    std::vector<Vec> basis;
    if (u.dim == 1) return basis;
    Vec un = normalized(u);
    // pick the coordinate axis least aligned with u, Gram-Schmidt the rest
    std::vector<Vec> cand;
    for (int i = 0; i < u.dim; ++i) {
        Vec e = Vec::zero(u.dim);
        e[i] = 1.0;
        cand.push_back(e);
    }
    for (const Vec& e : cand) {
        Vec w = e - dot(e, un) * un;
        for (const Vec& b : basis) w = w - dot(w, b) * b;
        if (norm(w) > 1e-9) basis.push_back(normalized(w));
        if (static_cast<int>(basis.size()) == u.dim - 1) break;
    }
    return basis;
}

}  // namespace

ClosedSet ClosedSet::interval1d(IntervalSet parts) {
    if (parts.is_empty()) throw std::invalid_argument("ClosedSet: empty interval union");
    for (const Interval& p : parts.parts())
        if ((p.lo.is_finite() && !p.lo_closed) || (p.hi.is_finite() && !p.hi_closed))
            throw std::invalid_argument("ClosedSet: Interval1D parts must be closed");
    return ClosedSet(1, Variant(std::move(parts)));
}

ClosedSet ClosedSet::segment(Vec a, Vec b) {
    if (a.dim != b.dim) throw std::invalid_argument("segment: dimension mismatch");
    if (norm(b - a) == 0.0) throw std::invalid_argument("segment: endpoints coincide");
    return ClosedSet(a.dim, Variant(SegmentSet{a, b}));
}

ClosedSet ClosedSet::box(Vec lo, Vec hi) {
    if (lo.dim != hi.dim) throw std::invalid_argument("box: dimension mismatch");
    for (int i = 0; i < lo.dim; ++i)
        if (lo[i] > hi[i]) throw std::invalid_argument("box: lo > hi");
    return ClosedSet(lo.dim, Variant(BoxSet{lo, hi}));
}

ClosedSet ClosedSet::polytope(std::vector<Vec> normals, std::vector<double> offsets,
                              bool unbounded) {
    if (normals.empty() || normals.size() != offsets.size())
        throw std::invalid_argument("polytope: bad rows");
    int d = normals.front().dim;
    for (const Vec& n : normals)
        if (n.dim != d) throw std::invalid_argument("polytope: row dimension mismatch");
    return ClosedSet(d, Variant(PolytopeSet{std::move(normals), std::move(offsets), unbounded}));
}

ClosedSet ClosedSet::finite_union(std::vector<ClosedSet> members) {
    if (members.empty()) throw std::invalid_argument("finite_union: no members");
    int d = members.front().dim();
    for (const auto& m : members) {
        if (m.dim() != d) throw std::invalid_argument("finite_union: dimension mismatch");
        if (m.is_union()) throw std::invalid_argument("finite_union: members must be convex pieces");
    }
    return ClosedSet(d, Variant(std::move(members)));
}

bool ClosedSet::is_convex() const {
    if (const auto* iv = std::get_if<IntervalSet>(v_.get())) return iv->size() == 1;
    if (const auto* u = std::get_if<Union>(v_.get()))
        return u->size() == 1 && (*u)[0].is_convex();
    return true;
}

IntervalSet ClosedSet::as_interval_set() const {
    if (dim_ != 1) throw std::invalid_argument("as_interval_set: set is not 1-D");
    if (const auto* iv = std::get_if<IntervalSet>(v_.get())) return *iv;
    if (const auto* seg = std::get_if<SegmentSet>(v_.get()))
        return IntervalSet(Interval::closed(std::min(seg->a[0], seg->b[0]),
                                            std::max(seg->a[0], seg->b[0])));
    if (const auto* bx = std::get_if<BoxSet>(v_.get()))
        return IntervalSet(Interval::closed(bx->lo[0], bx->hi[0]));
    if (const auto* p = std::get_if<PolytopeSet>(v_.get())) {
        // rows a*x <= c in 1-D are rays
        IntervalSet acc = IntervalSet::all();
        for (std::size_t i = 0; i < p->normals.size(); ++i) {
            double a = p->normals[i][0], c = p->offsets[i];
            if (a == 0.0) {
                if (c < 0) return IntervalSet::empty();
                continue;
            }
            acc = iset_intersect(acc, a > 0 ? IntervalSet(Interval::ray_le(c / a))
                                            : IntervalSet(Interval::ray_ge(c / a)));
        }
        return acc;
    }
    IntervalSet acc;
    for (const auto& m : std::get<Union>(*v_)) acc = iset_union(acc, m.as_interval_set());
    return acc;
}

std::string ClosedSet::describe() const {
    if (const auto* iv = std::get_if<IntervalSet>(v_.get())) return iv->to_string();
    if (std::get_if<SegmentSet>(v_.get())) return "segment";
    if (std::get_if<BoxSet>(v_.get())) return "box";
    if (std::get_if<PolytopeSet>(v_.get())) return "polytope";
    return "union";
}

bool ConeRep::contains(const Vec& v, double tol) const {
    if (dim == 1) return line.distance(v[0]) <= tol;
    for (const auto& rows : cones) {
        bool ok = true;
        for (const Vec& n : rows)
            if (dot(n, v) > tol) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

bool contains(const ClosedSet& s, const Vec& x, double tol) {
    if (x.dim != s.dim()) throw std::invalid_argument("contains: dimension mismatch");
    return dist_impl(s, x) <= tol;
}

double distance(const ClosedSet& s, const Vec& x) { return dist_impl(s, x); }

Vec project(const ClosedSet& s, const Vec& x) {
    if (s.is_union()) throw std::invalid_argument("project: set must be convex");
    if (const auto* iv = std::get_if<IntervalSet>(&s.v()))
        if (iv->size() != 1) throw std::invalid_argument("project: set must be convex");
    return nearest_point(s, x);
}

namespace {

IntervalSet cone_1d(bool left_accessible, bool right_accessible) {
    if (left_accessible && right_accessible) return IntervalSet::all();
    if (right_accessible) return IntervalSet(Interval::ray_ge(0.0));
    if (left_accessible) return IntervalSet(Interval::ray_le(0.0));
    return IntervalSet::point(0.0);
}

std::vector<Vec> segment_cone_rows(const SegmentSet& seg, double t) {
    Vec u = seg.b - seg.a;
    std::vector<Vec> rows;
    for (const Vec& n : orthogonal_complement(u)) {
        rows.push_back(n);
        rows.push_back(-1.0 * n);
    }
    if (t <= kActiveTol) rows.push_back(-1.0 * normalized(u));           // ray toward b
    else if (t >= 1.0 - kActiveTol) rows.push_back(normalized(u));       // ray toward a... sign below
    return rows;
}

}  // namespace

ConeRep tangent_cone(const ClosedSet& s, const Vec& xbar) {
    if (!contains(s, xbar, 1e-9)) throw std::domain_error("tangent_cone: point not in set");
    ConeRep cone;
    cone.dim = s.dim();
    if (const auto* iv = std::get_if<IntervalSet>(&s.v())) {
        for (const Interval& p : iv->parts()) {
            if (!p.contains(xbar[0])) continue;
            bool right = ExtReal(xbar[0]) < p.hi;
            bool left = ExtReal(xbar[0]) > p.lo;
            cone.line = cone_1d(left, right);
            return cone;
        }
        throw std::domain_error("tangent_cone: point not in set");
    }
    if (const auto* seg = std::get_if<SegmentSet>(&s.v())) {
        Vec u = seg->b - seg->a;
        double t = dot(xbar - seg->a, u) / dot(u, u);
        cone.cones.push_back(segment_cone_rows(*seg, t));
        return cone;
    }
    if (const auto* bx = std::get_if<BoxSet>(&s.v())) {
        std::vector<Vec> rows;
        for (int i = 0; i < s.dim(); ++i) {
            double scale = 1.0 + std::abs(bx->lo[i]) + std::abs(bx->hi[i]);
            if (std::abs(xbar[i] - bx->lo[i]) <= kActiveTol * scale) {
                Vec n = Vec::zero(s.dim());
                n[i] = -1.0;
                rows.push_back(n);
            }
            if (std::abs(xbar[i] - bx->hi[i]) <= kActiveTol * scale) {
                Vec n = Vec::zero(s.dim());
                n[i] = 1.0;
                rows.push_back(n);
            }
        }
        cone.cones.push_back(std::move(rows));
        return cone;
    }
    if (const auto* p = std::get_if<PolytopeSet>(&s.v())) {
        std::vector<Vec> rows;
        for (std::size_t i = 0; i < p->normals.size(); ++i) {
            double scale = 1.0 + std::abs(p->offsets[i]);
            if (std::abs(dot(p->normals[i], xbar) - p->offsets[i]) <= kActiveTol * scale)
                rows.push_back(p->normals[i]);
        }
        cone.cones.push_back(std::move(rows));
        return cone;
    }
    const auto& u = std::get<ClosedSet::Union>(s.v());
    bool any = false;
    for (const auto& m : u) {
        if (!contains(m, xbar, 1e-9)) continue;
        any = true;
        ConeRep mc = tangent_cone(m, xbar);
        if (cone.dim == 1)
            cone.line = iset_union(cone.line, mc.line);
        else
            for (auto& rows : mc.cones) cone.cones.push_back(std::move(rows));
    }
    if (!any) throw std::domain_error("tangent_cone: point not in set");
    return cone;
}

Vec project_onto_cone(const std::vector<Vec>& normals, const Vec& v, int dim) {
    if (normals.empty()) return v;
    std::vector<double> zeros(normals.size(), 0.0);
    return project_halfspaces(normals, zeros, v);
}

Trit eps_normal_contains(const ClosedSet& s, const Vec& xbar, const Vec& xstar, double eps,
                         double tol) {
    if (eps < 0) throw std::invalid_argument("eps_normal_contains: eps must be >= 0");
    if (!s.is_convex()) throw std::invalid_argument("eps_normal_contains: set must be convex");
    ConeRep t = tangent_cone(s, xbar);
    double p;
    if (t.dim == 1) {
        // projection of a scalar onto one of R, [0,inf), (-inf,0], {0}
        double v = xstar[0];
        double proj = v;
        if (v > 0 && !t.line.right_unbounded()) proj = 0.0;
        if (v < 0 && !t.line.left_unbounded()) proj = 0.0;
        p = std::abs(proj);
    } else {
        p = norm(project_onto_cone(t.cones.front(), xstar, t.dim));
    }
    double margin = p - eps;
    if (margin <= tol) return Trit::in(-margin);
    if (margin > 3 * tol) return Trit::out(margin);
    return Trit::unknown("margin within tolerance band");
}

} // namespace relsub
