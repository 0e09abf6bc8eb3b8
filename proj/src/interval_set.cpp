#include "relsub/interval_set.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace relsub {

std::string to_string(ExtReal a) {
    if (a.is_pos_inf()) return "inf";
    if (a.is_neg_inf()) return "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), a.raw());
    return std::string(buf, res.ptr);
}

Interval Interval::make(ExtReal lo, bool lo_closed, ExtReal hi, bool hi_closed) {
    if (!(lo <= hi)) throw std::invalid_argument("Interval: lo > hi");
    if (lo == hi && (!lo_closed || !hi_closed || !lo.is_finite()))
        throw std::invalid_argument("Interval: degenerate interval must be a closed finite point");
    Interval iv;
    iv.lo = lo;
    iv.hi = hi;
    iv.lo_closed = lo.is_finite() ? lo_closed : false;
    iv.hi_closed = hi.is_finite() ? hi_closed : false;
    return iv;
}

Interval Interval::closed(double a, double b) {
    return make(ExtReal(a), true, ExtReal(b), true);
}

Interval Interval::all() {
    return make(ExtReal::neg_inf(), false, ExtReal::pos_inf(), false);
}

Interval Interval::ray_ge(double a, bool closed) {
    return make(ExtReal(a), closed, ExtReal::pos_inf(), false);
}

Interval Interval::ray_le(double a, bool closed) {
    return make(ExtReal::neg_inf(), false, ExtReal(a), closed);
}

bool Interval::contains(double x) const {
    ExtReal v(x);
    if (v < lo || (v == lo && !lo_closed)) return false;
    if (v > hi || (v == hi && !hi_closed)) return false;
    return true;
}

namespace {

// True when the union of cur and nxt is a single interval (overlap or touching
// endpoints), assuming cur.lo <= nxt.lo in the sweep order.
bool merges(const Interval& cur, const Interval& nxt) {
    if (nxt.lo < cur.hi) return true;
    if (nxt.lo == cur.hi) return nxt.lo_closed || cur.hi_closed;
    return false;
}

}  // namespace

IntervalSet IntervalSet::canonicalize(std::vector<Interval> parts) {
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        if (a.lo_closed != b.lo_closed) return a.lo_closed;  // closed endpoint first
        return a.hi < b.hi;
    });
    IntervalSet out;
    for (const Interval& iv : parts) {
        if (out.parts_.empty() || !merges(out.parts_.back(), iv)) {
            out.parts_.push_back(iv);
            continue;
        }
        Interval& cur = out.parts_.back();
        if (iv.hi > cur.hi) {
            cur.hi = iv.hi;
            cur.hi_closed = iv.hi_closed;
        } else if (iv.hi == cur.hi) {
            cur.hi_closed = cur.hi_closed || iv.hi_closed;
        }
    }
    return out;
}

bool IntervalSet::contains(double x) const {
    for (const Interval& iv : parts_)
        if (iv.contains(x)) return true;
    return false;
}

double IntervalSet::distance(double x) const {
    if (parts_.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (const Interval& iv : parts_) {
        double d;
        if (iv.contains(x)) return 0.0;
        if (ExtReal(x) < iv.lo)
            d = iv.lo.raw() - x;
        else if (ExtReal(x) > iv.hi)
            d = x - iv.hi.raw();
        else
            d = 0.0;  // x equals an open endpoint
        best = std::min(best, d);
    }
    return best;
}

bool IntervalSet::operator==(const IntervalSet& o) const {
    if (parts_.size() != o.parts_.size()) return false;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        const Interval &a = parts_[i], &b = o.parts_[i];
        if (a.lo != b.lo || a.hi != b.hi || a.lo_closed != b.lo_closed ||
            a.hi_closed != b.hi_closed)
            return false;
    }
    return true;
}

bool IntervalSet::subset_of(const IntervalSet& o, double slack) const {
    if (slack <= 0.0) return iset_difference(*this, o).is_empty();
    std::vector<Interval> inflated;
    inflated.reserve(o.parts_.size());
    for (const Interval& iv : o.parts_) {
        ExtReal lo = iv.lo.is_finite() ? ExtReal(iv.lo.raw() - slack) : iv.lo;
        ExtReal hi = iv.hi.is_finite() ? ExtReal(iv.hi.raw() + slack) : iv.hi;
        inflated.push_back(Interval::make(lo, true, hi, true));
    }
    return iset_difference(*this, IntervalSet::canonicalize(std::move(inflated))).is_empty();
}

ExtReal IntervalSet::inf() const {
    return parts_.empty() ? ExtReal::pos_inf() : parts_.front().lo;
}

ExtReal IntervalSet::sup() const {
    return parts_.empty() ? ExtReal::neg_inf() : parts_.back().hi;
}

std::string IntervalSet::to_string() const {
    if (parts_.empty()) return "{}";
    std::ostringstream os;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        const Interval& iv = parts_[i];
        if (i) os << " u ";
        if (iv.is_singleton()) {
            os << "{" << relsub::to_string(iv.lo) << "}";
        } else {
            os << (iv.lo_closed ? "[" : "(") << relsub::to_string(iv.lo) << ", "
               << relsub::to_string(iv.hi) << (iv.hi_closed ? "]" : ")");
        }
    }
    return os.str();
}

IntervalSet iset_union(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> parts = a.parts();
    parts.insert(parts.end(), b.parts().begin(), b.parts().end());
    return IntervalSet::canonicalize(std::move(parts));
}

IntervalSet iset_intersect(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> parts;
    for (const Interval& x : a.parts()) {
        for (const Interval& y : b.parts()) {
            ExtReal lo;
            bool lo_closed;
            if (x.lo > y.lo) {
                lo = x.lo;
                lo_closed = x.lo_closed;
            } else if (y.lo > x.lo) {
                lo = y.lo;
                lo_closed = y.lo_closed;
            } else {
                lo = x.lo;
                lo_closed = x.lo_closed && y.lo_closed;
            }
            ExtReal hi;
            bool hi_closed;
            if (x.hi < y.hi) {
                hi = x.hi;
                hi_closed = x.hi_closed;
            } else if (y.hi < x.hi) {
                hi = y.hi;
                hi_closed = y.hi_closed;
            } else {
                hi = x.hi;
                hi_closed = x.hi_closed && y.hi_closed;
            }
            if (lo > hi) continue;
            if (lo == hi && !(lo_closed && hi_closed && lo.is_finite())) continue;
            parts.push_back(Interval::make(lo, lo_closed, hi, hi_closed));
        }
    }
    return IntervalSet::canonicalize(std::move(parts));
}

IntervalSet iset_complement(const IntervalSet& a) {
    if (a.is_empty()) return IntervalSet::all();
    std::vector<Interval> parts;
    const auto& ps = a.parts();
    if (!ps.front().lo.is_neg_inf())
        parts.push_back(Interval::make(ExtReal::neg_inf(), false, ps.front().lo, !ps.front().lo_closed));
    for (std::size_t i = 0; i + 1 < ps.size(); ++i)
        parts.push_back(Interval::make(ps[i].hi, !ps[i].hi_closed, ps[i + 1].lo, !ps[i + 1].lo_closed));
    if (!ps.back().hi.is_pos_inf())
        parts.push_back(Interval::make(ps.back().hi, !ps.back().hi_closed, ExtReal::pos_inf(), false));
    return IntervalSet::canonicalize(std::move(parts));
}

IntervalSet iset_difference(const IntervalSet& a, const IntervalSet& b) {
    return iset_intersect(a, iset_complement(b));
}

IntervalSet iset_affine(const IntervalSet& a, double lambda, double c) {
    if (lambda == 0.0) throw std::invalid_argument("iset_affine: lambda must be nonzero");
    std::vector<Interval> parts;
    for (const Interval& iv : a.parts()) {
        ExtReal lo = ext_add(ext_mul(ExtReal(lambda), iv.lo), ExtReal(c));
        ExtReal hi = ext_add(ext_mul(ExtReal(lambda), iv.hi), ExtReal(c));
        if (lambda > 0)
            parts.push_back(Interval::make(lo, iv.lo_closed, hi, iv.hi_closed));
        else
            parts.push_back(Interval::make(hi, iv.hi_closed, lo, iv.lo_closed));
    }
    return IntervalSet::canonicalize(std::move(parts));
}

IntervalSet iset_minkowski_sum(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> parts;
    for (const Interval& x : a.parts()) {
        for (const Interval& y : b.parts()) {
            ExtReal lo = ext_add(x.lo, y.lo);  // lo operands are never +inf
            ExtReal hi = ext_add(x.hi, y.hi);
            parts.push_back(Interval::make(lo, x.lo_closed && y.lo_closed,
                                           hi, x.hi_closed && y.hi_closed));
        }
    }
    return IntervalSet::canonicalize(std::move(parts));
}

namespace {

IntervalSet clip(const IntervalSet& a, double cap) {
    return iset_intersect(a, IntervalSet(Interval::closed(-cap, cap)));
}

double directed_hausdorff(const IntervalSet& a, const IntervalSet& b) {
    if (a.is_empty()) return 0.0;
    if (b.is_empty()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    auto consider = [&](double x) { worst = std::max(worst, b.distance(x)); };
    for (const Interval& iv : a.parts()) {
        consider(iv.lo.raw());
        consider(iv.hi.raw());
        // interior maxima sit at midpoints of gaps of b
        for (std::size_t i = 0; i + 1 < b.parts().size(); ++i) {
            double m = 0.5 * (b.parts()[i].hi.raw() + b.parts()[i + 1].lo.raw());
            if (iv.contains(m)) consider(m);
        }
    }
    return worst;
}

}  // namespace

double iset_hausdorff_clipped(const IntervalSet& a, const IntervalSet& b, double cap) {
    IntervalSet ca = clip(a, cap), cb = clip(b, cap);
    if (ca.is_empty() && cb.is_empty()) return 0.0;
    return std::max(directed_hausdorff(ca, cb), directed_hausdorff(cb, ca));
}

namespace {

struct EndpointSeq {
    std::vector<int> idx;
    std::vector<ExtReal> val;
};

// Extrapolated limit of one endpoint sequence, or nullopt when the sequence
// has not settled within tol.
std::optional<ExtReal> endpoint_limit(const EndpointSeq& s, double tol, std::string& why) {
    const std::size_t n = s.val.size();
    if (n < 2) {
        why = "too few samples";
        return std::nullopt;
    }
    bool all_pinf = true, all_ninf = true, any_inf = false;
    for (ExtReal v : s.val) {
        all_pinf = all_pinf && v.is_pos_inf();
        all_ninf = all_ninf && v.is_neg_inf();
        any_inf = any_inf || !v.is_finite();
    }
    if (all_pinf) return ExtReal::pos_inf();
    if (all_ninf) return ExtReal::neg_inf();
    if (any_inf) {
        why = "mixed finite/infinite endpoints";
        return std::nullopt;
    }
    auto e = [&](std::size_t i) { return s.val[i].raw(); };
    double spread = 0.0;
    for (std::size_t i = n >= 3 ? n - 3 : 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) spread = std::max(spread, std::abs(e(i) - e(j)));
    if (spread <= tol) return s.val[n - 1];
    if (n < 3) {
        why = "unsettled pair";
        return std::nullopt;
    }
    double d_last = e(n - 1) - e(n - 2);
    double d_prev = e(n - 2) - e(n - 3);
    if (!(std::abs(d_last) <= 0.9 * std::abs(d_prev) + tol)) {
        why = "oscillation beyond tolerance";
        return std::nullopt;
    }
    // Model e_k = L + c/k on the two most recent index pairs.
    auto richardson = [&](std::size_t i) {
        double k1 = s.idx[i - 1], k2 = s.idx[i];
        return (k2 * e(i) - k1 * e(i - 1)) / (k2 - k1);
    };
    double r_b = richardson(n - 1), r_a = richardson(n - 2);
    if (std::abs(r_a - r_b) <= tol) return ExtReal(r_b);
    // Aitken delta-squared for geometric decay.
    auto aitken = [&](std::size_t i) -> std::optional<double> {
        double denom = (e(i) - e(i - 1)) - (e(i - 1) - e(i - 2));
        if (denom == 0.0) return std::nullopt;
        double a = e(i) - (e(i) - e(i - 1)) * (e(i) - e(i - 1)) / denom;
        return a;
    };
    auto a_b = aitken(n - 1);
    if (a_b && n >= 4) {
        auto a_a = aitken(n - 2);
        if (a_a && std::abs(*a_a - *a_b) <= tol) return ExtReal(*a_b);
    } else if (a_b && std::abs(*a_b - e(n - 1)) <= std::abs(d_last)) {
        return ExtReal(*a_b);
    }
    why = "endpoint sequence did not converge";
    return std::nullopt;
}

}  // namespace

OuterLimitResult iset_outer_limit(const std::vector<std::pair<int, IntervalSet>>& seq,
                                  double tol_lim) {
    OuterLimitResult out;
    if (seq.empty()) {
        out.diagnostic = "empty sequence";
        return out;
    }
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (seq[i].first <= seq[i - 1].first)
            throw std::invalid_argument("iset_outer_limit: indices must be strictly increasing");

    const std::size_t m = seq.size();
    const std::size_t tail_len = std::max<std::size_t>(std::min<std::size_t>(m, 3), m / 2);
    const std::size_t tail_begin = m - tail_len;

    // Group tail entries by part count; each stabilized part-count pattern is a
    // candidate subsequence whose endpoint limits join the outer limit.
    std::vector<std::size_t> counts;
    for (std::size_t i = tail_begin; i < m; ++i) {
        std::size_t c = seq[i].second.size();
        if (std::find(counts.begin(), counts.end(), c) == counts.end()) counts.push_back(c);
    }

    std::vector<Interval> limit_parts;
    for (std::size_t c : counts) {
        std::vector<std::size_t> members;
        for (std::size_t i = tail_begin; i < m; ++i)
            if (seq[i].second.size() == c) members.push_back(i);
        if (c == 0) continue;  // empty sets contribute nothing
        if (members.size() < 2 && counts.size() > 1) {
            out.diagnostic = "part count did not stabilize (" + std::to_string(c) +
                             " parts seen once in tail)";
            return out;
        }
        for (std::size_t p = 0; p < c; ++p) {
            EndpointSeq lo_seq, hi_seq;
            for (std::size_t i : members) {
                lo_seq.idx.push_back(seq[i].first);
                hi_seq.idx.push_back(seq[i].first);
                lo_seq.val.push_back(seq[i].second.parts()[p].lo);
                hi_seq.val.push_back(seq[i].second.parts()[p].hi);
            }
            std::string why;
            auto lo = endpoint_limit(lo_seq, tol_lim, why);
            if (!lo) {
                out.diagnostic = "part " + std::to_string(p) + " lo: " + why;
                return out;
            }
            auto hi = endpoint_limit(hi_seq, tol_lim, why);
            if (!hi) {
                out.diagnostic = "part " + std::to_string(p) + " hi: " + why;
                return out;
            }
            ExtReal l = *lo, h = *hi;
            if (l > h) {
                // extrapolation can cross by noise when the part shrinks to a point
                if (l.is_finite() && h.is_finite() && l.raw() - h.raw() <= 8 * tol_lim) {
                    double mid = 0.5 * (l.raw() + h.raw());
                    l = ExtReal(mid);
                    h = l;
                } else {
                    out.diagnostic = "part " + std::to_string(p) + " collapsed inconsistently";
                    return out;
                }
            }
            if (l == h && !l.is_finite()) {
                out.diagnostic = "part " + std::to_string(p) + " escaped to infinity";
                return out;
            }
            // outer limits are closed sets
            limit_parts.push_back(Interval::make(l, l.is_finite(), h, h.is_finite()));
        }
    }
    out.set = IntervalSet::canonicalize(std::move(limit_parts));
    out.converged = true;
    return out;
}

} // namespace relsub
