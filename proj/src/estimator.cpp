#include "relsub/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "relsub/parallel.hpp"

namespace relsub {

std::vector<double> Schedule::radii() const {
    std::vector<double> rs;
    double r = r0;
    for (int j = 0; j < steps && r > 1e-9; ++j) {
        rs.push_back(r);
        r *= rho;
    }
    return rs;
}

namespace {

double median_of_tail(std::vector<double> vals, std::size_t k) {
    if (vals.empty()) return -std::numeric_limits<double>::infinity();
    std::size_t n = std::min(k, vals.size());
    std::vector<double> tail(vals.end() - n, vals.end());
    std::sort(tail.begin(), tail.end());
    return tail[tail.size() / 2];
}

}  // namespace

EpiSampleTable collect_epi_samples_1d(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                                      const Schedule& sched) {
    ExtReal fb = f.eval(Vec(xbar));
    if (!fb.is_finite()) throw std::domain_error("estimator: f(xbar) is not finite");
    double fbar = fb.raw();
    EpiSampleTable table;
    for (double r : sched.radii()) {
        std::vector<Vec> pts = sample_in_ball(omega, Vec(xbar), r, sched.grid_density);
        pts.push_back(Vec(xbar));
        std::vector<std::pair<double, double>> rows;
        for (const Vec& p : pts) {
            double x = p[0];
            ExtReal v = f.eval(p);
            if (v.is_pos_inf()) continue;  // no epigraph point over x
            double dx = x - xbar;
            auto push = [&](double w) {
                double dw = w - fbar;
                double n = std::hypot(dx, dw);
                if (n == 0.0 || n > r) return;
                rows.emplace_back(dx / n, dw / n);
            };
            if (v.is_finite()) {
                for (double off : sched.epi_offsets) push(v.raw() + off);
            } else {
                // f = -inf: the epigraph holds every height over x
                for (double off : sched.epi_offsets) {
                    push(fbar + off);
                    push(fbar - off);
                }
            }
        }
        table.per_radius.push_back(std::move(rows));
    }
    return table;
}

std::vector<double> epi_quotient_kernel(const EpiSampleTable& table,
                                        const std::vector<double>& candidates, bool serial) {
    auto one = [&table](std::size_t ci, double s) {
        (void)ci;
        std::vector<double> maxima;
        for (const auto& rows : table.per_radius) {
            if (rows.empty()) continue;
            double m = -std::numeric_limits<double>::infinity();
            for (const auto& [a, b] : rows) m = std::max(m, s * a - b);
            maxima.push_back(m);
        }
        return median_of_tail(std::move(maxima), 3);
    };
    if (serial)
        return indexed_map_serial<double>(candidates.size(),
                                          [&](std::size_t i) { return one(i, candidates[i]); });
    return indexed_map<double>(candidates.size(),
                               [&](std::size_t i) { return one(i, candidates[i]); });
}

namespace {

bool table_has_samples(const EpiSampleTable& t) {
    for (const auto& rows : t.per_radius)
        if (!rows.empty()) return true;
    return false;
}

}  // namespace

double quotient_limsup_epi(const PiecewiseFunc& f, const ClosedSet& omega, const Vec& xbar,
                           const Vec& xstar, const Schedule& sched) {
    if (!contains(omega, xbar, 1e-9)) throw std::domain_error("estimator: xbar not in omega");
    if (f.dim() == 1) {
        EpiSampleTable table = collect_epi_samples_1d(f, omega, xbar[0], sched);
        if (!table_has_samples(table))
            throw EstimationError("isolated epigraph point",
                                  "no admissible epigraph samples at any radius");
        return epi_quotient_kernel(table, {xstar[0]}, false)[0];
    }
    ExtReal fb = f.eval(xbar);
    if (!fb.is_finite()) throw std::domain_error("estimator: f(xbar) is not finite");
    double fbar = fb.raw();
    std::vector<double> maxima;
    for (double r : sched.radii()) {
        std::vector<Vec> pts = sample_in_ball(omega, xbar, r, sched.grid_density);
        pts.push_back(xbar);
        double m = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (const Vec& p : pts) {
            ExtReal v = f.eval(p);
            if (v.is_pos_inf()) continue;
            Vec dx = p - xbar;
            auto consider = [&](double w) {
                double dw = w - fbar;
                double n = std::hypot(norm(dx), dw);
                if (n == 0.0 || n > r) return;
                any = true;
                m = std::max(m, (dot(xstar, dx) - dw) / n);
            };
            if (v.is_finite()) {
                for (double off : sched.epi_offsets) consider(v.raw() + off);
            } else {
                for (double off : sched.epi_offsets) {
                    consider(fbar + off);
                    consider(fbar - off);
                }
            }
        }
        if (any) maxima.push_back(m);
    }
    if (maxima.empty())
        throw EstimationError("isolated epigraph point",
                              "no admissible epigraph samples at any radius");
    return median_of_tail(std::move(maxima), 3);
}

Trit tangent_member(const ClosedSet& s, const Vec& xbar, const Vec& v, const Schedule& sched,
                    double tol) {
    if (norm(v) == 0.0) return Trit::in(tol);
    std::vector<double> q;
    for (double t : sched.radii()) q.push_back(distance(s, xbar + t * v) / t);
    double med = median_of_tail(q, 3);
    if (med <= tol) return Trit::in(tol - med);
    bool stable = true;
    for (std::size_t i = q.size() >= 3 ? q.size() - 3 : 0; i + 1 < q.size(); ++i)
        stable = stable && std::abs(q[i + 1] - q[i]) <= 0.25 * std::abs(q[i]) + tol;
    if (med > 3 * tol && stable) return Trit::out(med - 3 * tol);
    return Trit::unknown("tangent quotient between tolerance bands");
}

Trit member_eps_regular(const PiecewiseFunc& f, const ClosedSet& omega, const Vec& xbar,
                        const Vec& xstar, double eps, const Schedule& sched, double tol) {
    if (eps < 0) throw std::invalid_argument("member_eps_regular: eps must be >= 0");
    double q = quotient_limsup_epi(f, omega, xbar, xstar, sched);
    Trit tan = tangent_member(omega, xbar, xstar, sched, tol);
    bool q_in = q <= eps + tol;
    bool q_out = q > eps + 3 * tol;
    if (q_in && tan.is_in()) return Trit::in(std::min(eps + tol - q, tan.margin));
    if (q_out) return Trit::out(q - eps - 3 * tol);
    if (tan.is_out()) return Trit::out(tan.margin);
    return Trit::unknown("verdict within tolerance band");
}

namespace {

struct Predicate1D {
    const EpiSampleTable* table;
    const ClosedSet* omega;
    double xbar, eps, tol;
    const Schedule* sched;

    double quotient(double s) const {
        return epi_quotient_kernel(*table, {s}, true)[0];
    }
    bool is_in(double s) const {
        if (quotient(s) > eps + tol) return false;
        return tangent_member(*omega, Vec(xbar), Vec(s), *sched, tol).is_in();
    }
};

}  // namespace

SubdiffSet reconstruct_1d(const PiecewiseFunc& f, const ClosedSet& omega, double xbar, double eps,
                          const Schedule& sched, double tol, std::vector<CandidateSample>* csv) {
    if (f.dim() != 1) throw std::invalid_argument("reconstruct_1d: function must be 1-D");
    if (!contains(omega, Vec(xbar), 1e-9))
        throw std::domain_error("reconstruct_1d: xbar not in omega");

    LipEstimate lip = lip_estimate(f, omega, Vec(xbar), sched.radii(), sched.grid_density,
                                   sched.seed);
    double M = 10.0;
    if (lip.value.is_finite()) M = std::max(10.0, 2.0 * lip.value.raw());

    const int n_cand = 2048;
    std::vector<double> cands(n_cand);
    for (int i = 0; i < n_cand; ++i) cands[i] = -M + 2.0 * M * i / (n_cand - 1);

    EpiSampleTable table = collect_epi_samples_1d(f, omega, xbar, sched);
    if (!table_has_samples(table))
        throw EstimationError("isolated epigraph point",
                              "no admissible epigraph samples at any radius");
    std::vector<double> quotients = epi_quotient_kernel(table, cands, false);

    std::vector<Trit> verdicts(n_cand);
    int unknowns = 0;
    for (int i = 0; i < n_cand; ++i) {
        double q = quotients[i];
        Trit tan = tangent_member(omega, Vec(xbar), Vec(cands[i]), sched, tol);
        if (q <= eps + tol && tan.is_in())
            verdicts[i] = Trit::in(eps + tol - q);
        else if (q > eps + 3 * tol)
            verdicts[i] = Trit::out(q - eps - 3 * tol);
        else if (tan.is_out())
            verdicts[i] = Trit::out(tan.margin);
        else {
            verdicts[i] = Trit::unknown("band");
            ++unknowns;
        }
        if (csv) csv->push_back({cands[i], verdicts[i]});
    }
    if (unknowns > n_cand / 20)
        throw EstimationError("estimation failure",
                              std::to_string(unknowns) + " of " + std::to_string(n_cand) +
                                  " candidate verdicts are unknown");

    Predicate1D pred{&table, &omega, xbar, eps, tol, &sched};
    SubdiffSet out;
    out.kind = SubdiffKind::eps_regular;
    out.eps = eps;
    out.exactness = Exactness::estimated;
    out.tol = tol;

    std::vector<Interval> parts;
    int i = 0;
    while (i < n_cand) {
        if (!verdicts[i].is_in()) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n_cand && verdicts[j + 1].is_in()) ++j;
        double lo = cands[i], hi = cands[j];
        if (i == 0) {
            out.left_capped = true;
        } else {
            double a = cands[i - 1], b = cands[i];
            while (b - a > tol) {
                double m = 0.5 * (a + b);
                (pred.is_in(m) ? b : a) = m;
            }
            lo = b;
        }
        if (j == n_cand - 1) {
            out.right_capped = true;
        } else {
            double a = cands[j], b = cands[j + 1];
            while (b - a > tol) {
                double m = 0.5 * (a + b);
                (pred.is_in(m) ? a : b) = m;
            }
            hi = a;
        }
        if (lo <= hi) parts.push_back(Interval::closed(lo, hi));
        i = j + 1;
    }
    out.set = IntervalSet::canonicalize(std::move(parts));
    return out;
}

SubdiffSet limiting_estimate(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                             const Schedule& sched) {
    if (f.dim() != 1) throw std::invalid_argument("limiting_estimate: function must be 1-D");
    ExtReal fb = f.eval(Vec(xbar));
    if (!fb.is_finite()) throw std::domain_error("limiting_estimate: f(xbar) is not finite");
    double fbar = fb.raw();

    const int levels = 8;
    const double tol = 1e-5;
    std::vector<std::pair<int, IntervalSet>> seq;
    bool left_capped = false, right_capped = false;
    for (int k = 1; k <= levels; ++k) {
        double rk = sched.r0 * std::pow(sched.rho, k);
        std::vector<Vec> pts = sample_in_ball(omega, Vec(xbar), rk, 33);
        std::vector<double> reps{xbar};
        double lo_adm = xbar, hi_adm = xbar;
        for (const Vec& p : pts) {
            ExtReal v = f.eval(p);
            if (!v.is_finite() || std::abs(v.raw() - fbar) > rk) continue;
            lo_adm = std::min(lo_adm, p[0]);
            hi_adm = std::max(hi_adm, p[0]);
        }
        // representatives: the stationary point plus the extreme admissible
        // approach points at this level
        if (lo_adm < xbar) reps.push_back(lo_adm);
        if (hi_adm > xbar) reps.push_back(hi_adm);
        IntervalSet level_set;
        for (double x : reps) {
            SubdiffSet r = reconstruct_1d(f, omega, x, rk, sched, tol);
            IntervalSet s = r.set;
            // capped endpoints stand for unbounded rays in the level set
            if ((r.left_capped || r.right_capped) && !s.is_empty()) {
                std::vector<Interval> ps = s.parts();
                if (r.left_capped) {
                    left_capped = true;
                    ps.front() = Interval::make(ExtReal::neg_inf(), false, ps.front().hi,
                                                ps.front().hi_closed);
                }
                if (r.right_capped) {
                    right_capped = true;
                    ps.back() = Interval::make(ps.back().lo, ps.back().lo_closed,
                                               ExtReal::pos_inf(), false);
                }
                s = IntervalSet::canonicalize(std::move(ps));
            }
            level_set = iset_union(level_set, s);
        }
        seq.emplace_back(k, level_set);
    }
    OuterLimitResult lim = iset_outer_limit(seq, 5e-4);
    if (!lim.converged)
        throw EstimationError("limiting estimate did not converge", lim.diagnostic);

    SubdiffSet out;
    out.set = lim.set;
    out.kind = SubdiffKind::limiting_relative;
    out.exactness = Exactness::estimated;
    out.tol = 1e-3;
    out.left_capped = left_capped;
    out.right_capped = right_capped;
    return out;
}

} // namespace relsub
