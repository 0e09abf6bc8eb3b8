#pragma once

// Shared fixtures for the test suites: the worked-example functions and sets
// plus the oracle-comparison corpus.

#include <string>
#include <utility>
#include <vector>

#include "relsub/analysis.hpp"
#include "relsub/problem.hpp"

namespace corpus {

using namespace relsub;

inline PiecewiseFunc pw(std::vector<std::pair<std::string, std::string>> pieces,
                        const std::string& def = "inf") {
    std::vector<Piece> ps;
    for (auto& [guard, expr] : pieces)
        ps.push_back(Piece{GuardRegion::interval(parse_interval_set(guard)), parse_expr(expr)});
    ExtReal d = def == "inf" ? ExtReal::pos_inf()
                             : def == "-inf" ? ExtReal::neg_inf() : ExtReal(std::stod(def));
    PiecewiseFunc f(1, std::move(ps), d);
    validate(f);
    return f;
}

inline PiecewiseFunc whole(const std::string& expr) { return pw({{"(-inf, inf)", expr}}); }

inline ClosedSet iset(const std::string& s) {
    return ClosedSet::interval1d(parse_interval_set(s));
}

// --- worked examples ---

// step function: -inf below 0, 0 at 0, +inf above
inline PiecewiseFunc e1_f() {
    return pw({{"(-inf, 0)", "-inf"}, {"{0}", "0"}, {"(0, inf)", "inf"}});
}
inline ClosedSet e1_omega() { return iset("[0, inf)"); }

// f(x) = -|x| split at the kink
inline PiecewiseFunc neg_abs() { return pw({{"(-inf, 0]", "-abs(x)"}, {"(0, inf)", "-abs(x)"}}); }
inline ClosedSet e2_omega() { return iset("(-inf, 0]"); }

// f1(x) = 1/(x+1) - 1 for x > -1
inline PiecewiseFunc recip_f1() { return pw({{"(-1, inf)", "1/(x+1) - 1"}}); }
inline ClosedSet c_half() { return iset("[-0.5, 0]"); }

// the ill-behaved second summand: +inf / 0 / -inf
inline PiecewiseFunc bad_f2() {
    return pw({{"(-inf, 0)", "inf"}, {"{0}", "0"}, {"(0, inf)", "-inf"}});
}

inline PiecewiseFunc exp_f1() { return whole("exp(x) - 1"); }

inline PiecewiseFunc cube() { return whole("x^3/3"); }
inline ClosedSet box01() { return iset("[0, 1]"); }

inline PiecewiseFunc abs_f() { return pw({{"(-inf, 0]", "abs(x)"}, {"(0, inf)", "abs(x)"}}); }
inline PiecewiseFunc neg_sq() { return whole("-x^2"); }
inline PiecewiseFunc sq() { return whole("x^2"); }
inline PiecewiseFunc affine2() { return whole("2*x"); }
inline PiecewiseFunc zero() { return whole("0"); }
inline PiecewiseFunc double_well() { return whole("(x^2 - 1)^2"); }
inline PiecewiseFunc neg_exp() { return whole("-exp(x)"); }

// convex piecewise-affine kink max(-x, 2x)
inline PiecewiseFunc pw_conv() { return pw({{"(-inf, 0]", "-x"}, {"(0, inf)", "2*x"}}); }

// piecewise-affine with a jump at 0 (value 0 there, limit 1 from the left)
inline PiecewiseFunc pw_jump() { return pw({{"(-inf, 0)", "x + 1"}, {"[0, inf)", "x"}}); }

// finite only at 0 inside a fat set
inline PiecewiseFunc isolated_dom() { return pw({{"{0}", "0"}}); }

// indicator of [0, 1]
inline PiecewiseFunc indicator01() { return pw({{"[0, 1]", "0"}}); }

inline ClosedSet sym1() { return iset("[-1, 1]"); }

// --- oracle corpus: (name, f, omega, xbar) covering every example family
// plus |x|, -x^2, a piecewise-affine jump, and an isolated-domain function ---
struct Triple {
    std::string name;
    PiecewiseFunc f;
    ClosedSet omega;
    double xbar;
};

inline std::vector<Triple> oracle_corpus() {
    std::vector<Triple> ts;
    ts.push_back({"step/[0,inf)@0", e1_f(), e1_omega(), 0.0});
    ts.push_back({"-|x|/(-inf,0]@0", neg_abs(), e2_omega(), 0.0});
    ts.push_back({"-|x|/(-inf,0]@-0.5", neg_abs(), e2_omega(), -0.5});
    ts.push_back({"recip/[-0.5,0]@0", recip_f1(), c_half(), 0.0});
    ts.push_back({"recip/[-0.5,0]@-0.25", recip_f1(), c_half(), -0.25});
    ts.push_back({"exp/(-inf,0]@0", exp_f1(), e2_omega(), 0.0});
    ts.push_back({"cube/[0,1]@0", cube(), box01(), 0.0});
    ts.push_back({"cube/[0,1]@0.5", cube(), box01(), 0.5});
    ts.push_back({"cube/[0,1]@1", cube(), box01(), 1.0});
    ts.push_back({"|x|/[-1,1]@0", abs_f(), sym1(), 0.0});
    ts.push_back({"-x^2/[-1,1]@0", neg_sq(), sym1(), 0.0});
    ts.push_back({"jump/[-1,1]@0", pw_jump(), sym1(), 0.0});
    ts.push_back({"isolated/[-1,1]@0", isolated_dom(), sym1(), 0.0});
    ts.push_back({"indicator/[-1,2]@0", indicator01(), iset("[-1, 2]"), 0.0});
    return ts;
}

// functions satisfying the equivalence-theorem hypotheses on a segment:
// 6 convex and 6 nonconvex
struct SegCase {
    std::string name;
    PiecewiseFunc f;
    double a, b;
    bool convex;
};

inline std::vector<SegCase> equivalence_corpus() {
    std::vector<SegCase> cs;
    cs.push_back({"cube[0,1]", cube(), 0.0, 1.0, true});
    cs.push_back({"|x|[-1,1]", abs_f(), -1.0, 1.0, true});
    cs.push_back({"exp[-1,1]", exp_f1(), -1.0, 1.0, true});
    cs.push_back({"affine[0,1]", affine2(), 0.0, 1.0, true});
    cs.push_back({"x^2[-1,1]", sq(), -1.0, 1.0, true});
    cs.push_back({"pwconv[-1,1]", pw_conv(), -1.0, 1.0, true});
    cs.push_back({"-x^2[-1,1]", neg_sq(), -1.0, 1.0, false});
    cs.push_back({"-|x|[-1,1]", neg_abs(), -1.0, 1.0, false});
    cs.push_back({"cube[-1,1]", cube(), -1.0, 1.0, false});
    cs.push_back({"-exp[-1,1]", neg_exp(), -1.0, 1.0, false});
    cs.push_back({"dwell[-2,2]", double_well(), -2.0, 2.0, false});
    cs.push_back({"recip+[-0.5,0.5]", pw({{"(-1, inf)", "-1/(x+1)"}}), -0.5, 0.5, false});
    return cs;
}

inline std::uint64_t mix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform(std::uint64_t& s, double lo, double hi) {
    return lo + (hi - lo) * (mix64(s) >> 11) * 0x1.0p-53;
}

}  // namespace corpus
