#include "relsub/problem.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>

namespace relsub {

namespace {

struct InputError : std::runtime_error {
    explicit InputError(const std::string& w) : std::runtime_error(w) {}
};

double parse_endpoint(std::string tok, bool& is_inf, int& sign) {
    is_inf = false;
    sign = +1;
    std::string t;
    for (char c : tok)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
        if (t[0] == '-') sign = -1;
        t = t.substr(1);
    }
    if (t == "inf") {
        is_inf = true;
        return 0.0;
    }
    try {
        std::size_t pos = 0;
        double v = std::stod(t, &pos);
        if (pos != t.size()) throw InputError("bad number '" + tok + "'");
        return sign * v;
    } catch (const InputError&) {
        throw;
    } catch (...) {
        throw InputError("bad number '" + tok + "'");
    }
}

ExtReal parse_ext(const std::string& tok) {
    bool is_inf;
    int sign;
    double v = parse_endpoint(tok, is_inf, sign);
    if (is_inf) return sign > 0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
    return ExtReal(v);
}

}  // namespace

IntervalSet parse_interval_set(const std::string& text) {
    std::vector<Interval> parts;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    if (text.substr(i) == "{}" || text.substr(i) == "empty") return IntervalSet::empty();
    while (i < text.size()) {
        skip();
        if (i >= text.size()) break;
        char open = text[i];
        if (open != '[' && open != '(' && open != '{')
            throw InputError("interval set: expected '[', '(' or '{' in '" + text + "'");
        char close_wanted = open == '{' ? '}' : 0;
        std::size_t close = std::string::npos;
        for (std::size_t j = i + 1; j < text.size(); ++j) {
            char c = text[j];
            if (close_wanted ? c == close_wanted : (c == ']' || c == ')')) {
                close = j;
                break;
            }
        }
        if (close == std::string::npos) throw InputError("interval set: unterminated part");
        std::string body = text.substr(i + 1, close - i - 1);
        if (open == '{') {
            ExtReal v = parse_ext(body);
            if (!v.is_finite()) throw InputError("interval set: singleton must be finite");
            parts.push_back(Interval::point(v.raw()));
        } else {
            auto comma = body.find(',');
            if (comma == std::string::npos) throw InputError("interval set: expected ','");
            ExtReal lo = parse_ext(body.substr(0, comma));
            ExtReal hi = parse_ext(body.substr(comma + 1));
            bool lo_closed = open == '[';
            bool hi_closed = text[close] == ']';
            parts.push_back(Interval::make(lo, lo_closed, hi, hi_closed));
        }
        i = close + 1;
        skip();
        if (i < text.size()) {
            if (text[i] == 'u' || text[i] == 'U') {
                ++i;
            } else {
                throw InputError("interval set: expected 'u' between parts in '" + text + "'");
            }
        }
    }
    return IntervalSet::canonicalize(std::move(parts));
}

namespace {

Vec parse_point(const ordered_json& j, int dim) {
    std::vector<double> c;
    if (j.is_number()) {
        c.push_back(j.get<double>());
    } else if (j.is_array()) {
        for (const auto& e : j) c.push_back(e.get<double>());
    } else {
        throw InputError("point must be a number or an array");
    }
    if (static_cast<int>(c.size()) != dim)
        throw InputError("point dimension mismatch (expected " + std::to_string(dim) + ")");
    return Vec::from(c);
}

ClosedSet parse_set(const ordered_json& j, int dim) {
    if (j.is_string()) {
        IntervalSet s = parse_interval_set(j.get<std::string>());
        return ClosedSet::interval1d(s);
    }
    if (!j.is_object()) throw InputError("set description must be a string or object");
    if (j.contains("segment")) {
        const auto& seg = j["segment"];
        return ClosedSet::segment(parse_point(seg.at("a"), dim), parse_point(seg.at("b"), dim));
    }
    if (j.contains("box")) {
        const auto& bx = j["box"];
        return ClosedSet::box(parse_point(bx.at("lo"), dim), parse_point(bx.at("hi"), dim));
    }
    if (j.contains("polytope")) {
        const auto& p = j["polytope"];
        std::vector<Vec> normals;
        std::vector<double> offsets;
        for (const auto& row : p.at("normals")) normals.push_back(parse_point(row, dim));
        for (const auto& o : p.at("offsets")) offsets.push_back(o.get<double>());
        bool unbounded = p.value("unbounded", false);
        return ClosedSet::polytope(std::move(normals), std::move(offsets), unbounded);
    }
    if (j.contains("union")) {
        std::vector<ClosedSet> members;
        for (const auto& m : j["union"]) members.push_back(parse_set(m, dim));
        return ClosedSet::finite_union(std::move(members));
    }
    throw InputError("unknown set description");
}

GuardRegion parse_guard(const std::string& text, int dim,
                        const std::map<std::string, ClosedSet>& sets) {
    if (text == "all" || text == "R" || text == "R^n") return GuardRegion::whole_space();
    auto it = sets.find(text);
    if (it != sets.end()) {
        if (dim == 1) return GuardRegion::interval(it->second.as_interval_set());
        return GuardRegion::closed_set(it->second);
    }
    if (dim != 1) throw InputError("n-D guards must name a set or be 'all'");
    return GuardRegion::interval(parse_interval_set(text));
}

PiecewiseFunc parse_function(const ordered_json& j, int dim,
                             const std::map<std::string, ClosedSet>& sets) {
    std::vector<Piece> pieces;
    ExtReal def = ExtReal::pos_inf();
    if (j.is_string()) {
        pieces.push_back(Piece{GuardRegion::whole_space(), parse_expr(j.get<std::string>())});
        return PiecewiseFunc(dim, std::move(pieces), def);
    }
    if (j.contains("expr")) {
        pieces.push_back(
            Piece{GuardRegion::whole_space(), parse_expr(j.at("expr").get<std::string>())});
    } else {
        for (const auto& pj : j.at("pieces")) {
            GuardRegion g = parse_guard(pj.at("guard").get<std::string>(), dim, sets);
            pieces.push_back(Piece{std::move(g), parse_expr(pj.at("expr").get<std::string>())});
        }
    }
    if (j.contains("default")) def = parse_ext(j.at("default").get<std::string>());
    PiecewiseFunc f(dim, std::move(pieces), def);
    validate(f);
    return f;
}

}  // namespace

ProblemFile parse_problem(const ordered_json& doc) {
    ProblemFile p;
    try {
        p.version = doc.at("version").get<int>();
        if (p.version != 1) throw InputError("unsupported version");
        p.dim = doc.at("space").at("dim").get<int>();
        if (p.dim < 1 || p.dim > 3) throw InputError("space.dim must be 1..3");
        if (doc.contains("seed")) p.schedule.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("schedule")) {
            const auto& s = doc["schedule"];
            p.schedule.r0 = s.value("r0", p.schedule.r0);
            p.schedule.rho = s.value("rho", p.schedule.rho);
            p.schedule.steps = s.value("steps", p.schedule.steps);
            p.schedule.grid_density = s.value("grid_density", p.schedule.grid_density);
            if (s.contains("epi_offsets"))
                p.schedule.epi_offsets = s["epi_offsets"].get<std::vector<double>>();
            if (p.schedule.grid_density < 8) throw InputError("grid_density must be >= 8");
        }
        if (doc.contains("sets"))
            for (const auto& [name, sj] : doc["sets"].items()) {
                p.sets.emplace(name, parse_set(sj, p.dim));
            }
        if (doc.contains("functions"))
            for (const auto& [name, fj] : doc["functions"].items())
                p.functions.emplace(name, parse_function(fj, p.dim, p.sets));
        p.queries = doc.value("queries", ordered_json::array());
        if (!p.queries.is_array()) throw InputError("queries must be an array");
    } catch (const ordered_json::exception& e) {
        throw InputError(std::string("schema error: ") + e.what());
    }
    return p;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file: " + path);
    ordered_json doc;
    try {
        in >> doc;
    } catch (const ordered_json::exception& e) {
        throw std::runtime_error(std::string("JSON parse error: ") + e.what());
    }
    return parse_problem(doc);
}

namespace {

ordered_json num_or_inf(ExtReal v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    return v.raw();
}

}  // namespace

ordered_json interval_set_to_json(const IntervalSet& s) {
    ordered_json parts = ordered_json::array();
    for (const Interval& p : s.parts()) {
        ordered_json d;
        d["lo"] = num_or_inf(p.lo);
        d["lo_closed"] = p.lo_closed;
        d["hi"] = num_or_inf(p.hi);
        d["hi_closed"] = p.hi_closed;
        parts.push_back(std::move(d));
    }
    ordered_json out;
    out["repr"] = s.to_string();
    out["parts"] = std::move(parts);
    return out;
}

namespace {

const char* kind_name(SubdiffKind k) {
    switch (k) {
        case SubdiffKind::regular_fomega: return "regular_fomega";
        case SubdiffKind::eps_regular: return "eps_regular";
        case SubdiffKind::limiting_relative: return "limiting_relative";
        case SubdiffKind::limiting_plain: return "limiting_plain";
    }
    return "?";
}

SubdiffKind kind_from_name(const std::string& s) {
    if (s == "regular" || s == "regular_fomega") return SubdiffKind::regular_fomega;
    if (s == "eps" || s == "eps_regular") return SubdiffKind::eps_regular;
    if (s == "limiting" || s == "limiting_relative") return SubdiffKind::limiting_relative;
    if (s == "plain" || s == "limiting_plain") return SubdiffKind::limiting_plain;
    throw InputError("unknown subdifferential kind '" + s + "'");
}

ordered_json vec_to_json(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (int i = 0; i < v.dim; ++i) a.push_back(v[i]);
    return a;
}

ordered_json trit_to_json(const Trit& t) {
    ordered_json j;
    j["verdict"] = t.name();
    if (!t.is_unknown()) j["margin"] = t.margin;
    if (!t.note.empty()) j["note"] = t.note;
    return j;
}

ordered_json hyps_to_json(const std::vector<HypothesisCheck>& hs) {
    ordered_json a = ordered_json::array();
    for (const auto& h : hs) {
        ordered_json j;
        j["name"] = h.name;
        j["passed"] = h.passed;
        if (!h.note.empty()) j["note"] = h.note;
        a.push_back(std::move(j));
    }
    return a;
}

ordered_json witnesses_to_json(const std::vector<std::pair<std::string, std::string>>& ws) {
    ordered_json a = ordered_json::array();
    for (const auto& [k, v] : ws) {
        ordered_json j;
        j["name"] = k;
        j["value"] = v;
        a.push_back(std::move(j));
    }
    return a;
}

ordered_json rule_report_to_json(const RuleReport& r) {
    ordered_json j;
    j["rule"] = r.rule_id;
    j["hypotheses"] = hyps_to_json(r.hypotheses);
    j["conclusion"] = r.conclusion == RuleVerdict::holds
                          ? "holds"
                          : r.conclusion == RuleVerdict::fails ? "fails" : "inconclusive";
    j["witnesses"] = witnesses_to_json(r.witnesses);
    j["tol"] = r.tol;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

ordered_json verdict_to_json(const OptimalityVerdict& v) {
    ordered_json j;
    switch (v.condition) {
        case OptimalityCondition::fermat_eps: j["condition"] = "fermat_eps"; break;
        case OptimalityCondition::fermat_limiting: j["condition"] = "fermat"; break;
        case OptimalityCondition::sum_exact: j["condition"] = "sum_exact"; break;
        case OptimalityCondition::sum_fuzzy: j["condition"] = "sum_fuzzy"; break;
    }
    j["verdict"] = v.status == OptimalityStatus::holds
                       ? "necessary-condition-holds"
                       : v.status == OptimalityStatus::violated ? "violated" : "inconclusive";
    if (!v.hypotheses.empty()) j["hypotheses"] = hyps_to_json(v.hypotheses);
    j["witnesses"] = witnesses_to_json(v.witnesses);
    j["gap"] = v.gap;
    j["non_optimality_certificate"] = v.non_optimality_certificate;
    if (!v.notes.empty()) j["notes"] = v.notes;
    return j;
}

ordered_json cert_to_json(const FuzzyCertificate& c) {
    ordered_json j;
    j["eta"] = c.eta;
    j["x1"] = vec_to_json(c.x1);
    j["x2"] = vec_to_json(c.x2);
    j["eta1"] = c.eta1;
    j["eta2"] = c.eta2;
    j["s1"] = c.s1;
    j["s2"] = c.s2;
    j["gamma_bar"] = c.gamma_bar;
    j["valid"] = c.valid;
    if (!c.note.empty()) j["note"] = c.note;
    if (!c.eta_trend.empty()) {
        ordered_json t = ordered_json::array();
        for (auto [e, g] : c.eta_trend) {
            ordered_json row;
            row["eta"] = e;
            row["gamma_bar"] = std::isfinite(g) ? ordered_json(g) : ordered_json("inf");
            t.push_back(std::move(row));
        }
        j["eta_trend"] = std::move(t);
    }
    return j;
}

ordered_json witness_to_json(const MeanValueWitness& w) {
    ordered_json j;
    j["valid"] = w.valid;
    j["c"] = vec_to_json(w.c);
    j["arc_c"] = w.arc_c;
    j["direction"] = vec_to_json(w.direction);
    j["xstar"] = std::isfinite(w.xstar) ? ordered_json(w.xstar) : ordered_json("inf");
    j["phi_min"] = w.phi_min;
    j["delta_f"] = w.delta_f;
    j["pairing"] = std::isfinite(w.pairing) ? ordered_json(w.pairing) : ordered_json("inf");
    j["ineq_residual"] =
        std::isfinite(w.ineq_residual) ? ordered_json(w.ineq_residual) : ordered_json("inf");
    j["scaled_residual"] =
        std::isfinite(w.scaled_residual) ? ordered_json(w.scaled_residual) : ordered_json("inf");
    j["equality_case"] = w.equality_case;
    if (w.equality_case) j["equality_residual"] = w.equality_residual;
    if (!w.note.empty()) j["note"] = w.note;
    return j;
}

struct QueryOutcome {
    ordered_json result;
    // ok | failed | inconclusive
    std::string status = "ok";
    bool discrepancy = false;
    std::vector<std::string> notes;
};

class Runner {
public:
    Runner(const ProblemFile& p, std::string csv_dir) : p_(p), csv_dir_(std::move(csv_dir)) {}

    const ClosedSet& set(const ordered_json& q, const std::string& key = "set") const {
        std::string name = q.at(key).get<std::string>();
        auto it = p_.sets.find(name);
        if (it == p_.sets.end()) throw InputError("unknown set '" + name + "'");
        return it->second;
    }
    const PiecewiseFunc& fn(const ordered_json& q, const std::string& key = "fn") const {
        std::string name = q.at(key).get<std::string>();
        auto it = p_.functions.find(name);
        if (it == p_.functions.end()) throw InputError("unknown function '" + name + "'");
        return it->second;
    }
    double point1(const ordered_json& q, const std::string& key = "point") const {
        return parse_point(q.at(key), 1)[0];
    }

    QueryOutcome exec(const ordered_json& q, int id);

private:
    const ProblemFile& p_;
    std::string csv_dir_;

    void write_csv(int id, const std::string& tag, const std::string& header,
                   const std::vector<std::string>& rows) const {
        if (csv_dir_.empty()) return;
        std::filesystem::create_directories(csv_dir_);
        std::ofstream out(csv_dir_ + "/query_" + std::to_string(id) + "_" + tag + ".csv");
        out << header << "\n";
        for (const auto& r : rows) out << r << "\n";
    }
};

void apply_expectations(const ordered_json& q, const IntervalSet& got, QueryOutcome& o) {
    if (q.contains("expect")) {
        IntervalSet want = parse_interval_set(q.at("expect").get<std::string>());
        if (!(want == got)) {
            o.status = "failed";
            o.notes.push_back("expected " + want.to_string() + ", computed " + got.to_string());
        }
    }
    if (q.contains("reference")) {
        IntervalSet ref = parse_interval_set(q.at("reference").get<std::string>());
        if (!(ref == got)) {
            o.discrepancy = true;
            o.notes.push_back("definition-based result " + got.to_string() +
                              " differs from the reference table value " + ref.to_string());
        }
    }
}

QueryOutcome Runner::exec(const ordered_json& q, int id) {
    QueryOutcome o;
    std::string op = q.at("op").get<std::string>();
    const double tol = q.value("tol", 1e-9);

    if (op == "subdiff") {
        const PiecewiseFunc& f = fn(q);
        const ClosedSet& s = set(q);
        SubdiffKind kind = kind_from_name(q.value("kind", "eps_regular"));
        double eps = q.value("eps", 0.0);
        SubdiffSet r;
        double x = point1(q);
        switch (kind) {
            case SubdiffKind::regular_fomega: r = regular_subdiff_fomega(f, s, x); break;
            case SubdiffKind::eps_regular: r = eps_regular_relative(f, s, x, eps); break;
            case SubdiffKind::limiting_relative: r = limiting_relative(f, s, x); break;
            case SubdiffKind::limiting_plain: r = limiting_plain(f, s, x); break;
        }
        o.result = subdiff_to_json(r);
        apply_expectations(q, r.set, o);
        return o;
    }
    if (op == "segment_subdiff") {
        const PiecewiseFunc& f = fn(q);
        Vec a = parse_point(q.at("a"), p_.dim), b = parse_point(q.at("b"), p_.dim);
        Vec x = parse_point(q.at("point"), p_.dim);
        SubdiffKind kind = kind_from_name(q.value("kind", "limiting_relative"));
        SubdiffSet r = segment_subdiff(f, a, b, x, kind, q.value("eps", 0.0));
        o.result = subdiff_to_json(r);
        apply_expectations(q, r.set, o);
        return o;
    }
    if (op == "dini") {
        DiniData d = dini(fn(q), set(q), point1(q));
        o.result["d_plus"] = num_or_inf(d.d_plus);
        o.result["d_minus"] = num_or_inf(d.d_minus);
        o.result["right_accessible"] = d.right_accessible;
        o.result["left_accessible"] = d.left_accessible;
        return o;
    }
    if (op == "tangent_cone") {
        const ClosedSet& s = set(q);
        ConeRep c = tangent_cone(s, parse_point(q.at("point"), p_.dim));
        if (c.dim == 1) {
            o.result = interval_set_to_json(c.line);
            apply_expectations(q, c.line, o);
        } else {
            ordered_json cones = ordered_json::array();
            for (const auto& rows : c.cones) {
                ordered_json rj = ordered_json::array();
                for (const Vec& n : rows) rj.push_back(vec_to_json(n));
                cones.push_back(std::move(rj));
            }
            o.result["cones"] = std::move(cones);
        }
        return o;
    }
    if (op == "eps_normal") {
        const ClosedSet& s = set(q);
        Trit t = eps_normal_contains(s, parse_point(q.at("point"), p_.dim),
                                     parse_point(q.at("xstar"), p_.dim), q.value("eps", 0.0), tol);
        o.result = trit_to_json(t);
        if (t.is_unknown()) o.status = "inconclusive";
        return o;
    }
    if (op == "fermat") {
        std::vector<double> eps_list = q.value("eps_list", std::vector<double>{0.0});
        OptimalityVerdict v = fermat_check(fn(q), set(q), point1(q), eps_list);
        o.result = verdict_to_json(v);
        if (v.status == OptimalityStatus::violated) o.status = "failed";
        if (v.status == OptimalityStatus::inconclusive) o.status = "inconclusive";
        return o;
    }
    if (op == "sum_optimality") {
        OptimalityVerdict v = sum_optimality_check(fn(q, "f1"), fn(q, "f2"), set(q), point1(q));
        o.result = verdict_to_json(v);
        if (v.status == OptimalityStatus::violated) o.status = "failed";
        if (v.status == OptimalityStatus::inconclusive) o.status = "inconclusive";
        return o;
    }
    if (op == "approx_optimality") {
        FuzzyCertificate c = approx_optimality_search(fn(q, "f1"), fn(q, "f2"), set(q), point1(q),
                                                      q.at("eta").get<double>());
        o.result = cert_to_json(c);
        if (!c.valid) o.status = "failed";
        return o;
    }
    if (op == "sum_rule") {
        RuleReport r = sum_rule_check(fn(q, "f1"), fn(q, "f2"), set(q), point1(q));
        o.result = rule_report_to_json(r);
        if (r.conclusion == RuleVerdict::fails) o.status = "failed";
        if (r.conclusion == RuleVerdict::inconclusive) o.status = "inconclusive";
        return o;
    }
    if (op == "fuzzy_sum") {
        FuzzyCertificate c =
            fuzzy_sum_search(fn(q, "f1"), fn(q, "f2"), set(q), point1(q),
                             q.at("xstar").get<double>(), q.value("eps", 0.0),
                             q.at("eta").get<double>());
        o.result = cert_to_json(c);
        if (!c.valid) o.status = "inconclusive";
        return o;
    }
    if (op == "scalar_rule") {
        RuleReport r = scalar_rule_check(fn(q), set(q), point1(q), q.at("lambda").get<double>(),
                                         q.value("eps", 0.0));
        o.result = rule_report_to_json(r);
        if (r.conclusion == RuleVerdict::fails) o.status = "failed";
        if (r.conclusion == RuleVerdict::inconclusive) o.status = "inconclusive";
        return o;
    }
    if (op == "lipschitz_bound") {
        RuleReport r = lipschitz_bound_check(fn(q), set(q), point1(q), q.value("eps", 0.0),
                                             q.value("radius", 0.25));
        o.result = rule_report_to_json(r);
        if (r.conclusion == RuleVerdict::fails) o.status = "failed";
        if (r.conclusion == RuleVerdict::inconclusive) o.status = "inconclusive";
        return o;
    }
    if (op == "inclusion_chain") {
        RuleReport r = inclusion_chain_check(fn(q), set(q), point1(q));
        o.result = rule_report_to_json(r);
        if (r.conclusion == RuleVerdict::fails) o.status = "failed";
        return o;
    }
    if (op == "meanvalue") {
        std::vector<std::array<double, 3>> trace;
        MeanValueWitness w = mean_value_witness(fn(q), parse_point(q.at("a"), p_.dim),
                                                parse_point(q.at("b"), p_.dim),
                                                csv_dir_.empty() ? nullptr : &trace);
        o.result = witness_to_json(w);
        if (!w.valid) o.status = "failed";
        if (!trace.empty()) {
            std::vector<std::string> rows;
            for (const auto& r : trace)
                rows.push_back(std::to_string(r[0]) + "," + std::to_string(r[1]) + "," +
                               std::to_string(r[2]));
            write_csv(id, "trace", "t,f,phi", rows);
        }
        return o;
    }
    if (op == "convexity") {
        Trit t = convexity_check(fn(q), parse_point(q.at("a"), p_.dim),
                                 parse_point(q.at("b"), p_.dim), q.value("grid", 33), tol);
        o.result = trit_to_json(t);
        if (t.is_unknown()) o.status = "inconclusive";
        return o;
    }
    if (op == "monotonicity") {
        SubdiffKind kind = kind_from_name(q.value("kind", "limiting_plain"));
        Trit t = monotonicity_check(kind, fn(q), parse_point(q.at("a"), p_.dim),
                                    parse_point(q.at("b"), p_.dim), q.value("grid", 33), tol);
        o.result = trit_to_json(t);
        if (t.is_unknown()) o.status = "inconclusive";
        return o;
    }
    if (op == "equivalence") {
        RuleReport r = equivalence_report(fn(q), parse_point(q.at("a"), p_.dim),
                                          parse_point(q.at("b"), p_.dim));
        o.result = rule_report_to_json(r);
        if (r.conclusion == RuleVerdict::fails) o.status = "failed";
        if (r.conclusion == RuleVerdict::inconclusive) o.status = "inconclusive";
        return o;
    }
    if (op == "lip_estimate") {
        LipEstimate e = lip_estimate(fn(q), set(q), Vec(point1(q)), p_.schedule.radii(),
                                     p_.schedule.grid_density, p_.schedule.seed);
        o.result["value"] = num_or_inf(e.value);
        o.result["confident"] = e.confident;
        return o;
    }
    if (op == "lsc_check") {
        Trit t = check_lsc_relative(fn(q), set(q), Vec(point1(q)), tol);
        AroundCheck around = lsc_relative_around(fn(q), set(q), Vec(point1(q)), tol);
        o.result["at_point"] = trit_to_json(t);
        o.result["around"] = around.ok;
        if (!around.ok) o.result["around_note"] = around.note;
        if (t.is_unknown()) o.status = "inconclusive";
        return o;
    }
    if (op == "local_min_scan") {
        auto ms = local_min_scan(fn(q), set(q), q.value("density", 512));
        ordered_json arr = ordered_json::array();
        for (const LocalMin& m : ms) {
            ordered_json mj;
            mj["x"] = m.x;
            mj["value"] = m.value;
            mj["basin"] = m.basin;
            arr.push_back(std::move(mj));
        }
        o.result["minimizers"] = std::move(arr);
        return o;
    }
    if (op == "estimate_subdiff") {
        const PiecewiseFunc& f = fn(q);
        const ClosedSet& s = set(q);
        double x = point1(q);
        std::string kind = q.value("kind", "eps_regular");
        std::vector<CandidateSample> samples;
        SubdiffSet r;
        if (kind == "limiting" || kind == "limiting_relative")
            r = limiting_estimate(f, s, x, p_.schedule);
        else
            r = reconstruct_1d(f, s, x, q.value("eps", 0.0), p_.schedule, q.value("est_tol", 1e-4),
                               csv_dir_.empty() ? nullptr : &samples);
        o.result = subdiff_to_json(r);
        if (!samples.empty()) {
            std::vector<std::string> rows;
            for (const auto& cs : samples)
                rows.push_back(std::to_string(cs.candidate) + "," + cs.verdict.name() + "," +
                               std::to_string(cs.verdict.margin));
            write_csv(id, "samples", "candidate,verdict,margin", rows);
        }
        return o;
    }
    if (op == "oracle_compare") {
        const PiecewiseFunc& f = fn(q);
        const ClosedSet& s = set(q);
        double x = point1(q);
        std::string kind = q.value("kind", "eps_regular");
        double eps = q.value("eps", 0.0);
        SubdiffSet exact, est;
        if (kind == "limiting" || kind == "limiting_relative") {
            exact = limiting_relative(f, s, x);
            est = limiting_estimate(f, s, x, p_.schedule);
        } else {
            exact = eps_regular_relative(f, s, x, eps);
            est = reconstruct_1d(f, s, x, eps, p_.schedule, q.value("est_tol", 1e-4));
        }
        double cap = 8.0;  // compare bounded parts inside the candidate cap
        double gap = iset_hausdorff_clipped(exact.set, est.set, cap);
        bool unbounded_agree =
            (exact.set.right_unbounded() == (est.set.right_unbounded() || est.right_capped)) &&
            (exact.set.left_unbounded() == (est.set.left_unbounded() || est.left_capped));
        o.result["exact"] = subdiff_to_json(exact);
        o.result["estimated"] = subdiff_to_json(est);
        o.result["hausdorff_gap"] = gap;
        o.result["unbounded_flags_agree"] = unbounded_agree;
        double budget = q.value("gap_tol", 1e-3);
        if (!(gap <= budget) || !unbounded_agree) o.status = "failed";
        return o;
    }
    throw InputError("unknown op '" + op + "'");
}

}  // namespace

ordered_json subdiff_to_json(const SubdiffSet& s) {
    ordered_json j;
    j["kind"] = kind_name(s.kind);
    if (s.kind == SubdiffKind::eps_regular) j["eps"] = s.eps;
    j["set"] = interval_set_to_json(s.set);
    j["direction"] = vec_to_json(s.direction);
    j["exactness"] = s.exactness == Exactness::exact ? "exact" : "estimated";
    if (s.exactness == Exactness::estimated) {
        j["tol"] = s.tol;
        j["left_capped"] = s.left_capped;
        j["right_capped"] = s.right_capped;
    }
    if (!s.notes.empty()) j["notes"] = s.notes;
    return j;
}

RunResult run_problem(const ProblemFile& p, const std::string& csv_dir) {
    RunResult rr;
    rr.report["version"] = 1;
    rr.report["seed"] = p.schedule.seed;
    ordered_json queries = ordered_json::array();
    int failures = 0, inconclusive = 0, input_errors = 0;
    Runner runner(p, csv_dir);
    int id = 0;
    for (const auto& q : p.queries) {
        ordered_json entry;
        entry["id"] = id;
        entry["op"] = q.value("op", "?");
        entry["inputs"] = q;
        try {
            QueryOutcome o = runner.exec(q, id);
            entry["status"] = o.status;
            entry["result"] = std::move(o.result);
            ordered_json flags;
            flags["discrepancy"] = o.discrepancy;
            flags["notes"] = o.notes;
            entry["flags"] = std::move(flags);
            if (o.status == "failed") ++failures;
            if (o.status == "inconclusive") ++inconclusive;
        } catch (const EstimationError& e) {
            entry["status"] = "inconclusive";
            entry["error"] = e.what();
            if (!e.diagnostics.empty()) entry["diagnostics"] = e.diagnostics;
            ++inconclusive;
        } catch (const ordered_json::exception& e) {
            entry["status"] = "input_error";
            entry["error"] = std::string("schema: ") + e.what();
            ++input_errors;
        } catch (const std::exception& e) {
            entry["status"] = "input_error";
            entry["error"] = e.what();
            ++input_errors;
        }
        ordered_json prov;
        prov["seed"] = p.schedule.seed;
        prov["schedule"] = {{"r0", p.schedule.r0},
                            {"rho", p.schedule.rho},
                            {"steps", p.schedule.steps},
                            {"grid_density", p.schedule.grid_density}};
        entry["provenance"] = std::move(prov);
        queries.push_back(std::move(entry));
        ++id;
    }
    rr.report["queries"] = std::move(queries);
    ordered_json summary;
    summary["queries"] = id;
    summary["failures"] = failures;
    summary["inconclusive"] = inconclusive;
    summary["input_errors"] = input_errors;
    rr.report["summary"] = std::move(summary);
    rr.exit_code = input_errors ? 3 : failures ? 1 : inconclusive ? 2 : 0;
    return rr;
}

namespace {

ordered_json set_to_json(const ClosedSet& s) {
    if (const auto* iv = std::get_if<IntervalSet>(&s.v())) return iv->to_string();
    if (const auto* seg = std::get_if<SegmentSet>(&s.v())) {
        ordered_json j;
        j["segment"] = {{"a", vec_to_json(seg->a)}, {"b", vec_to_json(seg->b)}};
        return j;
    }
    if (const auto* bx = std::get_if<BoxSet>(&s.v())) {
        ordered_json j;
        j["box"] = {{"lo", vec_to_json(bx->lo)}, {"hi", vec_to_json(bx->hi)}};
        return j;
    }
    if (const auto* poly = std::get_if<PolytopeSet>(&s.v())) {
        ordered_json rows = ordered_json::array(), offs = ordered_json::array();
        for (const Vec& n : poly->normals) rows.push_back(vec_to_json(n));
        for (double c : poly->offsets) offs.push_back(c);
        ordered_json j;
        j["polytope"] = {{"normals", std::move(rows)},
                         {"offsets", std::move(offs)},
                         {"unbounded", poly->unbounded}};
        return j;
    }
    ordered_json members = ordered_json::array();
    for (const auto& m : std::get<ClosedSet::Union>(s.v())) members.push_back(set_to_json(m));
    ordered_json j;
    j["union"] = std::move(members);
    return j;
}

ordered_json function_to_json(const PiecewiseFunc& f) {
    ordered_json pieces = ordered_json::array();
    for (const Piece& p : f.pieces()) {
        ordered_json pj;
        if (p.guard.all_space)
            pj["guard"] = "all";
        else if (p.guard.iset)
            pj["guard"] = p.guard.iset->to_string();
        else
            throw std::runtime_error("function_to_json: unsupported region guard");
        pj["expr"] = to_string(p.expr);
        pieces.push_back(std::move(pj));
    }
    ordered_json j;
    j["pieces"] = std::move(pieces);
    j["default"] = to_string(f.default_value());
    return j;
}

}  // namespace

ordered_json problem_to_json(const ProblemFile& p) {
    ordered_json j;
    j["version"] = p.version;
    j["space"] = {{"dim", p.dim}};
    j["seed"] = p.schedule.seed;
    j["schedule"] = {{"r0", p.schedule.r0},
                     {"rho", p.schedule.rho},
                     {"steps", p.schedule.steps},
                     {"grid_density", p.schedule.grid_density},
                     {"epi_offsets", p.schedule.epi_offsets}};
    ordered_json sets;
    for (const auto& [name, s] : p.sets) sets[name] = set_to_json(s);
    j["sets"] = std::move(sets);
    ordered_json fns;
    for (const auto& [name, f] : p.functions) fns[name] = function_to_json(f);
    j["functions"] = std::move(fns);
    j["queries"] = p.queries;
    return j;
}

} // namespace relsub
