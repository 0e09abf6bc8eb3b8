#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "relsub/parallel.hpp"
#include "relsub/problem.hpp"

namespace {

using relsub::ordered_json;

struct CommonOpts {
    std::string file;
    std::string out;
    std::string csv;
    int threads = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("file", c.file, "problem file (JSON)")->required();
    cmd->add_option("--out", c.out, "write the report here instead of stdout");
    cmd->add_option("--csv", c.csv, "directory for sampled-set / trace CSV dumps");
    cmd->add_option("--threads", c.threads, "cap worker threads (overrides RELSUB_THREADS)");
    cmd->add_option("--seed", c.seed, "override the schedule seed")->each([&](const std::string&) {
        c.seed_set = true;
    });
}

int run_and_emit(relsub::ProblemFile& p, const CommonOpts& c) {
    if (c.threads > 0) relsub::set_thread_cap(c.threads);
    if (c.seed_set) p.schedule.seed = c.seed;
    relsub::RunResult rr = relsub::run_problem(p, c.csv);
    std::string text = rr.report.dump(2);
    text.push_back('\n');
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream o(c.out, std::ios::binary);
        o << text;
    }
    return rr.exit_code;
}

int run_single_query(relsub::ProblemFile& p, const CommonOpts& c, ordered_json query) {
    p.queries = ordered_json::array({std::move(query)});
    return run_and_emit(p, c);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relative subdifferential toolkit"};
    app.require_subcommand(1);

    CommonOpts run_c, sd_c, opt_c, sum_c, mv_c, cx_c, oc_c;

    CLI::App* cmd_run = app.add_subcommand("run", "execute every query in a problem file");
    add_common(cmd_run, run_c);

    CLI::App* cmd_sd = app.add_subcommand("subdiff", "one subdifferential query");
    add_common(cmd_sd, sd_c);
    std::string sd_fn, sd_set, sd_kind = "limiting";
    double sd_point = 0.0, sd_eps = 0.0;
    bool sd_estimate = false;
    cmd_sd->add_option("--fn", sd_fn)->required();
    cmd_sd->add_option("--set", sd_set)->required();
    cmd_sd->add_option("--point", sd_point)->required();
    cmd_sd->add_option("--kind", sd_kind, "regular | eps | limiting | plain");
    cmd_sd->add_option("--eps", sd_eps);
    cmd_sd->add_flag("--estimate", sd_estimate, "use the sampling estimator instead");

    CLI::App* cmd_opt = app.add_subcommand("optimality", "Fermat / sum optimality checks");
    add_common(cmd_opt, opt_c);
    std::string opt_fn, opt_f1, opt_f2, opt_set;
    double opt_point = 0.0, opt_eta = 0.0;
    std::vector<double> opt_eps_list{0.0};
    cmd_opt->add_option("--fn", opt_fn, "single-function Fermat mode");
    cmd_opt->add_option("--f1", opt_f1);
    cmd_opt->add_option("--f2", opt_f2);
    cmd_opt->add_option("--set", opt_set)->required();
    cmd_opt->add_option("--point", opt_point)->required();
    cmd_opt->add_option("--eps-list", opt_eps_list);
    cmd_opt->add_option("--eta", opt_eta, "run the approximate search with this eta");

    CLI::App* cmd_sum = app.add_subcommand("sumrule", "exact / fuzzy sum rule");
    add_common(cmd_sum, sum_c);
    std::string sum_f1, sum_f2, sum_set;
    double sum_point = 0.0, sum_xstar = 0.0, sum_eps = 0.0, sum_eta = 0.0;
    bool sum_fuzzy = false;
    cmd_sum->add_option("--f1", sum_f1)->required();
    cmd_sum->add_option("--f2", sum_f2)->required();
    cmd_sum->add_option("--set", sum_set)->required();
    cmd_sum->add_option("--point", sum_point)->required();
    cmd_sum->add_flag("--fuzzy", sum_fuzzy);
    cmd_sum->add_option("--xstar", sum_xstar);
    cmd_sum->add_option("--eps", sum_eps);
    cmd_sum->add_option("--eta", sum_eta);

    CLI::App* cmd_mv = app.add_subcommand("meanvalue", "mean value witness on a segment");
    add_common(cmd_mv, mv_c);
    std::string mv_fn;
    std::vector<double> mv_a{0.0}, mv_b{1.0};
    cmd_mv->add_option("--fn", mv_fn)->required();
    cmd_mv->add_option("--a", mv_a)->required();
    cmd_mv->add_option("--b", mv_b)->required();

    CLI::App* cmd_cx = app.add_subcommand("convexity", "secant convexity test on a segment");
    add_common(cmd_cx, cx_c);
    std::string cx_fn;
    std::vector<double> cx_a{0.0}, cx_b{1.0};
    int cx_grid = 33;
    cmd_cx->add_option("--fn", cx_fn)->required();
    cmd_cx->add_option("--a", cx_a)->required();
    cmd_cx->add_option("--b", cx_b)->required();
    cmd_cx->add_option("--grid", cx_grid);

    CLI::App* cmd_oc = app.add_subcommand(
        "oracle-compare", "run the file's exact subdifferential queries through the estimator too");
    add_common(cmd_oc, oc_c);
    double oc_gap_tol = 1e-3;
    cmd_oc->add_option("--gap-tol", oc_gap_tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (cmd_run->parsed()) {
            relsub::ProblemFile p = relsub::load_problem_file(run_c.file);
            return run_and_emit(p, run_c);
        }
        if (cmd_sd->parsed()) {
            relsub::ProblemFile p = relsub::load_problem_file(sd_c.file);
            ordered_json q;
            q["op"] = sd_estimate ? "estimate_subdiff" : "subdiff";
            q["fn"] = sd_fn;
            q["set"] = sd_set;
            q["point"] = sd_point;
            q["kind"] = sd_kind;
            q["eps"] = sd_eps;
            return run_single_query(p, sd_c, std::move(q));
        }
        if (cmd_opt->parsed()) {
            relsub::ProblemFile p = relsub::load_problem_file(opt_c.file);
            ordered_json q;
            if (!opt_fn.empty()) {
                q["op"] = "fermat";
                q["fn"] = opt_fn;
                q["eps_list"] = opt_eps_list;
            } else if (opt_eta > 0) {
                q["op"] = "approx_optimality";
                q["f1"] = opt_f1;
                q["f2"] = opt_f2;
                q["eta"] = opt_eta;
            } else {
                q["op"] = "sum_optimality";
                q["f1"] = opt_f1;
                q["f2"] = opt_f2;
            }
            q["set"] = opt_set;
            q["point"] = opt_point;
            return run_single_query(p, opt_c, std::move(q));
        }
        if (cmd_sum->parsed()) {
            relsub::ProblemFile p = relsub::load_problem_file(sum_c.file);
            ordered_json q;
            q["op"] = sum_fuzzy ? "fuzzy_sum" : "sum_rule";
            q["f1"] = sum_f1;
            q["f2"] = sum_f2;
            q["set"] = sum_set;
            q["point"] = sum_point;
            if (sum_fuzzy) {
                q["xstar"] = sum_xstar;
                q["eps"] = sum_eps;
                q["eta"] = sum_eta;
            }
            return run_single_query(p, sum_c, std::move(q));
        }
        if (cmd_mv->parsed()) {
            relsub::ProblemFile p = relsub::load_problem_file(mv_c.file);
            ordered_json q;
            q["op"] = "meanvalue";
            q["fn"] = mv_fn;
            q["a"] = mv_a;
            q["b"] = mv_b;
            return run_single_query(p, mv_c, std::move(q));
        }
        if (cmd_cx->parsed()) {
            relsub::ProblemFile p = relsub::load_problem_file(cx_c.file);
            ordered_json q;
            q["op"] = "convexity";
            q["fn"] = cx_fn;
            q["a"] = cx_a;
            q["b"] = cx_b;
            q["grid"] = cx_grid;
            return run_single_query(p, cx_c, std::move(q));
        }
        if (cmd_oc->parsed()) {
            relsub::ProblemFile p = relsub::load_problem_file(oc_c.file);
            ordered_json queries = ordered_json::array();
            for (const auto& q : p.queries) {
                std::string op = q.value("op", "");
                if (op != "subdiff") continue;
                std::string kind = q.value("kind", "eps_regular");
                if (kind == "regular" || kind == "regular_fomega" || kind == "plain" ||
                    kind == "limiting_plain")
                    continue;  // no estimator counterpart
                ordered_json oq;
                oq["op"] = "oracle_compare";
                oq["fn"] = q.at("fn");
                oq["set"] = q.at("set");
                oq["point"] = q.at("point");
                oq["kind"] = kind;
                if (q.contains("eps")) oq["eps"] = q["eps"];
                oq["gap_tol"] = oc_gap_tol;
                queries.push_back(std::move(oq));
            }
            p.queries = std::move(queries);
            return run_and_emit(p, oc_c);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
