#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support/corpus.hpp"

using namespace relsub;

namespace {

ordered_json base_doc() {
    ordered_json doc;
    doc["version"] = 1;
    doc["space"] = {{"dim", 1}};
    doc["seed"] = 42;
    doc["sets"] = {{"Omega", "[0, inf)"}, {"C", "(-inf, 0]"}, {"H", "[-0.5, 0]"}};
    doc["functions"] = ordered_json::object();
    doc["functions"]["step"] = {
        {"pieces", ordered_json::array({ordered_json{{"guard", "(-inf, 0)"}, {"expr", "-inf"}},
                                        ordered_json{{"guard", "{0}"}, {"expr", "0"}},
                                        ordered_json{{"guard", "(0, inf)"}, {"expr", "inf"}}})},
        {"default", "inf"}};
    doc["functions"]["negabs"] = {
        {"pieces", ordered_json::array({ordered_json{{"guard", "(-inf, 0]"}, {"expr", "-abs(x)"}},
                                        ordered_json{{"guard", "(0, inf)"}, {"expr", "-abs(x)"}}})},
        {"default", "inf"}};
    doc["functions"]["cube"] = {{"expr", "x^3/3"}};
    doc["queries"] = ordered_json::array();
    return doc;
}

std::string write_temp(const ordered_json& doc, const std::string& name) {
    std::string path = std::string("/tmp/relsub_test_") + name + ".json";
    std::ofstream out(path, std::ios::binary);
    out << doc.dump(2) << "\n";
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* cli_path() { return std::getenv("RELSUB_CLI"); }

int run_cli(const std::string& args, const std::string& out_file) {
    std::string cmd = std::string(cli_path()) + " " + args + " > " + out_file + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_SUITE("problem_file") {
    TEST_CASE("interval set literals") {
        CHECK(parse_interval_set("[0, 1] u {2} u (3, inf)").size() == 3);
        CHECK(parse_interval_set("(-inf, 0]") == IntervalSet(Interval::ray_le(0)));
        CHECK(parse_interval_set("{}").is_empty());
        CHECK_THROWS(parse_interval_set("[1, 0]"));
        CHECK_THROWS(parse_interval_set("[0 1]"));
    }

    TEST_CASE("round trip through serialization") {
        ordered_json doc = base_doc();
        doc["queries"].push_back({{"op", "subdiff"},
                                  {"fn", "negabs"},
                                  {"set", "C"},
                                  {"point", 0.0},
                                  {"kind", "limiting"}});
        ProblemFile p = parse_problem(doc);
        ProblemFile q = parse_problem(problem_to_json(p));
        CHECK(q.dim == p.dim);
        CHECK(q.sets.size() == p.sets.size());
        for (const auto& [name, s] : p.sets)
            CHECK(q.sets.at(name).as_interval_set() == s.as_interval_set());
        CHECK(q.functions.size() == p.functions.size());
        std::uint64_t st = 71;
        for (const auto& [name, f] : p.functions)
            for (int it = 0; it < 40; ++it) {
                double x = corpus::uniform(st, -2, 2);
                CHECK(q.functions.at(name).eval(Vec(x)) == f.eval(Vec(x)));
            }
        RunResult a = run_problem(p), b = run_problem(q);
        CHECK(a.report.dump() == b.report.dump());
    }

    TEST_CASE("queries run in order with echoed inputs") {
        ordered_json doc = base_doc();
        doc["queries"].push_back({{"op", "subdiff"},
                                  {"fn", "step"},
                                  {"set", "Omega"},
                                  {"point", 0.0},
                                  {"kind", "limiting"},
                                  {"expect", "[0, inf)"}});
        doc["queries"].push_back(
            {{"op", "dini"}, {"fn", "negabs"}, {"set", "C"}, {"point", 0.0}});
        RunResult r = run_problem(parse_problem(doc));
        CHECK(r.exit_code == 0);
        CHECK(r.report["queries"].size() == 2);
        CHECK(r.report["queries"][0]["status"] == "ok");
        CHECK(r.report["queries"][1]["result"]["d_minus"] == -1.0);
        CHECK(r.report["summary"]["failures"] == 0);
    }

    TEST_CASE("expectation mismatches fail, reference mismatches only flag") {
        ordered_json doc = base_doc();
        doc["queries"].push_back({{"op", "subdiff"},
                                  {"fn", "negabs"},
                                  {"set", "C"},
                                  {"point", 0.0},
                                  {"kind", "limiting"},
                                  {"expect", "{2}"}});
        RunResult r = run_problem(parse_problem(doc));
        CHECK(r.exit_code == 1);
        CHECK(r.report["queries"][0]["status"] == "failed");

        ordered_json doc2 = base_doc();
        doc2["queries"].push_back({{"op", "subdiff"},
                                   {"fn", "negabs"},
                                   {"set", "C"},
                                   {"point", 0.0},
                                   {"kind", "limiting"},
                                   {"reference", "{2}"}});
        RunResult r2 = run_problem(parse_problem(doc2));
        CHECK(r2.exit_code == 0);
        CHECK(r2.report["queries"][0]["flags"]["discrepancy"] == true);
    }

    TEST_CASE("exit codes for failed and inconclusive queries") {
        ordered_json doc = base_doc();
        doc["queries"].push_back(
            {{"op", "fermat"}, {"fn", "negabs"}, {"set", "C"}, {"point", 0.0}});
        RunResult r = run_problem(parse_problem(doc));
        CHECK(r.exit_code == 1);  // non-optimality certificate

        ordered_json doc2 = base_doc();
        doc2["functions"]["bad2"] = {
            {"pieces",
             ordered_json::array({ordered_json{{"guard", "(-inf, 0)"}, {"expr", "inf"}},
                                  ordered_json{{"guard", "{0}"}, {"expr", "0"}},
                                  ordered_json{{"guard", "(0, inf)"}, {"expr", "-inf"}}})},
            {"default", "inf"}};
        doc2["functions"]["recip"] = {
            {"pieces", ordered_json::array(
                           {ordered_json{{"guard", "(-1, inf)"}, {"expr", "1/(x+1) - 1"}}})},
            {"default", "inf"}};
        doc2["queries"].push_back({{"op", "sum_optimality"},
                                   {"f1", "recip"},
                                   {"f2", "bad2"},
                                   {"set", "H"},
                                   {"point", 0.0}});
        RunResult r2 = run_problem(parse_problem(doc2));
        CHECK(r2.exit_code == 2);
    }

    TEST_CASE("schema violations are input errors") {
        ordered_json doc = base_doc();
        doc["queries"].push_back({{"op", "subdiff"}, {"fn", "nosuch"}, {"set", "Omega"},
                                  {"point", 0.0}});
        RunResult r = run_problem(parse_problem(doc));
        CHECK(r.exit_code == 3);

        ordered_json bad = base_doc();
        bad["functions"]["broken"] = {{"expr", "sin(x)"}};
        CHECK_THROWS(parse_problem(bad));
    }
}

TEST_SUITE("cli_binary") {
    TEST_CASE("run subcommand is byte-stable across runs") {
        REQUIRE(cli_path() != nullptr);
        ordered_json doc = base_doc();
        doc["queries"].push_back({{"op", "subdiff"},
                                  {"fn", "negabs"},
                                  {"set", "C"},
                                  {"point", 0.0},
                                  {"kind", "limiting"}});
        doc["queries"].push_back({{"op", "estimate_subdiff"},
                                  {"fn", "negabs"},
                                  {"set", "C"},
                                  {"point", -0.25},
                                  {"eps", 0.1}});
        std::string file = write_temp(doc, "stable");
        int rc1 = run_cli("run " + file, "/tmp/relsub_out1.json");
        int rc2 = run_cli("run " + file, "/tmp/relsub_out2.json");
        CHECK(rc1 == 0);
        CHECK(rc2 == 0);
        CHECK(slurp("/tmp/relsub_out1.json") == slurp("/tmp/relsub_out2.json"));
    }

    TEST_CASE("subdiff subcommand answers the descent-corner query") {
        REQUIRE(cli_path() != nullptr);
        std::string file = write_temp(base_doc(), "sd");
        int rc = run_cli("subdiff " + file + " --fn negabs --set C --point 0 --kind limiting",
                         "/tmp/relsub_sd.json");
        CHECK(rc == 0);
        ordered_json rep = ordered_json::parse(slurp("/tmp/relsub_sd.json"));
        CHECK(rep["queries"][0]["result"]["set"]["repr"] == "{1}");
    }

    TEST_CASE("meanvalue subcommand reports the interior minimizer") {
        REQUIRE(cli_path() != nullptr);
        std::string file = write_temp(base_doc(), "mv");
        int rc = run_cli("meanvalue " + file + " --fn cube --a 0 --b 1", "/tmp/relsub_mv.json");
        CHECK(rc == 0);
        ordered_json rep = ordered_json::parse(slurp("/tmp/relsub_mv.json"));
        double c = rep["queries"][0]["result"]["arc_c"].get<double>();
        CHECK(c == doctest::Approx(0.5773502691896258).epsilon(1e-6));
        CHECK(rep["queries"][0]["result"]["equality_case"] == true);
    }

    TEST_CASE("malformed input exits with code 3") {
        REQUIRE(cli_path() != nullptr);
        std::ofstream bad("/tmp/relsub_bad.json", std::ios::binary);
        bad << "{ not json";
        bad.close();
        int rc = run_cli("run /tmp/relsub_bad.json", "/tmp/relsub_bad_out.json");
        CHECK(rc == 3);

        ordered_json doc = base_doc();
        doc["functions"]["oops"] = {{"pieces", ordered_json::array({ordered_json{
                                                   {"guard", "[0 1]"}, {"expr", "x"}}})}};
        std::string file = write_temp(doc, "badguard");
        CHECK(run_cli("run " + file, "/tmp/relsub_bad_out2.json") == 3);
    }

    TEST_CASE("oracle-compare reports gaps within budget") {
        REQUIRE(cli_path() != nullptr);
        ordered_json doc = base_doc();
        doc["queries"].push_back({{"op", "subdiff"},
                                  {"fn", "cube"},
                                  {"set", "Omega01"},
                                  {"point", 0.5},
                                  {"kind", "eps"},
                                  {"eps", 0.1}});
        doc["sets"]["Omega01"] = "[0, 1]";
        std::string file = write_temp(doc, "oc");
        int rc = run_cli("oracle-compare " + file, "/tmp/relsub_oc.json");
        CHECK(rc == 0);
        ordered_json rep = ordered_json::parse(slurp("/tmp/relsub_oc.json"));
        CHECK(rep["queries"][0]["result"]["hausdorff_gap"].get<double>() <= 1e-3);
    }
}
