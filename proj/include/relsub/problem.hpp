#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "relsub/analysis.hpp"

namespace relsub {

using ordered_json = nlohmann::ordered_json;

/// Parsed problem file: named sets and functions, a sampling schedule, and a
/// query list executed in order.
struct ProblemFile {
    int version = 1;
    int dim = 1;
    Schedule schedule;
    std::map<std::string, ClosedSet> sets;
    std::map<std::string, PiecewiseFunc> functions;
    ordered_json queries;  // array
};

/// Interval-set literal: "[0,1] u {2} u (3, inf)".
IntervalSet parse_interval_set(const std::string& text);

ProblemFile parse_problem(const ordered_json& doc);
ProblemFile load_problem_file(const std::string& path);

ordered_json problem_to_json(const ProblemFile& p);

struct RunResult {
    ordered_json report;
    int exit_code = 0;
};

/// Execute every query; `csv_dir`, when nonempty, receives sampled-set and
/// trace dumps. Exit code: 0 conclusive and all assertions hold, 1 failed
/// assertion, 2 inconclusive results present, 3 input error.
RunResult run_problem(const ProblemFile& p, const std::string& csv_dir = {});

ordered_json interval_set_to_json(const IntervalSet& s);
ordered_json subdiff_to_json(const SubdiffSet& s);

} // namespace relsub
