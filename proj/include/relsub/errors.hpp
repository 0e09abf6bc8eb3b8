#pragma once

#include <stdexcept>
#include <string>

namespace relsub {

/// Expression evaluation hit an undefined operation (division by zero inside
/// a matched piece, and the like).
struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A piece contains an Abs node whose argument vanishes inside the guard
/// interior; the piece must be split at `split_point` before differentiation.
struct SplitRequiredError : std::runtime_error {
    double split_point;
    explicit SplitRequiredError(double p)
        : std::runtime_error("abs() argument vanishes inside the piece; split required at " +
                             std::to_string(p)),
          split_point(p) {}
};

/// Sampling-based estimation could not reach a verdict.
struct EstimationError : std::runtime_error {
    std::string diagnostics;
    EstimationError(const std::string& what, std::string diag = {})
        : std::runtime_error(what), diagnostics(std::move(diag)) {}
};

} // namespace relsub
