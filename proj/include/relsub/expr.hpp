#pragma once

#include <functional>
#include <memory>
#include <string>

#include "relsub/errors.hpp"
#include "relsub/extreal.hpp"
#include "relsub/geometry.hpp"

namespace relsub {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression tree over { const, var, +, -, *, /, integer powers, exp, abs,
/// neg }. Values are extended reals; division by zero raises EvalError (piece
/// guards are expected to exclude poles).
struct Expr {
    enum class Kind { Const, Var, Add, Sub, Mul, Div, PowInt, Exp, Abs, Neg };
    Kind kind;
    ExtReal cval{0.0};
    int var = 0;
    int ipow = 0;
    ExprPtr a, b;
};

ExprPtr e_const(ExtReal v);
ExprPtr e_var(int i);
ExprPtr e_add(ExprPtr a, ExprPtr b);
ExprPtr e_sub(ExprPtr a, ExprPtr b);
ExprPtr e_mul(ExprPtr a, ExprPtr b);
ExprPtr e_div(ExprPtr a, ExprPtr b);
ExprPtr e_pow(ExprPtr a, int k);
ExprPtr e_exp(ExprPtr a);
ExprPtr e_abs(ExprPtr a);
ExprPtr e_neg(ExprPtr a);

ExtReal eval_expr(const Expr& e, const Vec& x);

/// Decides the sign (+1/-1) of an Abs argument on the region of interest;
/// consulted once per Abs node during differentiation.
using AbsSignResolver = std::function<int(const Expr& arg)>;

/// d/d(var) with Abs nodes resolved to sign * arg' through the resolver.
ExprPtr derivative(const ExprPtr& e, int var, const AbsSignResolver& sign_of);

/// Apply the substitution var_i -> subs[i] (an expression per variable).
ExprPtr substitute(const ExprPtr& e, const std::vector<ExprPtr>& subs);

/// Maximum variable index referenced, or -1 for constant expressions.
int max_var(const Expr& e);

/// Collect pointers to every node of the given kind.
void collect_nodes(const ExprPtr& e, Expr::Kind kind, std::vector<ExprPtr>& out);

std::string to_string(const ExprPtr& e);

/// Parse standard infix with functions abs, exp, pow(e, k); variables are
/// x|y|z or x1|x2|x3; `inf` is the extended-real infinity literal.
ExprPtr parse_expr(const std::string& text);

} // namespace relsub
