#include "relsub/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace relsub {

namespace {

ExprPtr node(Expr e) { return std::make_shared<Expr>(std::move(e)); }

}  // namespace

ExprPtr e_const(ExtReal v) {
    Expr e;
    e.kind = Expr::Kind::Const;
    e.cval = v;
    return node(std::move(e));
}

ExprPtr e_var(int i) {
    Expr e;
    e.kind = Expr::Kind::Var;
    e.var = i;
    return node(std::move(e));
}

namespace {

ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = k;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}

ExprPtr unary(Expr::Kind k, ExprPtr a) {
    Expr e;
    e.kind = k;
    e.a = std::move(a);
    return node(std::move(e));
}

}  // namespace

ExprPtr e_add(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Add, std::move(a), std::move(b)); }
ExprPtr e_sub(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Sub, std::move(a), std::move(b)); }
ExprPtr e_mul(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Mul, std::move(a), std::move(b)); }
ExprPtr e_div(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Div, std::move(a), std::move(b)); }

ExprPtr e_pow(ExprPtr a, int k) {
    if (k < 0) throw ParseError("pow: exponent must be a nonnegative integer");
    Expr e;
    e.kind = Expr::Kind::PowInt;
    e.a = std::move(a);
    e.ipow = k;
    return node(std::move(e));
}

ExprPtr e_exp(ExprPtr a) { return unary(Expr::Kind::Exp, std::move(a)); }
ExprPtr e_abs(ExprPtr a) { return unary(Expr::Kind::Abs, std::move(a)); }
ExprPtr e_neg(ExprPtr a) { return unary(Expr::Kind::Neg, std::move(a)); }

ExtReal eval_expr(const Expr& e, const Vec& x) {
    switch (e.kind) {
        case Expr::Kind::Const:
            return e.cval;
        case Expr::Kind::Var:
            return ExtReal(x[e.var]);
        case Expr::Kind::Add:
            return ext_add(eval_expr(*e.a, x), eval_expr(*e.b, x));
        case Expr::Kind::Sub:
            return ext_sub(eval_expr(*e.a, x), eval_expr(*e.b, x));
        case Expr::Kind::Mul:
            return ext_mul(eval_expr(*e.a, x), eval_expr(*e.b, x));
        case Expr::Kind::Div: {
            ExtReal num = eval_expr(*e.a, x), den = eval_expr(*e.b, x);
            if (den.raw() == 0.0) throw EvalError("division by zero");
            if (!num.is_finite() && !den.is_finite()) throw EvalError("inf/inf is undefined");
            if (!den.is_finite()) return ExtReal(0.0);
            if (!num.is_finite())
                return (num.raw() > 0) == (den.raw() > 0) ? ExtReal::pos_inf() : ExtReal::neg_inf();
            return ExtReal(num.raw() / den.raw());
        }
        case Expr::Kind::PowInt: {
            ExtReal v = eval_expr(*e.a, x);
            ExtReal acc(1.0);
            for (int i = 0; i < e.ipow; ++i) acc = ext_mul(acc, v);
            return acc;
        }
        case Expr::Kind::Exp: {
            ExtReal v = eval_expr(*e.a, x);
            if (v.is_pos_inf()) return ExtReal::pos_inf();
            if (v.is_neg_inf()) return ExtReal(0.0);
            return ExtReal(std::exp(v.raw()));
        }
        case Expr::Kind::Abs: {
            ExtReal v = eval_expr(*e.a, x);
            return v.is_finite() ? ExtReal(std::abs(v.raw())) : ExtReal::pos_inf();
        }
        case Expr::Kind::Neg:
            return ext_neg(eval_expr(*e.a, x));
    }
    throw EvalError("corrupt expression node");
}

ExprPtr derivative(const ExprPtr& e, int var, const AbsSignResolver& sign_of) {
    switch (e->kind) {
        case Expr::Kind::Const:
            return e_const(ExtReal(0.0));
        case Expr::Kind::Var:
            return e_const(ExtReal(e->var == var ? 1.0 : 0.0));
        case Expr::Kind::Add:
            return e_add(derivative(e->a, var, sign_of), derivative(e->b, var, sign_of));
        case Expr::Kind::Sub:
            return e_sub(derivative(e->a, var, sign_of), derivative(e->b, var, sign_of));
        case Expr::Kind::Mul:
            return e_add(e_mul(derivative(e->a, var, sign_of), e->b),
                         e_mul(e->a, derivative(e->b, var, sign_of)));
        case Expr::Kind::Div:
            // (a'b - ab') / b^2
            return e_div(e_sub(e_mul(derivative(e->a, var, sign_of), e->b),
                               e_mul(e->a, derivative(e->b, var, sign_of))),
                         e_pow(e->b, 2));
        case Expr::Kind::PowInt:
            if (e->ipow == 0) return e_const(ExtReal(0.0));
            return e_mul(e_mul(e_const(ExtReal(double(e->ipow))), e_pow(e->a, e->ipow - 1)),
                         derivative(e->a, var, sign_of));
        case Expr::Kind::Exp:
            return e_mul(e_exp(e->a), derivative(e->a, var, sign_of));
        case Expr::Kind::Abs: {
            int s = sign_of(*e->a);
            ExprPtr da = derivative(e->a, var, sign_of);
            return s >= 0 ? da : e_neg(da);
        }
        case Expr::Kind::Neg:
            return e_neg(derivative(e->a, var, sign_of));
    }
    throw EvalError("corrupt expression node");
}

ExprPtr substitute(const ExprPtr& e, const std::vector<ExprPtr>& subs) {
    switch (e->kind) {
        case Expr::Kind::Const:
            return e;
        case Expr::Kind::Var:
            return subs.at(e->var);
        case Expr::Kind::Add:
            return e_add(substitute(e->a, subs), substitute(e->b, subs));
        case Expr::Kind::Sub:
            return e_sub(substitute(e->a, subs), substitute(e->b, subs));
        case Expr::Kind::Mul:
            return e_mul(substitute(e->a, subs), substitute(e->b, subs));
        case Expr::Kind::Div:
            return e_div(substitute(e->a, subs), substitute(e->b, subs));
        case Expr::Kind::PowInt:
            return e_pow(substitute(e->a, subs), e->ipow);
        case Expr::Kind::Exp:
            return e_exp(substitute(e->a, subs));
        case Expr::Kind::Abs:
            return e_abs(substitute(e->a, subs));
        case Expr::Kind::Neg:
            return e_neg(substitute(e->a, subs));
    }
    throw EvalError("corrupt expression node");
}

int max_var(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Const:
            return -1;
        case Expr::Kind::Var:
            return e.var;
        default: {
            int m = e.a ? max_var(*e.a) : -1;
            if (e.b) m = std::max(m, max_var(*e.b));
            return m;
        }
    }
}

void collect_nodes(const ExprPtr& e, Expr::Kind kind, std::vector<ExprPtr>& out) {
    if (!e) return;
    if (e->kind == kind) out.push_back(e);
    collect_nodes(e->a, kind, out);
    collect_nodes(e->b, kind, out);
}

std::string to_string(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const:
            return to_string(e->cval);
        case Expr::Kind::Var: {
            static const char* names[3] = {"x", "y", "z"};
            return names[e->var];
        }
        case Expr::Kind::Add:
            return "(" + to_string(e->a) + " + " + to_string(e->b) + ")";
        case Expr::Kind::Sub:
            return "(" + to_string(e->a) + " - " + to_string(e->b) + ")";
        case Expr::Kind::Mul:
            return "(" + to_string(e->a) + " * " + to_string(e->b) + ")";
        case Expr::Kind::Div:
            return "(" + to_string(e->a) + " / " + to_string(e->b) + ")";
        case Expr::Kind::PowInt:
            return "pow(" + to_string(e->a) + ", " + std::to_string(e->ipow) + ")";
        case Expr::Kind::Exp:
            return "exp(" + to_string(e->a) + ")";
        case Expr::Kind::Abs:
            return "abs(" + to_string(e->a) + ")";
        case Expr::Kind::Neg:
            return "(-" + to_string(e->a) + ")";
    }
    return "?";
}

namespace {

struct Parser {
    std::string s;
    std::size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return i < s.size() ? s[i] : '\0';
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("expr parse error at position " + std::to_string(i) + ": " + msg +
                         " in \"" + s + "\"");
    }

    ExprPtr parse() {
        ExprPtr e = expr();
        skip();
        if (i != s.size()) fail("trailing input");
        return e;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (eat('+'))
                e = e_add(e, term());
            else if (eat('-'))
                e = e_sub(e, term());
            else
                return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (eat('*'))
                e = e_mul(e, factor());
            else if (eat('/'))
                e = e_div(e, factor());
            else
                return e;
        }
    }

    ExprPtr factor() {
        if (eat('-')) return e_neg(factor());
        if (eat('+')) return factor();
        ExprPtr e = primary();
        if (eat('^')) {
            int k = parse_int();
            e = e_pow(e, k);
        }
        return e;
    }

    int parse_int() {
        skip();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) fail("expected integer exponent");
        return std::stoi(s.substr(start, i - start));
    }

    ExprPtr primary() {
        skip();
        if (i >= s.size()) fail("unexpected end of input");
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t pos = 0;
            double v = std::stod(s.substr(i), &pos);
            i += pos;
            return e_const(ExtReal(v));
        }
        if (c == '(') {
            ++i;
            ExprPtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            std::string id = s.substr(start, i - start);
            if (id == "inf") return e_const(ExtReal::pos_inf());
            if (id == "x") return e_var(0);
            if (id == "y") return e_var(1);
            if (id == "z") return e_var(2);
            if (id == "x1") return e_var(0);
            if (id == "x2") return e_var(1);
            if (id == "x3") return e_var(2);
            if (id == "abs" || id == "exp" || id == "pow") {
                if (!eat('(')) fail("expected '(' after " + id);
                ExprPtr arg = expr();
                if (id == "pow") {
                    if (!eat(',')) fail("expected ',' in pow");
                    int k = parse_int();
                    if (!eat(')')) fail("expected ')'");
                    return e_pow(arg, k);
                }
                if (!eat(')')) fail("expected ')'");
                return id == "abs" ? e_abs(arg) : e_exp(arg);
            }
            fail("unknown identifier '" + id + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

ExprPtr parse_expr(const std::string& text) {
    Parser p;
    p.s = text;
    return p.parse();
}

} // namespace relsub
