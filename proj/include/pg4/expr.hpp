#pragma once

#include <memory>
#include <string>

#include "pg4/jet.hpp"

namespace pg4 {

/// AST for coordinate expressions in one free parameter.
struct Expr {
    enum class Kind {
        Number,
        Parameter,
        Pi,
        E,
        Neg,
        Sin,
        Cos,
        Sinh,
        Cosh,
        Exp,
        Ln,
        Sqrt,
        Add,
        Sub,
        Mul,
        Div,
        Pow,  // exponent restricted to a number literal, stored in `number`
    };

    Kind kind;
    double number = 0.0;
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Parse one expression; `param` is the only admissible free symbol.
ExprPtr parse_expression(const std::string& text, const std::string& param);

std::string print_expr(const Expr& e, const std::string& param = "s");
bool expr_equal(const Expr& a, const Expr& b);

/// Jet of the expression at s0, by structural recursion.
Jet eval_jet(const Expr& e, double s0, int order);

/// Plain value (order-0 jet).
double eval_value(const Expr& e, double s0);

struct CurveDef {
    std::string label;
    std::string param;  // "s" (arclength candidate) or "t"
    ExprPtr x, y, z, w;
    double domain_min = 0.0;
    double domain_max = 0.0;
};

/// Parse the curve text grammar:
///   x=<expr>; y=<expr>; z=<expr>; w=<expr> on [a,b]
/// The parameter symbol (s or t) is declared implicitly by use.
CurveDef parse_curve(const std::string& text);

std::string print_curve(const CurveDef& c);

}  // namespace pg4
