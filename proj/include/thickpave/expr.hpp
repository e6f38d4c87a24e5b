#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "thickpave/interval.hpp"

namespace thickpave {

enum class ExprKind {
    Constant,
    StateVar,
    ParamVar,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Sqr,
    Sqrt,
    Sin,
    Cos,
    PowInt,
};

struct ExprNode;

// Expressions are immutable trees shared by value; copies are cheap.
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    double value = 0.0;  // Constant
    int index = 0;       // StateVar / ParamVar
    int exponent = 0;    // PowInt
    Expr lhs;
    Expr rhs;
};

// Node constructors. Binary/unary builders fold constant zeros and ones
// (0 + e -> e, 1 * e -> e, e^1 -> e, ...); nothing beyond that.
Expr constant(double v);
Expr state_var(int index);
Expr param_var(int index);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr neg(Expr a);
Expr sqr(Expr a);
Expr sqrt(Expr a);
Expr sin(Expr a);
Expr cos(Expr a);
Expr pow_int(Expr a, int exponent);

// Declared variable slots an expression is parsed and printed against.
struct Declarations {
    std::vector<std::string> states;
    std::vector<std::string> params;

    // Returns {is_state, index}; throws if the name is unknown.
    std::pair<bool, int> lookup(const std::string& name) const;
    bool is_declared(const std::string& name) const;
};

// Evaluation environment: a state box paired with a parameter box.
struct Env {
    Box state;
    Box params;
};

/**
 * Parses an infix expression against the declared variables.
 * Precedence: ^  >  unary -  >  * /  >  + -, with sin, cos, sqrt, sqr as
 * function applications and '^' taking an integer literal exponent.
 * Throws ParseError carrying line/column (line defaults to `line`).
 */
Expr parse_expr(const std::string& text, const Declarations& decl, int line = 1);

// Natural inclusion function: a sound enclosure of e over env. An empty
// state or parameter box, or a domain violation everywhere, yields empty.
Interval eval_interval(const Expr& e, const Env& env);

// Plain double evaluation at a thin point; NaN on domain violations.
double eval_point(const Expr& e, std::span<const double> x, std::span<const double> p);

// Symbolic partial derivative with respect to state variable `v`.
Expr differentiate(const Expr& e, int v);

// Sum over i of d(c)/dx_i * field[i]. Throws std::invalid_argument when c
// references a state variable the field does not cover.
Expr lie_derivative(const Expr& c, const std::vector<Expr>& field);

// Highest referenced slot + 1, or 0 when none appear.
int state_arity(const Expr& e);
int param_arity(const Expr& e);

// Sorted list of parameter slots that occur in e.
std::vector<int> used_params(const Expr& e);

// Rewrites parameter indices through old -> new; missing keys throw.
Expr remap_params(const Expr& e, const std::map<int, int>& mapping);

// Infix rendering that parses back to an equivalent expression.
std::string to_string(const Expr& e, const Declarations& decl);

} // namespace thickpave
