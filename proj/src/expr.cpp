#include "thickpave/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "thickpave/errors.hpp"

namespace thickpave {

namespace {

Expr make_node(ExprKind kind, Expr lhs = nullptr, Expr rhs = nullptr, int exponent = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->exponent = exponent;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

bool is_const(const Expr& e, double v) {
    return e->kind == ExprKind::Constant && e->value == v;
}

} // namespace

Expr constant(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Constant;
    n->value = v;
    return n;
}

Expr state_var(int index) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::StateVar;
    n->index = index;
    return n;
}

Expr param_var(int index) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::ParamVar;
    n->index = index;
    return n;
}

Expr add(Expr a, Expr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return make_node(ExprKind::Add, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return neg(std::move(b));
    return make_node(ExprKind::Sub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return make_node(ExprKind::Mul, std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
    if (is_const(b, 1.0)) return a;
    if (is_const(a, 0.0)) return constant(0.0);
    return make_node(ExprKind::Div, std::move(a), std::move(b));
}

Expr neg(Expr a) {
    if (is_const(a, 0.0)) return a;
    return make_node(ExprKind::Neg, std::move(a));
}

Expr sqr(Expr a) { return make_node(ExprKind::Sqr, std::move(a)); }
Expr sqrt(Expr a) { return make_node(ExprKind::Sqrt, std::move(a)); }
Expr sin(Expr a) { return make_node(ExprKind::Sin, std::move(a)); }
Expr cos(Expr a) { return make_node(ExprKind::Cos, std::move(a)); }

Expr pow_int(Expr a, int exponent) {
    if (exponent == 0) return constant(1.0);
    if (exponent == 1) return a;
    if (exponent == 2) return sqr(std::move(a));
    return make_node(ExprKind::PowInt, std::move(a), nullptr, exponent);
}

std::pair<bool, int> Declarations::lookup(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return {true, static_cast<int>(i)};
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i] == name) return {false, static_cast<int>(i)};
    throw std::out_of_range("unknown identifier '" + name + "'");
}

bool Declarations::is_declared(const std::string& name) const {
    return std::find(states.begin(), states.end(), name) != states.end() ||
           std::find(params.begin(), params.end(), name) != params.end();
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
    const std::string& text;
    const Declarations& decl;
    int line;
    std::size_t pos = 0;

    [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
        throw ParseError(line, static_cast<int>(at) + 1, msg);
    }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(pos, std::string("expected '") + c + "'");
    }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string read_ident(Lexer& lx) {
    lx.skip_ws();
    std::size_t start = lx.pos;
    while (lx.pos < lx.text.size() && ident_char(lx.text[lx.pos])) ++lx.pos;
    return lx.text.substr(start, lx.pos - start);
}

double read_number(Lexer& lx) {
    lx.skip_ws();
    std::size_t start = lx.pos;
    const char* begin = lx.text.c_str() + start;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) lx.fail(start, "expected a number");
    lx.pos = start + static_cast<std::size_t>(end - begin);
    return v;
}

Expr parse_sum(Lexer& lx);

Expr parse_primary(Lexer& lx) {
    lx.skip_ws();
    if (lx.pos >= lx.text.size()) lx.fail(lx.pos, "unexpected end of expression");
    char c = lx.text[lx.pos];
    if (c == '(') {
        ++lx.pos;
        Expr e = parse_sum(lx);
        lx.expect(')');
        return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
        return constant(read_number(lx));
    if (ident_start(c)) {
        std::size_t at = lx.pos;
        std::string name = read_ident(lx);
        if (lx.peek() == '(') {
            ++lx.pos;
            Expr arg = parse_sum(lx);
            lx.expect(')');
            if (name == "sin") return sin(arg);
            if (name == "cos") return cos(arg);
            if (name == "sqrt") return sqrt(arg);
            if (name == "sqr") return sqr(arg);
            lx.fail(at, "unknown function '" + name + "'");
        }
        try {
            auto [is_state, index] = lx.decl.lookup(name);
            return is_state ? state_var(index) : param_var(index);
        } catch (const std::out_of_range&) {
            lx.fail(at, "unknown identifier '" + name + "'");
        }
    }
    lx.fail(lx.pos, std::string("unexpected character '") + c + "'");
}

int parse_exponent(Lexer& lx) {
    lx.skip_ws();
    std::size_t at = lx.pos;
    bool negative = false;
    if (lx.pos < lx.text.size() && lx.text[lx.pos] == '-') {
        negative = true;
        ++lx.pos;
    }
    if (lx.pos >= lx.text.size() || !std::isdigit(static_cast<unsigned char>(lx.text[lx.pos])))
        lx.fail(at, "exponent must be an integer literal");
    long v = 0;
    while (lx.pos < lx.text.size() && std::isdigit(static_cast<unsigned char>(lx.text[lx.pos]))) {
        v = v * 10 + (lx.text[lx.pos] - '0');
        if (v > 1000) lx.fail(at, "exponent too large");
        ++lx.pos;
    }
    return static_cast<int>(negative ? -v : v);
}

Expr parse_power(Lexer& lx) {
    Expr base = parse_primary(lx);
    if (lx.peek() == '^') {
        ++lx.pos;
        return pow_int(base, parse_exponent(lx));
    }
    return base;
}

Expr parse_unary(Lexer& lx) {
    if (lx.peek() == '-') {
        ++lx.pos;
        return neg(parse_unary(lx));
    }
    return parse_power(lx);
}

Expr parse_product(Lexer& lx) {
    Expr e = parse_unary(lx);
    for (;;) {
        char c = lx.peek();
        if (c == '*') {
            ++lx.pos;
            e = mul(e, parse_unary(lx));
        } else if (c == '/') {
            ++lx.pos;
            e = div(e, parse_unary(lx));
        } else {
            return e;
        }
    }
}

Expr parse_sum(Lexer& lx) {
    Expr e = parse_product(lx);
    for (;;) {
        char c = lx.peek();
        if (c == '+') {
            ++lx.pos;
            e = add(e, parse_product(lx));
        } else if (c == '-') {
            ++lx.pos;
            e = sub(e, parse_product(lx));
        } else {
            return e;
        }
    }
}

} // namespace

Expr parse_expr(const std::string& text, const Declarations& decl, int line) {
    Lexer lx{text, decl, line};
    Expr e = parse_sum(lx);
    if (!lx.eof()) lx.fail(lx.pos, "trailing input after expression");
    return e;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

Interval eval_rec(const Expr& e, const Env& env) {
    switch (e->kind) {
    case ExprKind::Constant: return Interval(e->value);
    case ExprKind::StateVar:
        if (e->index < 0 || static_cast<std::size_t>(e->index) >= env.state.size())
            throw std::invalid_argument("state variable index out of range");
        return env.state[static_cast<std::size_t>(e->index)];
    case ExprKind::ParamVar:
        if (e->index < 0 || static_cast<std::size_t>(e->index) >= env.params.size())
            throw std::invalid_argument("parameter index out of range");
        return env.params[static_cast<std::size_t>(e->index)];
    case ExprKind::Add: return add(eval_rec(e->lhs, env), eval_rec(e->rhs, env));
    case ExprKind::Sub: return sub(eval_rec(e->lhs, env), eval_rec(e->rhs, env));
    case ExprKind::Mul: return mul(eval_rec(e->lhs, env), eval_rec(e->rhs, env));
    case ExprKind::Div: return div(eval_rec(e->lhs, env), eval_rec(e->rhs, env));
    case ExprKind::Neg: return neg(eval_rec(e->lhs, env));
    case ExprKind::Sqr: return sqr(eval_rec(e->lhs, env));
    case ExprKind::Sqrt: return sqrt(eval_rec(e->lhs, env));
    case ExprKind::Sin: return sin(eval_rec(e->lhs, env));
    case ExprKind::Cos: return cos(eval_rec(e->lhs, env));
    case ExprKind::PowInt: return pow_int(eval_rec(e->lhs, env), e->exponent);
    }
    throw std::logic_error("unreachable expr kind");
}

} // namespace

Interval eval_interval(const Expr& e, const Env& env) {
    if (env.state.is_empty() || env.params.is_empty()) return Interval::empty();
    return eval_rec(e, env);
}

double eval_point(const Expr& e, std::span<const double> x, std::span<const double> p) {
    switch (e->kind) {
    case ExprKind::Constant: return e->value;
    case ExprKind::StateVar:
        if (e->index < 0 || static_cast<std::size_t>(e->index) >= x.size())
            throw std::invalid_argument("state variable index out of range");
        return x[static_cast<std::size_t>(e->index)];
    case ExprKind::ParamVar:
        if (e->index < 0 || static_cast<std::size_t>(e->index) >= p.size())
            throw std::invalid_argument("parameter index out of range");
        return p[static_cast<std::size_t>(e->index)];
    case ExprKind::Add: return eval_point(e->lhs, x, p) + eval_point(e->rhs, x, p);
    case ExprKind::Sub: return eval_point(e->lhs, x, p) - eval_point(e->rhs, x, p);
    case ExprKind::Mul: return eval_point(e->lhs, x, p) * eval_point(e->rhs, x, p);
    case ExprKind::Div: return eval_point(e->lhs, x, p) / eval_point(e->rhs, x, p);
    case ExprKind::Neg: return -eval_point(e->lhs, x, p);
    case ExprKind::Sqr: {
        double v = eval_point(e->lhs, x, p);
        return v * v;
    }
    case ExprKind::Sqrt: return std::sqrt(eval_point(e->lhs, x, p));
    case ExprKind::Sin: return std::sin(eval_point(e->lhs, x, p));
    case ExprKind::Cos: return std::cos(eval_point(e->lhs, x, p));
    case ExprKind::PowInt: return std::pow(eval_point(e->lhs, x, p), e->exponent);
    }
    throw std::logic_error("unreachable expr kind");
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

Expr differentiate(const Expr& e, int v) {
    switch (e->kind) {
    case ExprKind::Constant:
    case ExprKind::ParamVar:
        return constant(0.0);
    case ExprKind::StateVar:
        return constant(e->index == v ? 1.0 : 0.0);
    case ExprKind::Add:
        return add(differentiate(e->lhs, v), differentiate(e->rhs, v));
    case ExprKind::Sub:
        return sub(differentiate(e->lhs, v), differentiate(e->rhs, v));
    case ExprKind::Mul:
        return add(mul(differentiate(e->lhs, v), e->rhs),
                   mul(e->lhs, differentiate(e->rhs, v)));
    case ExprKind::Div:
        return div(sub(mul(differentiate(e->lhs, v), e->rhs),
                       mul(e->lhs, differentiate(e->rhs, v))),
                   sqr(e->rhs));
    case ExprKind::Neg:
        return neg(differentiate(e->lhs, v));
    case ExprKind::Sqr:
        return mul(mul(constant(2.0), e->lhs), differentiate(e->lhs, v));
    case ExprKind::Sqrt:
        return div(differentiate(e->lhs, v), mul(constant(2.0), sqrt(e->lhs)));
    case ExprKind::Sin:
        return mul(cos(e->lhs), differentiate(e->lhs, v));
    case ExprKind::Cos:
        return neg(mul(sin(e->lhs), differentiate(e->lhs, v)));
    case ExprKind::PowInt:
        return mul(mul(constant(static_cast<double>(e->exponent)),
                       pow_int(e->lhs, e->exponent - 1)),
                   differentiate(e->lhs, v));
    }
    throw std::logic_error("unreachable expr kind");
}

Expr lie_derivative(const Expr& c, const std::vector<Expr>& field) {
    if (state_arity(c) > static_cast<int>(field.size()))
        throw std::invalid_argument(
            "lie_derivative: constraint references more state variables than the field covers");
    Expr sum = constant(0.0);
    for (std::size_t i = 0; i < field.size(); ++i)
        sum = add(sum, mul(differentiate(c, static_cast<int>(i)), field[i]));
    return sum;
}

// ---------------------------------------------------------------------------
// Introspection
// ---------------------------------------------------------------------------

namespace {

void walk(const Expr& e, int& max_state, int& max_param, std::set<int>* params) {
    if (e->kind == ExprKind::StateVar) max_state = std::max(max_state, e->index + 1);
    if (e->kind == ExprKind::ParamVar) {
        max_param = std::max(max_param, e->index + 1);
        if (params) params->insert(e->index);
    }
    if (e->lhs) walk(e->lhs, max_state, max_param, params);
    if (e->rhs) walk(e->rhs, max_state, max_param, params);
}

} // namespace

int state_arity(const Expr& e) {
    int s = 0, p = 0;
    walk(e, s, p, nullptr);
    return s;
}

int param_arity(const Expr& e) {
    int s = 0, p = 0;
    walk(e, s, p, nullptr);
    return p;
}

std::vector<int> used_params(const Expr& e) {
    int s = 0, p = 0;
    std::set<int> used;
    walk(e, s, p, &used);
    return {used.begin(), used.end()};
}

Expr remap_params(const Expr& e, const std::map<int, int>& mapping) {
    switch (e->kind) {
    case ExprKind::Constant:
    case ExprKind::StateVar:
        return e;
    case ExprKind::ParamVar: {
        auto it = mapping.find(e->index);
        if (it == mapping.end())
            throw std::invalid_argument("remap_params: unmapped parameter index");
        return param_var(it->second);
    }
    default: {
        auto n = std::make_shared<ExprNode>(*e);
        if (e->lhs) n->lhs = remap_params(e->lhs, mapping);
        if (e->rhs) n->rhs = remap_params(e->rhs, mapping);
        return n;
    }
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Precedence levels used for parenthesization; mirrors the parser.
int precedence(const Expr& e) {
    switch (e->kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::PowInt:
    case ExprKind::Sqr: return 4;
    case ExprKind::Constant:
        return e->value < 0.0 ? 3 : 5;
    default: return 5;
    }
}

std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string print(const Expr& e, const Declarations& decl);

std::string wrap(const Expr& e, const Declarations& decl, int min_prec) {
    std::string s = print(e, decl);
    if (precedence(e) < min_prec) return "(" + s + ")";
    return s;
}

std::string print(const Expr& e, const Declarations& decl) {
    switch (e->kind) {
    case ExprKind::Constant: return num_str(e->value);
    case ExprKind::StateVar: {
        auto i = static_cast<std::size_t>(e->index);
        return i < decl.states.size() ? decl.states[i] : "x@" + std::to_string(e->index);
    }
    case ExprKind::ParamVar: {
        auto i = static_cast<std::size_t>(e->index);
        return i < decl.params.size() ? decl.params[i] : "p@" + std::to_string(e->index);
    }
    case ExprKind::Add:
        return wrap(e->lhs, decl, 1) + " + " + wrap(e->rhs, decl, 2);
    case ExprKind::Sub:
        return wrap(e->lhs, decl, 1) + " - " + wrap(e->rhs, decl, 2);
    case ExprKind::Mul:
        return wrap(e->lhs, decl, 2) + "*" + wrap(e->rhs, decl, 3);
    case ExprKind::Div:
        return wrap(e->lhs, decl, 2) + "/" + wrap(e->rhs, decl, 3);
    case ExprKind::Neg:
        return "-" + wrap(e->lhs, decl, 3);
    case ExprKind::Sqr:
        return wrap(e->lhs, decl, 5) + "^2";
    case ExprKind::Sqrt:
        return "sqrt(" + print(e->lhs, decl) + ")";
    case ExprKind::Sin:
        return "sin(" + print(e->lhs, decl) + ")";
    case ExprKind::Cos:
        return "cos(" + print(e->lhs, decl) + ")";
    case ExprKind::PowInt: {
        std::string ex = std::to_string(e->exponent);
        if (e->exponent < 0) ex = "-" + std::to_string(-e->exponent);
        return wrap(e->lhs, decl, 5) + "^" + ex;
    }
    }
    throw std::logic_error("unreachable expr kind");
}

} // namespace

std::string to_string(const Expr& e, const Declarations& decl) {
    return print(e, decl);
}

} // namespace thickpave
