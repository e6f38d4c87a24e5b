#pragma once

// Shared test utilities: random generators, the thin-point extensional
// comparison, finite differences and the swing system fixtures. Oracles
// here stay independent of the classification path they cross-check.

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "thickpave/expr.hpp"
#include "thickpave/interval.hpp"
#include "thickpave/sliding.hpp"
#include "thickpave/thickset.hpp"

namespace tpt {

using namespace thickpave;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Interval random_interval(std::mt19937_64& rng, double span = 10.0) {
    double a = uniform(rng, -span, span);
    double b = uniform(rng, -span, span);
    return Interval(std::min(a, b), std::max(a, b));
}

// Random interval contained in `outer`.
inline Interval random_sub_interval(std::mt19937_64& rng, const Interval& outer) {
    double a = uniform(rng, outer.lo(), outer.hi());
    double b = uniform(rng, outer.lo(), outer.hi());
    return Interval(std::min(a, b), std::max(a, b));
}

inline Box random_box(std::mt19937_64& rng, std::size_t dims, double span = 2.0) {
    std::vector<Interval> comps;
    for (std::size_t i = 0; i < dims; ++i) comps.push_back(random_interval(rng, span));
    return Box(std::move(comps));
}

inline std::vector<double> random_point_in(std::mt19937_64& rng, const Box& box) {
    std::vector<double> x(box.size());
    for (std::size_t i = 0; i < box.size(); ++i)
        x[i] = uniform(rng, box[i].lo(), box[i].hi());
    return x;
}

// --------------------------------------------------------------------------
// Random expressions
// --------------------------------------------------------------------------

inline Expr random_expr(std::mt19937_64& rng, int n_states, int n_params, int depth) {
    std::uniform_int_distribution<int> pick_leaf(0, n_params > 0 ? 2 : 1);
    if (depth <= 0) {
        switch (pick_leaf(rng)) {
        case 0: return constant(uniform(rng, -3.0, 3.0));
        case 1: return state_var(std::uniform_int_distribution<int>(0, n_states - 1)(rng));
        default: return param_var(std::uniform_int_distribution<int>(0, n_params - 1)(rng));
        }
    }
    switch (std::uniform_int_distribution<int>(0, 9)(rng)) {
    case 0: return add(random_expr(rng, n_states, n_params, depth - 1),
                       random_expr(rng, n_states, n_params, depth - 1));
    case 1: return sub(random_expr(rng, n_states, n_params, depth - 1),
                       random_expr(rng, n_states, n_params, depth - 1));
    case 2:
    case 3: return mul(random_expr(rng, n_states, n_params, depth - 1),
                       random_expr(rng, n_states, n_params, depth - 1));
    case 4: return div(random_expr(rng, n_states, n_params, depth - 1),
                       random_expr(rng, n_states, n_params, depth - 1));
    case 5: return neg(random_expr(rng, n_states, n_params, depth - 1));
    case 6: return sqr(random_expr(rng, n_states, n_params, depth - 1));
    case 7: return sin(random_expr(rng, n_states, n_params, depth - 1));
    case 8: return cos(random_expr(rng, n_states, n_params, depth - 1));
    default:
        return pow_int(random_expr(rng, n_states, n_params, depth - 1),
                       std::uniform_int_distribution<int>(2, 4)(rng));
    }
}

// Evaluation that rejects points too close to a sqrt domain edge or a
// division by (near) zero, so finite differences stay well conditioned.
inline std::optional<double> eval_guarded(const Expr& e, std::span<const double> x,
                                          std::span<const double> p, double margin) {
    auto rec = [&](const Expr& sub) { return eval_guarded(sub, x, p, margin); };
    std::optional<double> a, b;
    switch (e->kind) {
    case ExprKind::Constant: return e->value;
    case ExprKind::StateVar: return x[static_cast<std::size_t>(e->index)];
    case ExprKind::ParamVar: return p[static_cast<std::size_t>(e->index)];
    case ExprKind::Add:
        a = rec(e->lhs); b = rec(e->rhs);
        if (!a || !b) return std::nullopt;
        return *a + *b;
    case ExprKind::Sub:
        a = rec(e->lhs); b = rec(e->rhs);
        if (!a || !b) return std::nullopt;
        return *a - *b;
    case ExprKind::Mul:
        a = rec(e->lhs); b = rec(e->rhs);
        if (!a || !b) return std::nullopt;
        return *a * *b;
    case ExprKind::Div:
        a = rec(e->lhs); b = rec(e->rhs);
        if (!a || !b || std::fabs(*b) < margin) return std::nullopt;
        return *a / *b;
    case ExprKind::Neg:
        a = rec(e->lhs);
        if (!a) return std::nullopt;
        return -*a;
    case ExprKind::Sqr:
        a = rec(e->lhs);
        if (!a) return std::nullopt;
        return *a * *a;
    case ExprKind::Sqrt:
        a = rec(e->lhs);
        if (!a || *a < margin) return std::nullopt;
        return std::sqrt(*a);
    case ExprKind::Sin:
        a = rec(e->lhs);
        if (!a) return std::nullopt;
        return std::sin(*a);
    case ExprKind::Cos:
        a = rec(e->lhs);
        if (!a) return std::nullopt;
        return std::cos(*a);
    case ExprKind::PowInt:
        a = rec(e->lhs);
        if (!a) return std::nullopt;
        if (e->exponent < 0 && std::fabs(*a) < margin) return std::nullopt;
        return std::pow(*a, e->exponent);
    }
    return std::nullopt;
}

inline double central_difference(const Expr& e, std::vector<double> x,
                                 std::span<const double> p, int v, double h = 1e-5) {
    x[static_cast<std::size_t>(v)] += h;
    double hi = eval_point(e, x, p);
    x[static_cast<std::size_t>(v)] -= 2.0 * h;
    double lo = eval_point(e, x, p);
    return (hi - lo) / (2.0 * h);
}

// Thin-point agreement of two expressions at random points.
inline bool extensionally_equal(const Expr& a, const Expr& b, int n_states, int n_params,
                                std::mt19937_64& rng, int points = 1000,
                                double tol = 1e-12) {
    for (int i = 0; i < points; ++i) {
        std::vector<double> x(static_cast<std::size_t>(n_states));
        std::vector<double> p(static_cast<std::size_t>(n_params));
        for (auto& v : x) v = uniform(rng, -2.0, 2.0);
        for (auto& v : p) v = uniform(rng, -0.2, 0.2);
        double va = eval_point(a, x, p);
        double vb = eval_point(b, x, p);
        if (std::isnan(va) && std::isnan(vb)) continue;
        if (std::isnan(va) != std::isnan(vb)) return false;
        double scale = std::max({1.0, std::fabs(va), std::fabs(vb)});
        if (std::fabs(va - vb) > tol * scale) return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// Swing fixtures
// --------------------------------------------------------------------------

struct Swing {
    Declarations decl;
    Box params;         // [p1] x [p2] x [p3] = [-0.1, 0.1]^3
    std::vector<Expr> field_a;
    std::vector<Expr> field_b;
    Expr c1;            // (x1+p2)^2 + (x2+p3)^2 - 1
    Expr c2;            // x2 + 0.2 + p3
};

inline Swing make_swing() {
    Swing s;
    s.decl.states = {"x1", "x2"};
    s.decl.params = {"p1", "p2", "p3"};
    s.params = Box({Interval(-0.1, 0.1), Interval(-0.1, 0.1), Interval(-0.1, 0.1)});
    s.field_a = {parse_expr("x2", s.decl), parse_expr("p1 - sin(x1)", s.decl)};
    s.field_b = {parse_expr("x2", s.decl), parse_expr("p1 - sin(x1) - x2", s.decl)};
    s.c1 = parse_expr("(x1 + p2)^2 + (x2 + p3)^2 - 1", s.decl);
    s.c2 = parse_expr("x2 + 0.2 + p3", s.decl);
    return s;
}

inline SlidingSpec swing1_spec(const Swing& s) {
    return {region_leaf("A", s.c1, s.params), s.field_a, s.field_b};
}

inline SlidingSpec swing2_spec(const Swing& s) {
    return {region_or({region_leaf("A1", s.c1, s.params),
                       region_leaf("A2", s.c2, s.params)}),
            s.field_a, s.field_b};
}

// Nominal sliding condition on the unit circle for p = 0, by direct
// substitution of the swing Lie derivatives.
inline bool swing_nominal_sliding(double theta) {
    double st = std::sin(theta);
    double ct = std::cos(theta);
    double lie_a = 2.0 * st * (ct - std::sin(ct));
    double lie_b = 2.0 * st * (ct - std::sin(ct) - st);
    return lie_a >= 0.0 && lie_b <= 0.0;
}

// --------------------------------------------------------------------------
// Sampled thick-set membership (independent of classify)
// --------------------------------------------------------------------------

// Decides lower/upper bound membership of a point by sampling each atom's
// parameter box (corners plus random interior points) and propagating the
// thick algebra's bound formulas.
class MembershipOracle {
public:
    MembershipOracle(std::mt19937_64& rng, int random_params_per_atom = 100)
        : rng_(rng), n_random_(random_params_per_atom) {}

    bool lower(const SetExpr& s, std::span<const double> x) {
        switch (s.kind) {
        case SetKind::AtomLeaf: {
            for (const auto& p : samples_for(*s.atom))
                if (!(eval_point(s.atom->constraint, x, p) <= 0.0)) return false;
            return true;
        }
        case SetKind::Intersect: return lower(*s.left, x) && lower(*s.right, x);
        case SetKind::Union: return lower(*s.left, x) || lower(*s.right, x);
        case SetKind::Complement: return !upper(*s.left, x);
        case SetKind::Boundary: return lower(*s.left, x) && !upper(*s.left, x);
        }
        return false;
    }

    bool upper(const SetExpr& s, std::span<const double> x) {
        switch (s.kind) {
        case SetKind::AtomLeaf: {
            for (const auto& p : samples_for(*s.atom))
                if (eval_point(s.atom->constraint, x, p) <= 0.0) return true;
            return false;
        }
        case SetKind::Intersect: return upper(*s.left, x) && upper(*s.right, x);
        case SetKind::Union: return upper(*s.left, x) || upper(*s.right, x);
        case SetKind::Complement: return !lower(*s.left, x);
        case SetKind::Boundary: return upper(*s.left, x) && !lower(*s.left, x);
        }
        return false;
    }

private:
    const std::vector<std::vector<double>>& samples_for(const Atom& atom) {
        auto [it, inserted] = cache_.try_emplace(&atom);
        if (!inserted) return it->second;
        auto& samples = it->second;
        std::size_t m = atom.param_box.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
            std::vector<double> corner(m);
            for (std::size_t j = 0; j < m; ++j)
                corner[j] = (mask >> j) & 1 ? atom.param_box[j].hi()
                                            : atom.param_box[j].lo();
            samples.push_back(std::move(corner));
        }
        for (int k = 0; k < n_random_; ++k)
            samples.push_back(random_point_in(rng_, atom.param_box));
        return samples;
    }

    std::mt19937_64& rng_;
    int n_random_;
    std::map<const Atom*, std::vector<std::vector<double>>> cache_;
};

} // namespace tpt
