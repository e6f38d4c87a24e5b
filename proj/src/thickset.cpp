#include "thickpave/thickset.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace thickpave {

namespace {

// Tolerance of the thin point oracle; not part of the guaranteed
// computation.
constexpr double kOnTol = 1e-9;

} // namespace

const char* box_class_name(BoxClass c) {
    switch (c) {
    case BoxClass::IN: return "IN";
    case BoxClass::PEN: return "PEN";
    case BoxClass::OUT: return "OUT";
    case BoxClass::UNKNOWN: return "UNKNOWN";
    }
    return "?";
}

std::optional<BoxClass> box_class_from_name(const std::string& name) {
    if (name == "IN") return BoxClass::IN;
    if (name == "PEN") return BoxClass::PEN;
    if (name == "OUT") return BoxClass::OUT;
    if (name == "UNKNOWN") return BoxClass::UNKNOWN;
    return std::nullopt;
}

Atom make_atom(const Expr& constraint, const Box& declared_params) {
    std::vector<int> used = used_params(constraint);
    std::map<int, int> remap;
    std::vector<Interval> slots;
    slots.reserve(used.size());
    for (std::size_t i = 0; i < used.size(); ++i) {
        int src = used[i];
        if (src < 0 || static_cast<std::size_t>(src) >= declared_params.size())
            throw std::invalid_argument(
                "make_atom: constraint references an undeclared parameter slot");
        remap[src] = static_cast<int>(i);
        slots.push_back(declared_params[static_cast<std::size_t>(src)]);
    }
    Atom a;
    a.constraint = used.empty() ? constraint : remap_params(constraint, remap);
    a.param_box = Box(std::move(slots));
    a.param_sources = std::move(used);
    return a;
}

SetPtr atom_set(Atom a) {
    auto n = std::make_shared<SetExpr>();
    n->kind = SetKind::AtomLeaf;
    n->atom = std::move(a);
    return n;
}

namespace {

SetPtr node(SetKind kind, SetPtr l, SetPtr r = nullptr) {
    auto n = std::make_shared<SetExpr>();
    n->kind = kind;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

} // namespace

SetPtr intersect(SetPtr a, SetPtr b) { return node(SetKind::Intersect, std::move(a), std::move(b)); }
SetPtr unite(SetPtr a, SetPtr b) { return node(SetKind::Union, std::move(a), std::move(b)); }
SetPtr complement(SetPtr a) { return node(SetKind::Complement, std::move(a)); }
SetPtr boundary(SetPtr a) { return node(SetKind::Boundary, std::move(a)); }

void visit_atoms(const SetPtr& s, const std::function<void(const Atom&)>& fn) {
    if (!s) return;
    if (s->kind == SetKind::AtomLeaf) fn(*s->atom);
    visit_atoms(s->left, fn);
    visit_atoms(s->right, fn);
}

BoxClass atom_classify(const Atom& a, const Box& box) {
    if (box.is_empty()) throw std::invalid_argument("atom_classify: empty box");
    Interval range = eval_interval(a.constraint, Env{box, a.param_box});
    if (range.is_empty()) return BoxClass::OUT;  // constraint undefined everywhere
    if (range.hi() <= 0.0) return BoxClass::IN;
    if (range.lo() > 0.0) return BoxClass::OUT;

    // Penumbra proof from the parameter-box corners: one corner where the
    // constraint holds for every x keeps the box inside the superset
    // bound; one corner where it fails for every x keeps the box clear of
    // the subset bound.
    std::size_t m = a.param_box.size();
    if (m == 0 || m > 20) return BoxClass::UNKNOWN;
    bool some_nonpos = false;
    bool some_pos = false;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<Interval> corner(m);
        for (std::size_t j = 0; j < m; ++j) {
            const Interval& pj = a.param_box[j];
            corner[j] = Interval((mask >> j) & 1 ? pj.hi() : pj.lo());
        }
        Interval at_corner = eval_interval(a.constraint, Env{box, Box(std::move(corner))});
        if (at_corner.is_empty()) {
            some_pos = true;  // nowhere satisfied at this corner
        } else {
            if (at_corner.hi() <= 0.0) some_nonpos = true;
            if (at_corner.lo() > 0.0) some_pos = true;
        }
        if (some_nonpos && some_pos) return BoxClass::PEN;
    }
    return BoxClass::UNKNOWN;
}

BoxClass combine_intersect(BoxClass a, BoxClass b) {
    if (a == BoxClass::OUT || b == BoxClass::OUT) return BoxClass::OUT;
    if (a == BoxClass::UNKNOWN || b == BoxClass::UNKNOWN) return BoxClass::UNKNOWN;
    if (a == BoxClass::PEN || b == BoxClass::PEN) return BoxClass::PEN;
    return BoxClass::IN;
}

BoxClass combine_union(BoxClass a, BoxClass b) {
    if (a == BoxClass::IN || b == BoxClass::IN) return BoxClass::IN;
    if (a == BoxClass::UNKNOWN || b == BoxClass::UNKNOWN) return BoxClass::UNKNOWN;
    if (a == BoxClass::PEN || b == BoxClass::PEN) return BoxClass::PEN;
    return BoxClass::OUT;
}

BoxClass combine_complement(BoxClass a) {
    switch (a) {
    case BoxClass::IN: return BoxClass::OUT;
    case BoxClass::OUT: return BoxClass::IN;
    default: return a;
    }
}

BoxClass combine_boundary(BoxClass a) {
    // boundary(X) = X intersect complement(X) at verdict level.
    return combine_intersect(a, combine_complement(a));
}

BoxClass combine(SetOp op, BoxClass c1, std::optional<BoxClass> c2) {
    switch (op) {
    case SetOp::Intersect:
        if (!c2) throw std::invalid_argument("combine: intersect needs two verdicts");
        return combine_intersect(c1, *c2);
    case SetOp::Union:
        if (!c2) throw std::invalid_argument("combine: union needs two verdicts");
        return combine_union(c1, *c2);
    case SetOp::Complement:
        if (c2) throw std::invalid_argument("combine: complement takes one verdict");
        return combine_complement(c1);
    }
    throw std::logic_error("unreachable set op");
}

BoxClass classify(const SetPtr& s, const Box& box) {
    switch (s->kind) {
    case SetKind::AtomLeaf:
        return atom_classify(*s->atom, box);
    case SetKind::Intersect: {
        BoxClass l = classify(s->left, box);
        if (l == BoxClass::OUT) return BoxClass::OUT;
        return combine_intersect(l, classify(s->right, box));
    }
    case SetKind::Union: {
        BoxClass l = classify(s->left, box);
        if (l == BoxClass::IN) return BoxClass::IN;
        return combine_union(l, classify(s->right, box));
    }
    case SetKind::Complement:
        return combine_complement(classify(s->left, box));
    case SetKind::Boundary:
        return combine_boundary(classify(s->left, box));
    }
    throw std::logic_error("unreachable set kind");
}

namespace {

// Signed membership value: <= 0 means inside the thin instantiation.
// Intersection takes the max, union the min, complement flips the sign
// and boundary takes the magnitude.
double point_value(const SetExpr& s, std::span<const double> x,
                   std::span<const double> p_declared) {
    switch (s.kind) {
    case SetKind::AtomLeaf: {
        const Atom& a = *s.atom;
        std::vector<double> slots(a.param_sources.size());
        for (std::size_t j = 0; j < a.param_sources.size(); ++j) {
            auto src = static_cast<std::size_t>(a.param_sources[j]);
            if (src >= p_declared.size())
                throw std::invalid_argument("point_classify_thin: parameter vector too short");
            slots[j] = p_declared[src];
        }
        return eval_point(a.constraint, x, slots);
    }
    case SetKind::Intersect:
        return std::max(point_value(*s.left, x, p_declared),
                        point_value(*s.right, x, p_declared));
    case SetKind::Union:
        return std::min(point_value(*s.left, x, p_declared),
                        point_value(*s.right, x, p_declared));
    case SetKind::Complement:
        return -point_value(*s.left, x, p_declared);
    case SetKind::Boundary:
        return std::fabs(point_value(*s.left, x, p_declared));
    }
    throw std::logic_error("unreachable set kind");
}

} // namespace

PointVerdict point_classify_thin(const SetPtr& s, std::span<const double> x,
                                 std::span<const double> p) {
    double g = point_value(*s, x, p);
    if (std::isnan(g)) return PointVerdict::Outside;
    if (g > kOnTol) return PointVerdict::Outside;
    if (g < -kOnTol) return PointVerdict::Inside;
    return PointVerdict::OnConstraint;
}

} // namespace thickpave
