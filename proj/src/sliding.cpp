#include "thickpave/sliding.hpp"

#include <stdexcept>

namespace thickpave {

RegionPtr region_leaf(std::string name, Expr constraint, Box param_box) {
    auto n = std::make_shared<RegionNode>();
    n->kind = RegionNode::Kind::Leaf;
    n->name = std::move(name);
    n->constraint = std::move(constraint);
    n->param_box = std::move(param_box);
    return n;
}

namespace {

RegionPtr region_nary(RegionNode::Kind kind, std::vector<RegionPtr> children) {
    if (children.empty()) throw std::invalid_argument("region node needs children");
    if (children.size() == 1) return children.front();
    auto n = std::make_shared<RegionNode>();
    n->kind = kind;
    n->children = std::move(children);
    return n;
}

} // namespace

RegionPtr region_and(std::vector<RegionPtr> children) {
    return region_nary(RegionNode::Kind::And, std::move(children));
}

RegionPtr region_or(std::vector<RegionPtr> children) {
    return region_nary(RegionNode::Kind::Or, std::move(children));
}

namespace {

void collect(const RegionPtr& r, std::vector<const RegionNode*>& out) {
    if (r->kind == RegionNode::Kind::Leaf) {
        out.push_back(r.get());
        return;
    }
    for (const auto& c : r->children) collect(c, out);
}

} // namespace

std::vector<const RegionNode*> collect_leaves(const RegionPtr& region) {
    std::vector<const RegionNode*> out;
    collect(region, out);
    return out;
}

SetPtr region_to_thick(const RegionPtr& region) {
    switch (region->kind) {
    case RegionNode::Kind::Leaf:
        return atom_set(make_atom(region->constraint, region->param_box));
    case RegionNode::Kind::And: {
        SetPtr acc = region_to_thick(region->children[0]);
        for (std::size_t i = 1; i < region->children.size(); ++i)
            acc = intersect(acc, region_to_thick(region->children[i]));
        return acc;
    }
    case RegionNode::Kind::Or: {
        SetPtr acc = region_to_thick(region->children[0]);
        for (std::size_t i = 1; i < region->children.size(); ++i)
            acc = unite(acc, region_to_thick(region->children[i]));
        return acc;
    }
    }
    throw std::logic_error("unreachable region kind");
}

SetPtr build_leaf_sliding(const Expr& c, const Box& pbox, const SlidingSpec& spec) {
    if (spec.field_a.size() != spec.field_b.size() || spec.field_a.empty())
        throw std::invalid_argument("sliding spec fields must have matching nonzero arity");
    Expr lie_a = lie_derivative(c, spec.field_a);
    Expr lie_b = lie_derivative(c, spec.field_b);
    SetPtr on_boundary = boundary(atom_set(make_atom(c, pbox)));
    SetPtr approaching = complement(atom_set(make_atom(lie_a, pbox)));
    SetPtr returning = atom_set(make_atom(lie_b, pbox));
    return intersect(intersect(on_boundary, approaching), returning);
}

namespace {

struct Built {
    SetPtr sliding;
    SetPtr thick;
};

Built build_rec(const RegionPtr& region, const SlidingSpec& spec) {
    switch (region->kind) {
    case RegionNode::Kind::Leaf:
        return {build_leaf_sliding(region->constraint, region->param_box, spec),
                atom_set(make_atom(region->constraint, region->param_box))};
    case RegionNode::Kind::And: {
        Built acc = build_rec(region->children[0], spec);
        for (std::size_t i = 1; i < region->children.size(); ++i) {
            Built next = build_rec(region->children[i], spec);
            SetPtr s = unite(intersect(acc.sliding, next.thick),
                             intersect(next.sliding, acc.thick));
            acc = {s, intersect(acc.thick, next.thick)};
        }
        return acc;
    }
    case RegionNode::Kind::Or: {
        Built acc = build_rec(region->children[0], spec);
        for (std::size_t i = 1; i < region->children.size(); ++i) {
            Built next = build_rec(region->children[i], spec);
            SetPtr s = unite(intersect(acc.sliding, complement(next.thick)),
                             intersect(next.sliding, complement(acc.thick)));
            acc = {s, unite(acc.thick, next.thick)};
        }
        return acc;
    }
    }
    throw std::logic_error("unreachable region kind");
}

} // namespace

SetPtr build_sliding(const SlidingSpec& spec) {
    if (!spec.region) throw std::invalid_argument("sliding spec has no region");
    return build_rec(spec.region, spec).sliding;
}

} // namespace thickpave
