#pragma once

#include <memory>
#include <string>
#include <vector>

#include "thickpave/thickset.hpp"

namespace thickpave {

struct RegionNode;
using RegionPtr = std::shared_ptr<const RegionNode>;

/**
 * Boolean region tree over closed leaf sets {x | c(x, p) <= 0}. Leaf-level
 * `not` is resolved to constraint negation before construction; no
 * complement node exists here. Each leaf carries the declared parameter
 * box; atoms later restrict it to the parameters they use.
 */
struct RegionNode {
    enum class Kind { Leaf, And, Or };
    Kind kind;
    std::string name;                 // leaf label for display
    Expr constraint;                  // leaf only
    Box param_box;                    // leaf only
    std::vector<RegionPtr> children;  // And / Or, at least two
};

RegionPtr region_leaf(std::string name, Expr constraint, Box param_box);
RegionPtr region_and(std::vector<RegionPtr> children);
RegionPtr region_or(std::vector<RegionPtr> children);

std::vector<const RegionNode*> collect_leaves(const RegionPtr& region);

// Switched system S(A): mode a inside the region, mode b outside.
struct SlidingSpec {
    RegionPtr region;
    std::vector<Expr> field_a;
    std::vector<Expr> field_b;
};

// Thick rendering of a region: atoms composed with intersect/union.
SetPtr region_to_thick(const RegionPtr& region);

// Sliding enclosure of one leaf {c <= 0}:
//   boundary(atom(c)) ∩ complement(atom(L_a(c))) ∩ atom(L_b(c)).
SetPtr build_leaf_sliding(const Expr& c, const Box& pbox, const SlidingSpec& spec);

// Sliding enclosure of the whole region, recursing with the identities
//   S(A1 ∩ A2) = (S(A1) ∩ A2) ∪ (S(A2) ∩ A1)
//   S(A1 ∪ A2) = (S(A1) ∩ ¬A2) ∪ (S(A2) ∩ ¬A1)
// where n-ary nodes fold left-associatively.
SetPtr build_sliding(const SlidingSpec& spec);

} // namespace thickpave
