#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thickpave/expr.hpp"
#include "thickpave/interval.hpp"

namespace thickpave {

// Four-valued verdict of a box against a thick set. IN: box inside the
// subset bound; OUT: box misses the superset bound; PEN: box inside the
// superset bound and disjoint from the subset bound's interior; UNKNOWN
// carries no claim.
enum class BoxClass { IN = 0, PEN = 1, OUT = 2, UNKNOWN = 3 };

const char* box_class_name(BoxClass c);
std::optional<BoxClass> box_class_from_name(const std::string& name);

/**
 * Elementary thick set sigma(f, [p]): lower bound {x | forall p: f <= 0},
 * upper bound {x | exists p: f <= 0}. The constraint's parameter indices
 * refer to slots of param_box; param_sources records which declared
 * parameter each slot came from.
 */
struct Atom {
    Expr constraint;
    Box param_box;
    std::vector<int> param_sources;
};

// Builds an atom from a constraint over the full declared parameter box,
// keeping only the parameters the constraint actually references.
Atom make_atom(const Expr& constraint, const Box& declared_params);

enum class SetKind { AtomLeaf, Intersect, Union, Complement, Boundary };

struct SetExpr;
using SetPtr = std::shared_ptr<const SetExpr>;

// Tree of thick-set atoms composed with the thick algebra; complement is
// the closed complement, boundary(X) = X intersect complement(X).
struct SetExpr {
    SetKind kind;
    std::optional<Atom> atom;  // AtomLeaf only
    SetPtr left;
    SetPtr right;              // binary nodes only
};

SetPtr atom_set(Atom a);
SetPtr intersect(SetPtr a, SetPtr b);
SetPtr unite(SetPtr a, SetPtr b);
SetPtr complement(SetPtr a);
SetPtr boundary(SetPtr a);

// Pre-order visit of every atom in the tree.
void visit_atoms(const SetPtr& s, const std::function<void(const Atom&)>& fn);

// Sound verdict of a box against one atom: interval evaluation over
// box x [p] decides IN/OUT; otherwise a penumbra proof is attempted with
// the parameter-box corners.
BoxClass atom_classify(const Atom& a, const Box& box);

enum class SetOp { Intersect, Union, Complement };

// Verdict lattice of the thick algebra. Complement takes one operand.
BoxClass combine(SetOp op, BoxClass c1, std::optional<BoxClass> c2 = std::nullopt);

BoxClass combine_intersect(BoxClass a, BoxClass b);
BoxClass combine_union(BoxClass a, BoxClass b);
BoxClass combine_complement(BoxClass a);
BoxClass combine_boundary(BoxClass a);

// Recursive sound classification of a box against a set expression.
BoxClass classify(const SetPtr& s, const Box& box);

// Monte-Carlo point oracle verdict for a thin instantiation (x, p); p is
// given in declared-parameter coordinates. Statistical cross-check only.
enum class PointVerdict { Inside, Outside, OnConstraint };

PointVerdict point_classify_thin(const SetPtr& s, std::span<const double> x,
                                 std::span<const double> p);

} // namespace thickpave
