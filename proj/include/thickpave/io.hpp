#pragma once

#include <array>
#include <string>
#include <vector>

#include "thickpave/paver.hpp"
#include "thickpave/sliding.hpp"

namespace thickpave {

/**
 * Parsed system definition: declared variables, both vector fields, the
 * Boolean region, the paving domain and the target resolution.
 */
struct SystemDef {
    Declarations decl;
    Box param_box;  // one interval per declared parameter, in order
    std::vector<Expr> field_a;
    std::vector<Expr> field_b;
    RegionPtr region;
    Box domain;
    double epsilon = 0.0;

    SlidingSpec sliding_spec() const { return {region, field_a, field_b}; }
};

/**
 * Parses the line-oriented system grammar ('#' starts a comment):
 *
 *   state <name>+
 *   param <name> in [<lo>,<hi>]
 *   field a : ( <expr> , ... )
 *   field b : ( <expr> , ... )
 *   set <Name> := <expr> <= 0
 *   region := <set-expr over Names with & | ! and parentheses>
 *   domain [<lo>,<hi>] x [<lo>,<hi>] ...
 *   epsilon <value>
 *
 * '&' binds tighter than '|'; '!' applies to set names only and negates
 * the leaf constraint. Throws ParseError with line/column positions.
 */
SystemDef parse_system(const std::string& text);

// JSON serialization of a paving; numbers carry 17 significant digits and
// entries appear in canonical order.
std::string write_paving(const Paving& paving);

// Parses a document produced by write_paving. Counts are recomputed;
// elapsed time is not round-tripped.
Paving read_paving(const std::string& json_text);

struct StyleMap {
    std::array<std::string, 4> fill;  // indexed by BoxClass
    double stroke_width = 0.0;
    int image_size = 800;

    // Red inside, orange penumbra, blue outside, a lighter shade for
    // undecided boxes.
    static StyleMap defaults() {
        return {{"#d7191c", "#fdae61", "#2c7bb6", "#ffe8b3"}, 0.0, 800};
    }
};

// SVG rendering of a 2-D paving: one rect per entry in canonical order
// plus a domain frame, with the x2 axis pointing up. Throws
// std::invalid_argument for other dimensions.
std::string render_svg(const Paving& paving, const StyleMap& style);

} // namespace thickpave
