#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "support.hpp"
#include "thickpave/paver.hpp"
#include "thickpave/sliding.hpp"

using namespace thickpave;

namespace {

const double kPi = std::acos(-1.0);

// Verdict agreement of two set expressions at a thin point, ignoring
// points whose atom values sit in the ambiguous band between the oracle
// tolerance and the guard width.
bool verdicts_comparable(const SetPtr& a, const SetPtr& b, std::span<const double> x,
                         std::span<const double> p, double guard = 1e-6) {
    bool ambiguous = false;
    auto scan = [&](const Atom& atom) {
        std::vector<double> slots(atom.param_sources.size());
        for (std::size_t j = 0; j < slots.size(); ++j)
            slots[j] = p[static_cast<std::size_t>(atom.param_sources[j])];
        double f = std::fabs(eval_point(atom.constraint, x, slots));
        if (f > 1e-9 && f < guard) ambiguous = true;
    };
    visit_atoms(a, scan);
    visit_atoms(b, scan);
    return !ambiguous;
}

} // namespace

TEST_CASE("leaf sliding matches the hand-assembled expression") {
    auto s = tpt::make_swing();
    SlidingSpec spec = tpt::swing1_spec(s);
    SetPtr built = build_leaf_sliding(s.c1, s.params, spec);

    Expr lie_a = lie_derivative(s.c1, s.field_a);
    Expr lie_b = lie_derivative(s.c1, s.field_b);
    SetPtr manual = intersect(
        intersect(boundary(atom_set(make_atom(s.c1, s.params))),
                  complement(atom_set(make_atom(lie_a, s.params)))),
        atom_set(make_atom(lie_b, s.params)));

    std::mt19937_64 rng(401);
    for (int i = 0; i < 500; ++i) {
        Box box = tpt::random_box(rng, 2, 1.8);
        CHECK(classify(built, box) == classify(manual, box));
    }
}

TEST_CASE("leaf sliding uses the expected Lie atoms") {
    auto s = tpt::make_swing();
    SlidingSpec spec = tpt::swing1_spec(s);
    SetPtr built = build_leaf_sliding(s.c2, s.params, spec);

    std::vector<Atom> atoms;
    visit_atoms(built, [&](const Atom& a) { atoms.push_back(a); });
    REQUIRE(atoms.size() == 3);

    // Atom order: boundary constraint, Lie along a, Lie along b. The c2
    // leaf only involves p3; its Lie derivatives only involve p1.
    std::mt19937_64 rng(402);
    Declarations slot1{{"x1", "x2"}, {"q0"}};
    CHECK(atoms[0].param_sources == std::vector<int>{2});
    CHECK(atoms[1].param_sources == std::vector<int>{0});
    CHECK(atoms[2].param_sources == std::vector<int>{0});
    CHECK(tpt::extensionally_equal(atoms[1].constraint,
                                   parse_expr("q0 - sin(x1)", slot1), 2, 1, rng));
    CHECK(tpt::extensionally_equal(atoms[2].constraint,
                                   parse_expr("q0 - sin(x1) - x2", slot1), 2, 1, rng));
}

TEST_CASE("a constant region has no sliding surface") {
    auto s = tpt::make_swing();
    SlidingSpec spec{region_leaf("whole", constant(-1.0), s.params), s.field_a, s.field_b};
    SetPtr built = build_sliding(spec);
    std::mt19937_64 rng(403);
    for (int i = 0; i < 100; ++i)
        CHECK(classify(built, tpt::random_box(rng, 2, 2.0)) == BoxClass::OUT);
}

TEST_CASE("single leaf region equals build_leaf_sliding") {
    auto s = tpt::make_swing();
    SlidingSpec spec = tpt::swing1_spec(s);
    SetPtr whole = build_sliding(spec);
    SetPtr leaf = build_leaf_sliding(s.c1, s.params, spec);
    std::mt19937_64 rng(404);
    for (int i = 0; i < 300; ++i) {
        Box box = tpt::random_box(rng, 2, 1.8);
        CHECK(classify(whole, box) == classify(leaf, box));
    }
}

TEST_CASE("duplicate leaf intersection stays extensionally consistent") {
    auto s = tpt::make_swing();
    SlidingSpec spec{region_and({region_leaf("A", s.c1, s.params),
                                 region_leaf("A", s.c1, s.params)}),
                     s.field_a, s.field_b};
    SetPtr built = build_sliding(spec);

    SlidingSpec single = tpt::swing1_spec(s);
    SetPtr s_a = build_sliding(single);
    SetPtr t_a = region_to_thick(single.region);
    SetPtr manual = unite(intersect(s_a, t_a), intersect(s_a, t_a));

    std::mt19937_64 rng(405);
    std::vector<double> p{0.0, 0.0, 0.0};
    int compared = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> x{tpt::uniform(rng, -2, 2), tpt::uniform(rng, -2, 2)};
        if (!verdicts_comparable(built, manual, x, p)) continue;
        ++compared;
        CHECK(point_classify_thin(built, x, p) == point_classify_thin(manual, x, p));
    }
    CHECK(compared > 900);
}

TEST_CASE("and/or region identities hold extensionally") {
    auto s = tpt::make_swing();
    std::mt19937_64 rng(406);

    auto random_leaf = [&](int tag) -> RegionPtr {
        if (std::uniform_int_distribution<int>(0, 1)(rng)) {
            double cx = tpt::uniform(rng, -1.0, 1.0);
            double cy = tpt::uniform(rng, -1.0, 1.0);
            double r2 = tpt::uniform(rng, 0.2, 1.5);
            Expr c = sub(add(sqr(sub(state_var(0), constant(cx))),
                             sqr(sub(state_var(1), constant(cy)))),
                         constant(r2));
            return region_leaf("D" + std::to_string(tag), c, s.params);
        }
        double a = tpt::uniform(rng, -1.0, 1.0);
        double b = tpt::uniform(rng, -1.0, 1.0);
        double c0 = tpt::uniform(rng, -0.5, 0.5);
        Expr c = add(add(mul(constant(a), state_var(0)), mul(constant(b), state_var(1))),
                     constant(c0));
        return region_leaf("H" + std::to_string(tag), c, s.params);
    };

    std::vector<double> p{0.0, 0.0, 0.0};
    for (int trial = 0; trial < 10; ++trial) {
        RegionPtr a = random_leaf(0);
        RegionPtr b = random_leaf(1);
        for (bool use_and : {true, false}) {
            SlidingSpec spec{use_and ? region_and({a, b}) : region_or({a, b}),
                             s.field_a, s.field_b};
            SetPtr built = build_sliding(spec);

            SlidingSpec sa{a, s.field_a, s.field_b};
            SlidingSpec sb{b, s.field_a, s.field_b};
            SetPtr s1 = build_sliding(sa);
            SetPtr s2 = build_sliding(sb);
            SetPtr t1 = region_to_thick(a);
            SetPtr t2 = region_to_thick(b);
            SetPtr manual =
                use_and ? unite(intersect(s1, t2), intersect(s2, t1))
                        : unite(intersect(s1, complement(t2)), intersect(s2, complement(t1)));

            for (int i = 0; i < 2000; ++i) {
                std::vector<double> x{tpt::uniform(rng, -2, 2), tpt::uniform(rng, -2, 2)};
                if (!verdicts_comparable(built, manual, x, p)) continue;
                CHECK(point_classify_thin(built, x, p) == point_classify_thin(manual, x, p));
            }
        }
    }
}

TEST_CASE("nominal sliding points classify non-OUT") {
    auto s = tpt::make_swing();
    SetPtr sliding = build_sliding(tpt::swing1_spec(s));
    int found = 0;
    for (int i = 0; i < 2000; ++i) {
        double theta = 2.0 * kPi * i / 2000.0;
        if (!tpt::swing_nominal_sliding(theta)) continue;
        ++found;
        double x = std::cos(theta), y = std::sin(theta);
        Box tight({Interval(x - 5e-7, x + 5e-7), Interval(y - 5e-7, y + 5e-7)});
        CHECK(classify(sliding, tight) != BoxClass::OUT);
    }
    CHECK(found > 100);
}

TEST_CASE("swing sliding enclosures have an empty lower bound") {
    auto s = tpt::make_swing();
    Box domain({Interval(-2, 2), Interval(-2, 2)});
    for (double eps : {0.2, 0.1}) {
        Paving p1 = pave(build_sliding(tpt::swing1_spec(s)), domain, eps);
        CHECK(p1.count(BoxClass::IN) == 0);
        Paving p2 = pave(build_sliding(tpt::swing2_spec(s)), domain, eps);
        CHECK(p2.count(BoxClass::IN) == 0);
    }
}
