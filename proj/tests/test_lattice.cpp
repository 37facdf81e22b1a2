#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tropilat/lattice.hpp"

using namespace tropilat;

namespace {

GroupElement q1(long v) { return GroupElement::scalar(v, 1); }
GroupElement q1(const Rational& v) { return GroupElement::scalar(v, 1); }
AffineFunction coord(int i, int n, int h = 1) { return AffineFunction::coordinate(n, i, h); }
AffineFunction constf(GroupElement c, int n) {
    return AffineFunction::constant_fn(n, std::move(c));
}

PwaFunction min_pwa_2d() {
    PwaFunction f(2, 1);
    Polyhedron lower(2, 1), upper(2, 1);
    lower.add_le(coord(0, 2), coord(1, 2));
    upper.add_le(coord(1, 2), coord(0, 2));
    f.add_piece(lower, coord(0, 2));
    f.add_piece(upper, coord(1, 2));
    return f;
}

PwaFunction two_lines() {
    PwaFunction g(2, 1);
    Polyhedron l1(2, 1), l2(2, 1);
    l1.add_le(constf(q1(0), 2), coord(0, 2));
    l1.add_eq(coord(1, 2), constf(q1(1), 2));
    l2.add_le(constf(q1(0), 2), coord(0, 2));
    l2.add_eq(coord(1, 2), constf(q1(2), 2));
    g.add_piece(l1, constf(q1(0), 2));
    g.add_piece(l2, coord(0, 2));
    return g;
}

}  // namespace

TEST_CASE("term evaluation", "[lattice]") {
    const std::vector<AffineFunction> none;
    LatticeTerm t1 = LatticeTerm::min(LatticeTerm::coordinate(0), LatticeTerm::coordinate(1));
    CHECK(t1.eval(Point{q1(2), q1(1)}, none) == q1(1));
    LatticeTerm t2 =
        LatticeTerm::add(LatticeTerm::constant(q1(1)), LatticeTerm::neg(LatticeTerm::coordinate(0)));
    CHECK(t2.eval(Point{q1(1)}, none) == q1(0));
    LatticeTerm t3 = LatticeTerm::scale(3, LatticeTerm::coordinate(0));
    CHECK(t3.eval(Point{q1(2)}, none) == q1(6));
    CHECK_THROWS_AS(LatticeTerm::coordinate(5).eval(Point{q1(0)}, none), invalid_input_error);
    std::vector<AffineFunction> gens{Rational(2) * coord(0, 1)};
    CHECK(LatticeTerm::generator(0).eval(Point{q1(3)}, gens) == q1(6));
    CHECK_THROWS_AS(LatticeTerm::generator(1).eval(Point{q1(0)}, gens), invalid_input_error);
}

TEST_CASE("normalization distributes sums over min", "[lattice]") {
    // x3 + min(x1, x2) -> min(x1 + x3, x2 + x3).
    const std::vector<AffineFunction> none;
    LatticeTerm t = LatticeTerm::add(
        LatticeTerm::coordinate(2),
        LatticeTerm::min(LatticeTerm::coordinate(0), LatticeTerm::coordinate(1)));
    MinMaxNormalForm nf = normalize(t, none, 3, 1);
    REQUIRE(nf.clauses.size() == 2);
    CHECK(nf.clauses[0].size() == 1);
    CHECK(nf.clauses[1].size() == 1);
    const AffineFunction expect_a = coord(0, 3) + coord(2, 3);
    const AffineFunction expect_b = coord(1, 3) + coord(2, 3);
    const std::string got = nf.clauses[0][0].canonical_key() + nf.clauses[1][0].canonical_key();
    const std::string want_ab = expect_a.canonical_key() + expect_b.canonical_key();
    const std::string want_ba = expect_b.canonical_key() + expect_a.canonical_key();
    CHECK((got == want_ab || got == want_ba));
}

TEST_CASE("negation swaps min and max", "[lattice]") {
    const std::vector<AffineFunction> none;
    LatticeTerm t = LatticeTerm::neg(
        LatticeTerm::min(LatticeTerm::coordinate(0), LatticeTerm::coordinate(1)));
    MinMaxNormalForm nf = normalize(t, none, 2, 1);
    REQUIRE(nf.clauses.size() == 1);
    CHECK(nf.clauses[0].size() == 2);  // max(-x1, -x2)
    CHECK(nf.eval(Point{q1(3), q1(5)}) == q1(-3));
}

TEST_CASE("second-smallest of three has three clauses of size two", "[lattice]") {
    const std::vector<AffineFunction> none;
    std::optional<LatticeTerm> t;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            LatticeTerm mx =
                LatticeTerm::max(LatticeTerm::coordinate(i), LatticeTerm::coordinate(j));
            t = t ? LatticeTerm::min(std::move(*t), std::move(mx)) : std::move(mx);
        }
    MinMaxNormalForm nf = normalize(*t, none, 3, 1);
    REQUIRE(nf.clauses.size() == 3);
    for (const auto& clause : nf.clauses) CHECK(clause.size() == 2);
    CHECK(nf.eval(Point{q1(5), q1(-1), q1(2)}) == q1(2));
}

TEST_CASE("normalization preserves values at random points", "[lattice]") {
    std::vector<AffineFunction> gens{Rational(2) * coord(0, 2) - coord(1, 2),
                                     coord(1, 2) + q1(1)};
    // ((g0 min x1) + (- (g1 max x0))) scaled by -2
    LatticeTerm t = LatticeTerm::scale(
        -2, LatticeTerm::add(
                LatticeTerm::min(LatticeTerm::generator(0), LatticeTerm::coordinate(1)),
                LatticeTerm::neg(LatticeTerm::max(LatticeTerm::generator(1),
                                                  LatticeTerm::coordinate(0)))));
    MinMaxNormalForm nf = normalize(t, gens, 2, 1);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 3);
    for (int trial = 0; trial < 200; ++trial) {
        Point x{q1(Rational(num(rng), den(rng))), q1(Rational(num(rng), den(rng)))};
        CHECK(nf.eval(x) == t.eval(x, gens));
    }
}

TEST_CASE("term equality on a restricted set", "[lattice]") {
    const std::vector<AffineFunction> none;
    // nf of x1 vs g = x2: equal on the diagonal, not on a square.
    MinMaxNormalForm nf = normalize(LatticeTerm::coordinate(0), none, 2, 1);
    PwaFunction g = PwaFunction::single(Polyhedron(2, 1), coord(1, 2));
    Polyhedron diag(2, 1);
    diag.add_eq(coord(0, 2), coord(1, 2));
    CHECK(term_equals_on(nf, g, PolyhedralSet::of(diag)).equal);

    Polyhedron square = Polyhedron::box(Point{q1(0), q1(0)}, Point{q1(1), q1(1)});
    TermEquality w = term_equals_on(nf, g, PolyhedralSet::of(square));
    REQUIRE_FALSE(w.equal);
    CHECK(square.contains(w.x));
    CHECK(!(w.term_value == w.fn_value));
    CHECK(w.term_value == w.x[0]);
    CHECK(w.fn_value == w.x[1]);
}

TEST_CASE("min synthesis over its own generators", "[lattice][synth]") {
    PwaFunction g = min_pwa_2d();
    std::vector<AffineFunction> gens{coord(0, 2), coord(1, 2)};
    SynthesisResult r = synth_min_max(g, gens, PolyhedralSet::whole_space(2, 1));
    REQUIRE(r.outcome == SynthesisResult::Outcome::accepted);
    REQUIRE(r.chosen_subsets.size() == 2);
    CHECK(r.chosen_subsets[0] == std::vector<int>{0});
    CHECK(r.chosen_subsets[1] == std::vector<int>{1});
    CHECK(r.term.eval(Point{q1(3), q1(-2)}, gens) == q1(-2));
}

TEST_CASE("max synthesis needs the full subset", "[lattice][synth]") {
    PwaFunction g(2, 1);
    Polyhedron lower(2, 1), upper(2, 1);
    lower.add_le(coord(0, 2), coord(1, 2));
    upper.add_le(coord(1, 2), coord(0, 2));
    g.add_piece(lower, coord(1, 2));
    g.add_piece(upper, coord(0, 2));
    std::vector<AffineFunction> gens{coord(0, 2), coord(1, 2)};
    SynthesisResult r = synth_min_max(g, gens, PolyhedralSet::whole_space(2, 1));
    REQUIRE(r.outcome == SynthesisResult::Outcome::accepted);
    REQUIRE(r.chosen_subsets.size() == 1);
    CHECK(r.chosen_subsets[0] == std::vector<int>{0, 1});
    CHECK(r.term.eval(Point{q1(3), q1(-2)}, gens) == q1(3));
}

TEST_CASE("the two-line function is rejected with a two-point witness",
          "[lattice][synth]") {
    PwaFunction g = two_lines();
    std::vector<AffineFunction> gens{constf(q1(0), 2), coord(0, 2)};
    SynthesisResult r = synth_min_max(g, gens, g.domain());
    REQUIRE(r.outcome == SynthesisResult::Outcome::rejected);
    // The witness violates the two-point criterion against every generator.
    const GroupElement gx = g.eval(r.x), gy = g.eval(r.y);
    for (const auto& f : gens) {
        const bool ok_here = f.eval(r.x) <= gx && gy <= f.eval(r.y);
        CHECK_FALSE(ok_here);
    }
    CHECK(g.domain().contains(r.x));
    CHECK(g.domain().contains(r.y));
}

TEST_CASE("non-w-combinations are refused up front", "[lattice][synth]") {
    PwaFunction g = PwaFunction::single(Polyhedron(1, 1), coord(0, 1) + q1(1));
    CHECK_THROWS_AS(
        synth_min_max(g, {coord(0, 1)}, PolyhedralSet::whole_space(1, 1)),
        precondition_error);
}

TEST_CASE("membership in the dominating family is upward closed", "[lattice][synth]") {
    PwaFunction g = min_pwa_2d();
    std::vector<AffineFunction> gens{coord(0, 2), coord(1, 2)};
    CHECK(detail::dominates_on(g, gens, {0}));
    CHECK(detail::dominates_on(g, gens, {1}));
    CHECK(detail::dominates_on(g, gens, {0, 1}));  // superset stays in
}

TEST_CASE("translation leaves the clause structure alone", "[lattice][synth]") {
    PwaFunction g = min_pwa_2d();
    std::vector<AffineFunction> gens{coord(0, 2), coord(1, 2)};
    const PolyhedralSet dom = PolyhedralSet::whole_space(2, 1);
    SynthesisResult base = synth_min_max(g, gens, dom);

    const GroupElement c = q1(Rational(7, 2));
    PwaFunction g2(2, 1);
    for (const auto& p : g.pieces()) g2.add_piece(p.cell, p.fn + c);
    std::vector<AffineFunction> gens2;
    for (const auto& f : gens) gens2.push_back(f + c);
    SynthesisResult shifted = synth_min_max(g2, gens2, dom);
    REQUIRE(base.outcome == SynthesisResult::Outcome::accepted);
    REQUIRE(shifted.outcome == SynthesisResult::Outcome::accepted);
    CHECK(base.chosen_subsets == shifted.chosen_subsets);
}

TEST_CASE("small random terms round-trip through synthesis", "[lattice][synth]") {
    std::mt19937_64 rng(20240818);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_int_distribution<long> cst(-3, 3);
    const int n = 2;
    std::vector<AffineFunction> gens{coord(0, n), coord(1, n),
                                     coord(0, n) - coord(1, n) + q1(1)};
    Polyhedron box = Polyhedron::box(Point{q1(-2), q1(-2)}, Point{q1(2), q1(2)});
    const PolyhedralSet dom = PolyhedralSet::of(box);

    for (int trial = 0; trial < 10; ++trial) {
        // Random small min/max tree over the generators.
        std::vector<LatticeTerm> pool{LatticeTerm::generator(0), LatticeTerm::generator(1),
                                      LatticeTerm::generator(2)};
        LatticeTerm t = pool[static_cast<size_t>(pick(rng))];
        for (int step = 0; step < 3; ++step) {
            LatticeTerm other = pool[static_cast<size_t>(pick(rng))];
            t = (pick(rng) % 2 == 0) ? LatticeTerm::min(std::move(t), std::move(other))
                                     : LatticeTerm::max(std::move(t), std::move(other));
        }
        (void)cst;
        MinMaxNormalForm nf = normalize(t, gens, n, 1);
        PwaFunction g = nf_to_pwa(nf, dom);
        SynthesisResult r = synth_min_max(g, gens, dom);
        REQUIRE(r.outcome == SynthesisResult::Outcome::accepted);
        MinMaxNormalForm back = normalize(r.term, gens, n, 1);
        CHECK(term_equals_on(back, g, dom).equal);
    }
}
