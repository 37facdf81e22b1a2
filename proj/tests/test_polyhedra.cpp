#include <catch2/catch_amalgamated.hpp>

#include "tropilat/fm.hpp"
#include "tropilat/polyhedra.hpp"

using namespace tropilat;

namespace {

GroupElement q1(long v) { return GroupElement::scalar(v, 1); }
GroupElement q1(const Rational& v) { return GroupElement::scalar(v, 1); }

AffineFunction coord(int i, int n, int h = 1) { return AffineFunction::coordinate(n, i, h); }

AffineFunction constf(GroupElement c, int n) {
    return AffineFunction::constant_fn(n, std::move(c));
}

}  // namespace

TEST_CASE("constraint membership respects strictness", "[polyhedra]") {
    // x1 <= 3  /  x1 < 3  /  x1 == 3.
    Polyhedron le(1, 1), lt(1, 1), eq(1, 1);
    le.add_le(coord(0, 1), constf(q1(3), 1));
    lt.add_lt(coord(0, 1), constf(q1(3), 1));
    eq.add_eq(coord(0, 1), constf(q1(3), 1));
    Point at3{q1(3)}, at2{q1(2)};
    CHECK(le.contains(at3));
    CHECK(le.contains(at2));
    CHECK_FALSE(lt.contains(at3));
    CHECK(lt.contains(at2));
    CHECK(eq.contains(at3));
    CHECK_FALSE(eq.contains(at2));
}

TEST_CASE("sample point picks 4 from x >= 3", "[fm]") {
    Polyhedron p(1, 1);
    p.add_le(constf(q1(3), 1), coord(0, 1));
    auto pt = sample_point(p);
    REQUIRE(pt.has_value());
    CHECK((*pt)[0] == q1(4));
}

TEST_CASE("sample point picks the midpoint of an open interval", "[fm]") {
    Polyhedron p(1, 1);
    p.add_lt(constf(q1(0), 1), coord(0, 1));
    p.add_lt(coord(0, 1), constf(q1(1), 1));
    auto pt = sample_point(p);
    REQUIRE(pt.has_value());
    CHECK((*pt)[0] == q1(Rational(1, 2)));
}

TEST_CASE("sample point of the unconstrained line is zero", "[fm]") {
    Polyhedron p(1, 1);
    auto pt = sample_point(p);
    REQUIRE(pt.has_value());
    CHECK((*pt)[0] == q1(0));
}

TEST_CASE("emptiness produces a refutation that replays", "[fm]") {
    // x >= 1 and x <= 0.
    Polyhedron p(1, 1);
    p.add_le(constf(q1(1), 1), coord(0, 1));
    p.add_le(coord(0, 1), constf(q1(0), 1));
    auto r = part_refutation(p);
    REQUIRE(r.has_value());
    CHECK(verify_refutation(p, *r));

    PolyhedralSet s = PolyhedralSet::of(p);
    EmptinessCertificate cert = is_empty(s);
    CHECK(cert.empty);
    REQUIRE(cert.refutations.size() == 1);
    CHECK(verify_refutation(s.parts()[0], cert.refutations[0]));
}

TEST_CASE("strict wrap-around is infeasible while the closed one meets", "[fm]") {
    // x < 1 and x > 1 is empty; x <= 1 and x >= 1 is the point 1.
    Polyhedron strict(1, 1), closed(1, 1);
    strict.add_lt(coord(0, 1), constf(q1(1), 1));
    strict.add_lt(constf(q1(1), 1), coord(0, 1));
    closed.add_le(coord(0, 1), constf(q1(1), 1));
    closed.add_le(constf(q1(1), 1), coord(0, 1));
    CHECK(part_empty(strict));
    auto r = part_refutation(strict);
    REQUIRE(r.has_value());
    CHECK(verify_refutation(strict, *r));
    auto pt = sample_point(closed);
    REQUIRE(pt.has_value());
    CHECK((*pt)[0] == q1(1));
}

TEST_CASE("equalities substitute before pair elimination", "[fm]") {
    // x2 == x1 + 1, x2 <= 0, x1 >= 0  is empty; replayed certificate uses the
    // equality with whatever sign it needs.
    Polyhedron p(2, 1);
    p.add_eq(coord(1, 2), coord(0, 2) + q1(1));
    p.add_le(coord(1, 2), constf(q1(0), 2));
    p.add_le(constf(q1(0), 2), coord(0, 2));
    auto r = part_refutation(p);
    REQUIRE(r.has_value());
    CHECK(verify_refutation(p, *r));
}

TEST_CASE("projection is sound and complete on a triangle", "[fm]") {
    // Triangle 0 <= x2 <= x1 <= 1 projected to x1 gives [0, 1].
    Polyhedron tri(2, 1);
    tri.add_le(constf(q1(0), 2), coord(1, 2));
    tri.add_le(coord(1, 2), coord(0, 2));
    tri.add_le(coord(0, 2), constf(q1(1), 2));
    Polyhedron proj = fm_eliminate(tri, 1);
    REQUIRE(proj.dim() == 1);
    CHECK(proj.contains(Point{q1(0)}));
    CHECK(proj.contains(Point{q1(1)}));
    CHECK(proj.contains(Point{q1(Rational(1, 2))}));
    CHECK_FALSE(proj.contains(Point{q1(2)}));
    CHECK_FALSE(proj.contains(Point{q1(-1)}));
}

TEST_CASE("projection keeps strictness when a strict parent contributes", "[fm]") {
    // x2 > 0 and x1 + x2 <= 1 projects to x1 < 1.
    Polyhedron p(2, 1);
    p.add_lt(constf(q1(0), 2), coord(1, 2));
    p.add_le(coord(0, 2) + coord(1, 2), constf(q1(1), 2));
    Polyhedron proj = fm_eliminate(p, 1);
    CHECK_FALSE(proj.contains(Point{q1(1)}));
    CHECK(proj.contains(Point{q1(Rational(99, 100))}));
}

TEST_CASE("projected points lift back into the original", "[fm]") {
    Polyhedron p(3, 1);
    p.add_le(coord(0, 3) + coord(1, 3) + coord(2, 3), constf(q1(5), 3));
    p.add_le(constf(q1(0), 3), coord(2, 3));
    p.add_lt(coord(1, 3), coord(2, 3) + q1(2));
    p.add_le(constf(q1(-3), 3), coord(1, 3));
    Polyhedron proj = fm_project(p, {0, 1});
    // Sample the projection, extend by intersecting p with the sampled values.
    auto base = sample_point(proj);
    REQUIRE(base.has_value());
    Polyhedron fiber = p;
    fiber.add_eq(coord(0, 3), constf((*base)[0], 3));
    fiber.add_eq(coord(1, 3), constf((*base)[1], 3));
    auto lifted = sample_point(fiber);
    REQUIRE(lifted.has_value());
    CHECK(p.contains(*lifted));
}

TEST_CASE("height-2 comparisons flow through elimination", "[fm]") {
    // At height 2 with (1,0) dominant, 0 < x < (0,1) has solutions strictly
    // inside the infinitesimal class.
    const int h = 2;
    GroupElement eps{Rational(0), Rational(1)};
    GroupElement one{Rational(1), Rational(0)};
    Polyhedron p(1, h);
    p.add_lt(constf(GroupElement::zero(h), 1), coord(0, 1, h));
    p.add_lt(coord(0, 1, h), constf(eps, 1));
    auto pt = sample_point(p);
    REQUIRE(pt.has_value());
    CHECK((*pt)[0] > GroupElement::zero(h));
    CHECK((*pt)[0] < eps);
    CHECK((*pt)[0] < one);
}

TEST_CASE("set difference and subset tests agree", "[fm]") {
    // [0,2] minus (1,2] leaves [0,1].
    Polyhedron seg(1, 1);
    seg.add_le(constf(q1(0), 1), coord(0, 1));
    seg.add_le(coord(0, 1), constf(q1(2), 1));
    Polyhedron cut(1, 1);
    cut.add_lt(constf(q1(1), 1), coord(0, 1));
    cut.add_le(coord(0, 1), constf(q1(2), 1));
    PolyhedralSet rest = difference(PolyhedralSet::of(seg), PolyhedralSet::of(cut));
    CHECK(rest.contains(Point{q1(0)}));
    CHECK(rest.contains(Point{q1(1)}));
    CHECK_FALSE(rest.contains(Point{q1(Rational(3, 2))}));
    Polyhedron expect(1, 1);
    expect.add_le(constf(q1(0), 1), coord(0, 1));
    expect.add_le(coord(0, 1), constf(q1(1), 1));
    CHECK(set_equal(rest, PolyhedralSet::of(expect)));
    CHECK(is_subset(PolyhedralSet::of(expect), PolyhedralSet::of(seg)));
    CHECK_FALSE(is_subset(PolyhedralSet::of(seg), PolyhedralSet::of(expect)));
}

TEST_CASE("dimension distinguishes points, segments, and slabs", "[fm]") {
    const auto dim_of = [](const Polyhedron& p) { return dimension(PolyhedralSet::of(p)); };

    Polyhedron point(2, 1);
    point.add_eq(coord(0, 2), constf(q1(1), 2));
    point.add_eq(coord(1, 2), constf(q1(2), 2));
    CHECK(dim_of(point) == 0);

    Polyhedron diag(2, 1);  // x2 == x1, 0 <= x1 <= 1: a segment, dimension 1
    diag.add_eq(coord(1, 2), coord(0, 2));
    diag.add_le(constf(q1(0), 2), coord(0, 2));
    diag.add_le(coord(0, 2), constf(q1(1), 2));
    CHECK(dim_of(diag) == 1);

    Polyhedron slab(2, 1);  // 0 <= x1 <= 1, x2 free
    slab.add_le(constf(q1(0), 2), coord(0, 2));
    slab.add_le(coord(0, 2), constf(q1(1), 2));
    CHECK(dim_of(slab) == 2);

    Polyhedron nothing(2, 1);
    nothing.add_lt(coord(0, 2), coord(0, 2));
    CHECK(dim_of(nothing) == -1);

    // Union: a 2-dimensional part wins.
    PolyhedralSet both(2, 1);
    both.add(point);
    both.add(slab);
    CHECK(dimension(both) == 2);
}

TEST_CASE("closure relaxes strict faces and drops empty parts", "[fm]") {
    Polyhedron open_seg(1, 1);
    open_seg.add_lt(constf(q1(0), 1), coord(0, 1));
    open_seg.add_lt(coord(0, 1), constf(q1(1), 1));
    Polyhedron ghost(1, 1);
    ghost.add_lt(coord(0, 1), coord(0, 1));  // empty
    PolyhedralSet s(1, 1);
    s.add(open_seg);
    s.add(ghost);
    PolyhedralSet cl = closure(s);
    CHECK(cl.parts().size() == 1);
    CHECK(cl.contains(Point{q1(0)}));
    CHECK(cl.contains(Point{q1(1)}));
    CHECK(is_closed(cl));
    CHECK_FALSE(is_closed(s));
}

TEST_CASE("convexity via the midpoint criterion", "[fm]") {
    // [0,1] u [2,3] is closed but not convex; [0,3] is.
    Polyhedron a(1, 1), b(1, 1), whole(1, 1);
    a.add_le(constf(q1(0), 1), coord(0, 1));
    a.add_le(coord(0, 1), constf(q1(1), 1));
    b.add_le(constf(q1(2), 1), coord(0, 1));
    b.add_le(coord(0, 1), constf(q1(3), 1));
    whole.add_le(constf(q1(0), 1), coord(0, 1));
    whole.add_le(coord(0, 1), constf(q1(3), 1));

    PolyhedralSet split(1, 1);
    split.add(a);
    split.add(b);
    CHECK_FALSE(is_convex(split));
    CHECK(is_convex(PolyhedralSet::of(whole)));

    // Same union written as overlapping pieces is convex.
    PolyhedralSet overlapping(1, 1);
    overlapping.add(a);
    overlapping.add(whole);
    CHECK(is_convex(overlapping));

    Polyhedron open_seg(1, 1);
    open_seg.add_lt(constf(q1(0), 1), coord(0, 1));
    open_seg.add_lt(coord(0, 1), constf(q1(1), 1));
    CHECK_THROWS_AS(is_convex(PolyhedralSet::of(open_seg)), precondition_error);
}

TEST_CASE("boundedness is decided per coordinate", "[fm]") {
    Polyhedron box = Polyhedron::box(Point{q1(0), q1(0)}, Point{q1(1), q1(5)});
    CHECK(is_bounded(PolyhedralSet::of(box)));
    Polyhedron strip(2, 1);
    strip.add_le(constf(q1(0), 2), coord(0, 2));
    strip.add_le(coord(0, 2), constf(q1(1), 2));
    CHECK(is_bounded(strip, 0));
    CHECK_FALSE(is_bounded(strip, 1));
    CHECK_FALSE(is_bounded(PolyhedralSet::of(strip)));
    // An equality bounds its coordinate even without explicit inequalities.
    Polyhedron diag(2, 1);
    diag.add_eq(coord(1, 2), constf(q1(3), 2));
    CHECK(is_bounded(diag, 1));
    CHECK_FALSE(is_bounded(diag, 0));
}

TEST_CASE("range of a functional over a part", "[fm]") {
    // f(x) = 2 x1 over 0 < x1 <= 5: range (0, 10].
    Polyhedron p(1, 1);
    p.add_lt(constf(q1(0), 1), coord(0, 1));
    p.add_le(coord(0, 1), constf(q1(5), 1));
    AffineFunction f({Rational(2)}, GroupElement::zero(1));
    AffineRange r = range_of(f, p);
    REQUIRE_FALSE(r.empty);
    REQUIRE(r.lo.has_value());
    REQUIRE(r.hi.has_value());
    CHECK(*r.lo == q1(0));
    CHECK(r.lo_strict);
    CHECK(*r.hi == q1(10));
    CHECK_FALSE(r.hi_strict);

    Polyhedron ray(1, 1);
    ray.add_le(constf(q1(3), 1), coord(0, 1));
    AffineRange rr = range_of(f, ray);
    CHECK(rr.lo.has_value());
    CHECK_FALSE(rr.hi.has_value());
}

TEST_CASE("complement covers exactly the outside", "[polyhedra]") {
    Polyhedron seg(1, 1);
    seg.add_le(constf(q1(0), 1), coord(0, 1));
    seg.add_lt(coord(0, 1), constf(q1(1), 1));
    PolyhedralSet comp = PolyhedralSet::of(seg).complement();
    CHECK_FALSE(comp.contains(Point{q1(0)}));
    CHECK_FALSE(comp.contains(Point{q1(Rational(1, 2))}));
    CHECK(comp.contains(Point{q1(1)}));
    CHECK(comp.contains(Point{q1(-1)}));
    CHECK(comp.contains(Point{q1(7)}));
}

TEST_CASE("canonical encodings are stable under part order", "[polyhedra]") {
    Polyhedron a(1, 1), b(1, 1);
    a.add_le(coord(0, 1), constf(q1(0), 1));
    b.add_le(constf(q1(1), 1), coord(0, 1));
    PolyhedralSet s1(1, 1), s2(1, 1);
    s1.add(a);
    s1.add(b);
    s2.add(b);
    s2.add(a);
    CHECK(s1.sorted().canonical_key() == s2.sorted().canonical_key());
}

TEST_CASE("redundant constraints get dropped by the full pass", "[fm]") {
    Polyhedron p(1, 1);
    p.add_le(coord(0, 1), constf(q1(1), 1));
    p.add_le(coord(0, 1), constf(q1(5), 1));  // implied
    p.add_le(constf(q1(0), 1), coord(0, 1));
    Polyhedron r = remove_redundant(p);
    CHECK(r.constraints().size() == 2);
    CHECK(set_equal(PolyhedralSet::of(r), PolyhedralSet::of(p)));
}
