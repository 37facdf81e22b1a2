#pragma once

// Constraint sets over the value group: conjunctions (Polyhedron) and finite
// unions (PolyhedralSet) of affine conditions  f(x) <= 0, f(x) < 0, f(x) = 0.
// Strict inequalities are first-class citizens: the group is densely ordered
// and has no induced topology tricks to fall back on, so openness must be
// tracked through every derivation.
//
// Complementation and intersection live here so that the disjunctive-normal-
// form expansion exists in exactly one place.

#include "tropilat/affine.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace tropilat {

enum class Rel { LE, LT, EQ };

inline const char* rel_name(Rel r) {
    switch (r) {
        case Rel::LE: return "le";
        case Rel::LT: return "lt";
        case Rel::EQ: return "eq";
    }
    return "?";
}

struct LinearConstraint {
    AffineFunction fn;
    Rel rel = Rel::LE;

    bool holds_at(const Point& x) const {
        const GroupElement v = fn.eval(x);
        const GroupElement z = GroupElement::zero(v.height());
        switch (rel) {
            case Rel::LE: return v <= z;
            case Rel::LT: return v < z;
            case Rel::EQ: return v == z;
        }
        return false;
    }

    // A constraint with no variable dependence is decided outright.
    bool is_constant() const { return fn.is_constant(); }
    bool constant_truth() const {
        const GroupElement z = GroupElement::zero(fn.height());
        switch (rel) {
            case Rel::LE: return fn.constant() <= z;
            case Rel::LT: return fn.constant() < z;
            case Rel::EQ: return fn.constant() == z;
        }
        return false;
    }

    LinearConstraint closure() const {
        return {fn, rel == Rel::LT ? Rel::LE : rel};
    }

    std::string canonical_key() const {
        return std::string(rel_name(rel)) + "|" + fn.canonical_key();
    }
};

class Polyhedron {
public:
    Polyhedron() : dim_(0), height_(1) {}
    Polyhedron(int dim, int height) : dim_(dim), height_(height) {
        if (dim < 0) throw invalid_input_error("Polyhedron: negative dimension");
        if (height < 1) throw invalid_input_error("Polyhedron: height must be >= 1");
    }

    int dim() const { return dim_; }
    int height() const { return height_; }
    const std::vector<LinearConstraint>& constraints() const { return cs_; }
    bool has_strict() const {
        return std::any_of(cs_.begin(), cs_.end(),
                           [](const LinearConstraint& c) { return c.rel == Rel::LT; });
    }

    Polyhedron& add(LinearConstraint c) {
        if (c.fn.dim() != dim_ || c.fn.height() != height_)
            throw invalid_input_error("Polyhedron: constraint shape mismatch");
        cs_.push_back(std::move(c));
        return *this;
    }
    Polyhedron& add(AffineFunction fn, Rel rel) { return add({std::move(fn), rel}); }

    // f(x) <= g(x) and friends, the readable way to build systems.
    Polyhedron& add_le(const AffineFunction& f, const AffineFunction& g) {
        return add(f - g, Rel::LE);
    }
    Polyhedron& add_lt(const AffineFunction& f, const AffineFunction& g) {
        return add(f - g, Rel::LT);
    }
    Polyhedron& add_eq(const AffineFunction& f, const AffineFunction& g) {
        return add(f - g, Rel::EQ);
    }

    bool contains(const Point& x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw invalid_input_error("Polyhedron::contains: dimension mismatch");
        for (const auto& c : cs_)
            if (!c.holds_at(x)) return false;
        return true;
    }

    Polyhedron closure() const {
        Polyhedron p(dim_, height_);
        for (const auto& c : cs_) p.add(c.closure());
        return p;
    }

    // Conjunction of two systems over the same space.
    Polyhedron intersect(const Polyhedron& o) const {
        if (o.dim() != dim_ || o.height() != height_)
            throw invalid_input_error("Polyhedron::intersect: shape mismatch");
        Polyhedron p = *this;
        for (const auto& c : o.cs_) p.add(c);
        return p;
    }

    // The axis-aligned box [lo_i, hi_i]^n.
    static Polyhedron box(const Point& lo, const Point& hi) {
        if (lo.empty() || lo.size() != hi.size())
            throw invalid_input_error("box: corner dimension mismatch");
        const int n = static_cast<int>(lo.size());
        const int h = lo[0].height();
        Polyhedron p(n, h);
        for (int i = 0; i < n; ++i) {
            const AffineFunction xi = AffineFunction::coordinate(n, i, h);
            p.add(AffineFunction::constant_fn(n, lo[static_cast<size_t>(i)]) - xi, Rel::LE);
            p.add(xi - AffineFunction::constant_fn(n, hi[static_cast<size_t>(i)]), Rel::LE);
        }
        return p;
    }

    Polyhedron sorted() const {
        Polyhedron p = *this;
        std::stable_sort(p.cs_.begin(), p.cs_.end(),
                         [](const LinearConstraint& a, const LinearConstraint& b) {
                             return a.canonical_key() < b.canonical_key();
                         });
        return p;
    }

    std::string canonical_key() const {
        const Polyhedron s = sorted();
        std::string key;
        for (const auto& c : s.cs_) {
            key += c.canonical_key();
            key += '&';
        }
        return key;
    }

private:
    int dim_;
    int height_;
    std::vector<LinearConstraint> cs_;
};

class PolyhedralSet {
public:
    PolyhedralSet() : dim_(0), height_(1) {}
    PolyhedralSet(int dim, int height) : dim_(dim), height_(height) {
        if (dim < 0) throw invalid_input_error("PolyhedralSet: negative dimension");
        if (height < 1) throw invalid_input_error("PolyhedralSet: height must be >= 1");
    }

    static PolyhedralSet empty(int dim, int height) { return PolyhedralSet(dim, height); }
    static PolyhedralSet whole_space(int dim, int height) {
        PolyhedralSet s(dim, height);
        s.add(Polyhedron(dim, height));
        return s;
    }
    static PolyhedralSet of(Polyhedron p) {
        PolyhedralSet s(p.dim(), p.height());
        s.add(std::move(p));
        return s;
    }

    int dim() const { return dim_; }
    int height() const { return height_; }
    const std::vector<Polyhedron>& parts() const { return parts_; }
    bool no_parts() const { return parts_.empty(); }

    PolyhedralSet& add(Polyhedron p) {
        if (p.dim() != dim_ || p.height() != height_)
            throw invalid_input_error("PolyhedralSet: part shape mismatch");
        parts_.push_back(std::move(p));
        return *this;
    }

    bool contains(const Point& x) const {
        for (const auto& p : parts_)
            if (p.contains(x)) return true;
        return false;
    }

    bool has_strict() const {
        return std::any_of(parts_.begin(), parts_.end(),
                           [](const Polyhedron& p) { return p.has_strict(); });
    }

    PolyhedralSet unite(const PolyhedralSet& o) const {
        check_shape(o);
        PolyhedralSet s = *this;
        for (const auto& p : o.parts_) s.add(p);
        return s;
    }

    // Pairwise conjunction; parts that are syntactically hopeless still get
    // kept here — semantic pruning is the emptiness check's job (fm.hpp).
    PolyhedralSet intersect(const PolyhedralSet& o) const {
        check_shape(o);
        PolyhedralSet s(dim_, height_);
        for (const auto& p : parts_)
            for (const auto& q : o.parts_) s.add(p.intersect(q));
        return s;
    }

    // The complement as a union of conjunctions: negate every part and
    // distribute.  A negated equality contributes two strict alternatives,
    // so the expansion is a little wider than constraints-squared; callers
    // that care prune with the emptiness check as they go.
    PolyhedralSet complement() const {
        PolyhedralSet acc = whole_space(dim_, height_);
        for (const auto& part : parts_) {
            PolyhedralSet next(dim_, height_);
            for (const auto& d : acc.parts_) {
                for (const auto& c : part.constraints()) {
                    for (const auto& neg : negate_constraint(c)) {
                        Polyhedron refined = d;
                        refined.add(neg);
                        next.add(std::move(refined));
                    }
                }
            }
            acc = std::move(next);
        }
        return acc;
    }

    PolyhedralSet sorted() const {
        PolyhedralSet s(dim_, height_);
        std::vector<Polyhedron> ps;
        ps.reserve(parts_.size());
        for (const auto& p : parts_) ps.push_back(p.sorted());
        std::stable_sort(ps.begin(), ps.end(), [](const Polyhedron& a, const Polyhedron& b) {
            return a.canonical_key() < b.canonical_key();
        });
        for (auto& p : ps) s.add(std::move(p));
        return s;
    }

    std::string canonical_key() const {
        const PolyhedralSet s = sorted();
        std::string key;
        for (const auto& p : s.parts()) {
            key += p.canonical_key();
            key += '#';
        }
        return key;
    }

    static std::vector<LinearConstraint> negate_constraint(const LinearConstraint& c) {
        switch (c.rel) {
            case Rel::LE: return {{-c.fn, Rel::LT}};
            case Rel::LT: return {{-c.fn, Rel::LE}};
            case Rel::EQ: return {{c.fn, Rel::LT}, {-c.fn, Rel::LT}};
        }
        return {};
    }

private:
    void check_shape(const PolyhedralSet& o) const {
        if (o.dim() != dim_ || o.height() != height_)
            throw invalid_input_error("PolyhedralSet: shape mismatch");
    }

    int dim_;
    int height_;
    std::vector<Polyhedron> parts_;
};

}  // namespace tropilat
