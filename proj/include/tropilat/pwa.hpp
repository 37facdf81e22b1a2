#pragma once

// Piecewise-affine functions on polyhedral domains: evaluation, consistency,
// w-combination checking, the exact Lipschitz decision, continuous extension
// to the closure, and pointwise min/max with deterministic tie-breaking.
//
// A PwaFunction is a list of (cell, affine) pieces.  Overlaps are allowed as
// long as the functions agree there — `check_consistency` decides that by
// Fourier–Motzkin, and everything downstream (well-definedness of eval, the
// Lipschitz tests) leans on it.

#include "tropilat/fm.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace tropilat {

struct PwaPiece {
    Polyhedron cell;
    AffineFunction fn;
};

struct ConsistencyViolation {
    int piece_a = 0;
    int piece_b = 0;
    Point witness;
};

class PwaFunction {
public:
    PwaFunction(int dim, int height) : dim_(dim), height_(height) {
        if (dim < 0) throw invalid_input_error("PwaFunction: negative dimension");
        if (height < 1) throw invalid_input_error("PwaFunction: height must be >= 1");
    }

    static PwaFunction single(Polyhedron cell, AffineFunction fn) {
        PwaFunction f(cell.dim(), cell.height());
        f.add_piece(std::move(cell), std::move(fn));
        return f;
    }

    // One affine function on every part of a set.
    static PwaFunction affine_on_set(const AffineFunction& fn, const PolyhedralSet& dom) {
        PwaFunction f(dom.dim(), dom.height());
        for (const auto& p : dom.parts()) f.add_piece(p, fn);
        return f;
    }

    int dim() const { return dim_; }
    int height() const { return height_; }
    const std::vector<PwaPiece>& pieces() const { return pieces_; }

    PwaFunction& add_piece(Polyhedron cell, AffineFunction fn) {
        if (cell.dim() != dim_ || cell.height() != height_ || fn.dim() != dim_ ||
            fn.height() != height_)
            throw invalid_input_error("PwaFunction: piece shape mismatch");
        pieces_.push_back({std::move(cell), std::move(fn)});
        return *this;
    }

    PolyhedralSet domain() const {
        PolyhedralSet s(dim_, height_);
        for (const auto& p : pieces_) s.add(p.cell);
        return s;
    }

    // Pieces whose cells were proved empty contribute nothing; drop them.
    PwaFunction pruned() const {
        PwaFunction f(dim_, height_);
        for (const auto& p : pieces_)
            if (!part_empty(p.cell)) f.pieces_.push_back(p);
        return f;
    }

    // Where two cells overlap their functions must agree.  Returns the first
    // violating pair with a point showing the disagreement.
    std::optional<ConsistencyViolation> check_consistency() const {
        for (size_t i = 0; i < pieces_.size(); ++i) {
            for (size_t j = i + 1; j < pieces_.size(); ++j) {
                const AffineFunction d = pieces_[i].fn - pieces_[j].fn;
                for (int sign : {+1, -1}) {
                    Polyhedron bad = pieces_[i].cell.intersect(pieces_[j].cell);
                    bad.add(Rational(sign) * d, Rel::LT);
                    if (auto pt = sample_point(bad)) {
                        return ConsistencyViolation{static_cast<int>(i), static_cast<int>(j),
                                                    *pt};
                    }
                }
            }
        }
        return std::nullopt;
    }

    void require_consistent() const {
        if (auto v = check_consistency())
            throw invalid_input_error("PwaFunction: pieces " + std::to_string(v->piece_a) +
                                      " and " + std::to_string(v->piece_b) +
                                      " disagree on their overlap");
    }

    GroupElement eval(const Point& x) const {
        for (const auto& p : pieces_)
            if (p.cell.contains(x)) return p.fn.eval(x);
        throw precondition_error("eval_pwa: point outside domain");
    }

    bool defined_at(const Point& x) const {
        for (const auto& p : pieces_)
            if (p.cell.contains(x)) return true;
        return false;
    }

    PwaFunction restrict(const PolyhedralSet& s) const {
        PwaFunction f(dim_, height_);
        for (const auto& p : pieces_)
            for (const auto& q : s.parts()) {
                Polyhedron cell = p.cell.intersect(q);
                if (!part_empty(cell)) f.add_piece(std::move(cell), p.fn);
            }
        return f;
    }

    PwaFunction operator-() const {
        PwaFunction f(dim_, height_);
        for (const auto& p : pieces_) f.add_piece(p.cell, -p.fn);
        return f;
    }

    friend PwaFunction operator*(const Rational& q, const PwaFunction& f) {
        PwaFunction g(f.dim_, f.height_);
        for (const auto& p : f.pieces_) g.add_piece(p.cell, q * p.fn);
        return g;
    }

    friend PwaFunction operator+(const PwaFunction& f, const GroupElement& c) {
        PwaFunction g(f.dim_, f.height_);
        for (const auto& p : f.pieces_) g.add_piece(p.cell, p.fn + c);
        return g;
    }

private:
    int dim_;
    int height_;
    std::vector<PwaPiece> pieces_;
};

// Pointwise sum on the common refinement; defined on the intersection of the
// two domains.
inline PwaFunction pwa_add(const PwaFunction& f, const PwaFunction& g) {
    if (f.dim() != g.dim() || f.height() != g.height())
        throw invalid_input_error("pwa_add: shape mismatch");
    PwaFunction out(f.dim(), f.height());
    for (const auto& a : f.pieces())
        for (const auto& b : g.pieces()) {
            Polyhedron cell = a.cell.intersect(b.cell);
            if (!part_empty(cell)) out.add_piece(std::move(cell), a.fn + b.fn);
        }
    return out;
}

inline PwaFunction pwa_sub(const PwaFunction& f, const PwaFunction& g) {
    return pwa_add(f, -g);
}

namespace detail {

inline void require_equal_domains(const PwaFunction& f, const PwaFunction& g,
                                  const char* who) {
    if (f.dim() != g.dim() || f.height() != g.height())
        throw invalid_input_error(std::string(who) + ": shape mismatch");
    if (!set_equal(f.domain(), g.domain()))
        throw invalid_input_error(std::string(who) + ": domain mismatch");
}

}  // namespace detail

// Pointwise min.  The tie set {F = G} goes to the first argument's piece,
// which keeps the refinement deterministic.
inline PwaFunction formal_min(const PwaFunction& f, const PwaFunction& g) {
    detail::require_equal_domains(f, g, "formal_min");
    PwaFunction out(f.dim(), f.height());
    for (const auto& a : f.pieces())
        for (const auto& b : g.pieces()) {
            Polyhedron meet = a.cell.intersect(b.cell);
            Polyhedron first = meet;  // f <= g here, including ties
            first.add(a.fn - b.fn, Rel::LE);
            if (!part_empty(first)) out.add_piece(std::move(first), a.fn);
            Polyhedron second = std::move(meet);  // g < f strictly
            second.add(b.fn - a.fn, Rel::LT);
            if (!part_empty(second)) out.add_piece(std::move(second), b.fn);
        }
    return out;
}

inline PwaFunction formal_max(const PwaFunction& f, const PwaFunction& g) {
    detail::require_equal_domains(f, g, "formal_max");
    PwaFunction out(f.dim(), f.height());
    for (const auto& a : f.pieces())
        for (const auto& b : g.pieces()) {
            Polyhedron meet = a.cell.intersect(b.cell);
            Polyhedron first = meet;  // f >= g here, including ties
            first.add(b.fn - a.fn, Rel::LE);
            if (!part_empty(first)) out.add_piece(std::move(first), a.fn);
            Polyhedron second = std::move(meet);  // g > f strictly
            second.add(a.fn - b.fn, Rel::LT);
            if (!part_empty(second)) out.add_piece(std::move(second), b.fn);
        }
    return out;
}

// --- w-combinations ----------------------------------------------------------

struct WCombinationReport {
    bool ok = false;
    // For each piece, the generator indices that realize equality somewhere
    // on that piece.
    std::vector<std::vector<int>> cover;
    Point gap_witness;  // a domain point where g differs from every generator
};

inline WCombinationReport is_w_combination(const PwaFunction& g,
                                           const std::vector<AffineFunction>& gens) {
    for (const auto& f : gens)
        if (f.dim() != g.dim() || f.height() != g.height())
            throw invalid_input_error("is_w_combination: generator shape mismatch");
    WCombinationReport rep;
    rep.cover.resize(g.pieces().size());
    for (size_t p = 0; p < g.pieces().size(); ++p) {
        const auto& piece = g.pieces()[p];
        PolyhedralSet touched(g.dim(), g.height());
        for (size_t i = 0; i < gens.size(); ++i) {
            Polyhedron eq = piece.cell;
            eq.add(piece.fn - gens[i], Rel::EQ);
            if (!part_empty(eq)) {
                rep.cover[p].push_back(static_cast<int>(i));
                touched.add(std::move(eq));
            }
        }
        auto gaps = subtract_part(piece.cell, touched);
        if (!gaps.empty()) {
            rep.ok = false;
            rep.gap_witness = *sample_point(gaps.front());
            return rep;
        }
    }
    rep.ok = true;
    return rep;
}

// --- Lipschitz ----------------------------------------------------------------

struct LipschitzCheck {
    bool ok = false;
    Point x, y;  // on failure: |F(x) - F(y)| > M |x - y|, exactly
};

// Exact decision of |F(x) - F(y)| <= M |x - y| (sup-norm) over the whole
// domain.  One FM feasibility question per ordered pair of pieces: the
// violating direction F(x) - F(y) > M |x - y| is a single conjunction since
// |x - y| is a max of coordinate differences.
inline LipschitzCheck is_lipschitz_with(const PwaFunction& f, const Int& M) {
    if (M < 0) throw invalid_input_error("is_lipschitz_with: negative constant");
    const int n = f.dim();
    const Rational m(M);
    for (const auto& a : f.pieces()) {
        for (const auto& b : f.pieces()) {
            Polyhedron sys = detail::lift_doubled(a.cell, detail::DoubleSlot::U)
                                 .intersect(detail::lift_doubled(b.cell, detail::DoubleSlot::V));
            const AffineFunction fu = detail::lift_doubled(a.fn, detail::DoubleSlot::U);
            const AffineFunction gv = detail::lift_doubled(b.fn, detail::DoubleSlot::V);
            const AffineFunction gap = fu - gv;  // F(x) - F(y) in doubled space
            for (int j = 0; j < n; ++j) {
                AffineFunction du = AffineFunction::coordinate(2 * n, j, f.height()) -
                                    AffineFunction::coordinate(2 * n, n + j, f.height());
                // F(x) - F(y) > M (x_j - y_j)  and  > M (y_j - x_j):
                sys.add(m * du - gap, Rel::LT);
                sys.add(Rational(-1) * m * du - gap, Rel::LT);
            }
            if (auto pt = sample_point(sys)) {
                LipschitzCheck bad;
                bad.ok = false;
                bad.x.assign(pt->begin(), pt->begin() + n);
                bad.y.assign(pt->begin() + n, pt->end());
                return bad;
            }
        }
    }
    LipschitzCheck good;
    good.ok = true;
    return good;
}

struct LipschitzReport {
    enum class Kind { lipschitz, not_lipschitz, unknown };
    Kind kind = Kind::unknown;
    Int constant = 0;   // minimal accepted M when kind == lipschitz
    Point x, y;         // witness when kind == not_lipschitz
    Int cap_reached = 0;
};

namespace detail {

// Convexity via the midpoint criterion without the closedness requirement —
// for finite unions of polyhedra over a divisible group, midpoint-closed is
// equivalent to convex even when the set is not topologically closed (a
// missing relative-interior point of a chord is always the exact midpoint of
// two set points close to it).
inline bool midpoint_convex(const PolyhedralSet& s) {
    for (const auto& pa : s.parts()) {
        if (part_empty(pa)) continue;
        for (const auto& pb : s.parts()) {
            if (part_empty(pb)) continue;
            std::vector<Polyhedron> branches;
            {
                Polyhedron base = lift_doubled(pa, DoubleSlot::U)
                                      .intersect(lift_doubled(pb, DoubleSlot::V));
                if (!part_empty(base)) branches.push_back(std::move(base));
            }
            for (const auto& part : s.parts()) {
                std::vector<Polyhedron> next;
                for (const auto& br : branches)
                    for (const auto& c : part.constraints())
                        for (const auto& neg : PolyhedralSet::negate_constraint(c)) {
                            Polyhedron refined = br;
                            refined.add(lift_doubled(neg.fn, DoubleSlot::Mid), neg.rel);
                            if (!part_empty(refined)) next.push_back(std::move(refined));
                        }
                branches = std::move(next);
                if (branches.empty()) break;
            }
            if (!branches.empty()) return false;
        }
    }
    return true;
}

}  // namespace detail

// Finds a valid Lipschitz constant, and the minimal one where theory allows.
//
// Convex domain: the segment argument makes the largest per-piece l1 slope
// norm always valid, so the minimal constant is pinned down by binary search
// below it.  Non-convex domain: no bound is guaranteed a priori; constants
// 0, 1, 2, 4, ... are tried up to `cap`, a first success is refined down to
// the minimal valid constant, and exhausting the cap returns "unknown" — an
// honest third answer, since non-Lipschitz functions cannot be certified.
inline LipschitzReport lipschitz_search(const PwaFunction& f, const Int& cap) {
    if (cap < 0) throw invalid_input_error("lipschitz_search: negative cap");
    const auto ok = [&](const Int& M) { return is_lipschitz_with(f, M).ok; };

    if (detail::midpoint_convex(f.domain())) {
        Int hi = 0;
        for (const auto& p : f.pieces()) {
            const Rational norm = p.fn.l1_slope_norm();
            Int c = rat_ceil(norm);
            if (c > hi) hi = c;
        }
        if (!ok(hi))
            throw internal_error("lipschitz_search: slope-norm bound failed on convex domain");
        Int lo = 0;  // minimality: search the full range below the valid bound
        while (lo < hi) {
            const Int mid = (lo + hi) / 2;
            if (ok(mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        LipschitzReport rep;
        rep.kind = LipschitzReport::Kind::lipschitz;
        rep.constant = lo;
        return rep;
    }

    Int prev_fail = -1;
    Int m = 0;
    while (m <= cap) {
        if (ok(m)) {
            Int lo = prev_fail + 1, hi = m;
            while (lo < hi) {
                const Int mid = (lo + hi) / 2;
                if (ok(mid))
                    hi = mid;
                else
                    lo = mid + 1;
            }
            LipschitzReport rep;
            rep.kind = LipschitzReport::Kind::lipschitz;
            rep.constant = lo;
            return rep;
        }
        prev_fail = m;
        m = (m == 0) ? Int(1) : Int(m * 2);
    }
    LipschitzReport rep;
    rep.kind = LipschitzReport::Kind::unknown;
    rep.cap_reached = cap;
    return rep;
}

// Continuous extension to the closure of the domain.  The caller vouches for
// the Lipschitz precondition; what is verified here is that the relaxed
// pieces still agree pairwise — the failure mode of extending something that
// was never extendable.
inline PwaFunction extend_to_closure(const PwaFunction& f) {
    PwaFunction out(f.dim(), f.height());
    for (const auto& p : f.pieces()) {
        if (part_empty(p.cell)) continue;
        out.add_piece(p.cell.closure(), p.fn);
    }
    if (auto v = out.check_consistency()) {
        throw precondition_error(
            "precondition violated: F not Lipschitz-extendable (closed pieces " +
            std::to_string(v->piece_a) + " and " + std::to_string(v->piece_b) +
            " disagree at " + canonical_key(v->witness) + ")");
    }
    return out;
}

// The affine function representing F throughout P, when F is affine there.
inline std::optional<AffineFunction> affine_on(const PwaFunction& f, const Polyhedron& p) {
    std::optional<AffineFunction> rep;
    for (const auto& piece : f.pieces()) {
        Polyhedron meet = piece.cell.intersect(p);
        if (part_empty(meet)) continue;
        if (!rep) rep = piece.fn;
    }
    if (!rep) return std::nullopt;
    // F must agree with the representative across every piece overlapping P.
    for (const auto& piece : f.pieces()) {
        const AffineFunction d = piece.fn - *rep;
        for (int sign : {+1, -1}) {
            Polyhedron bad = piece.cell.intersect(p);
            bad.add(Rational(sign) * d, Rel::LT);
            if (!part_empty(bad)) return std::nullopt;
        }
    }
    return rep;
}

}  // namespace tropilat
