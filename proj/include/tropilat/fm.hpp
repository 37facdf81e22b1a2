#pragma once

// Fourier–Motzkin elimination over the value group, with native strict-
// inequality bookkeeping and Farkas-style certificates.
//
// Every constraint carried through an elimination remembers the rational
// combination of input constraints it was derived from.  Emptiness therefore
// comes with a replayable refutation: a combination with non-negative
// weights on inequalities (equalities may be used with either sign) whose
// result has no variable left and a constant that cannot satisfy its
// relation.  Non-emptiness comes with a point, found by back-substituting
// through the elimination cascade with a fixed deterministic rule:
// midpoint of a two-sided bound, bound +/- 1 on an unbounded side, 0 when
// unconstrained.
//
// Elimination order for full decisions is always "last variable first";
// sample points are then assembled from coordinate 0 upward.

#include "tropilat/polyhedra.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tropilat {

struct RefutationEntry {
    int constraint = 0;   // index into the part's constraint list
    Rational coeff;       // negative only when the constraint is an equality
};

struct Refutation {
    int part = 0;
    std::vector<RefutationEntry> combination;
    GroupElement derived_constant{1};
    Rel derived_rel = Rel::LE;
};

struct EmptinessCertificate {
    bool empty = false;
    std::vector<Refutation> refutations;  // one per part when empty
    int witness_part = -1;                // first non-empty part otherwise
    Point witness;
};

// Replays a refutation against the system it claims to refute.
inline bool verify_refutation(const Polyhedron& p, const Refutation& r) {
    if (r.combination.empty()) return false;
    AffineFunction acc = AffineFunction::zero(p.dim(), p.height());
    Rel rel = Rel::EQ;
    for (const auto& e : r.combination) {
        if (e.constraint < 0 || e.constraint >= static_cast<int>(p.constraints().size()))
            return false;
        const LinearConstraint& c = p.constraints()[static_cast<size_t>(e.constraint)];
        if (e.coeff == 0) continue;
        if (e.coeff < 0 && c.rel != Rel::EQ) return false;
        acc += e.coeff * c.fn;
        if (c.rel == Rel::LT)
            rel = Rel::LT;
        else if (c.rel == Rel::LE && rel != Rel::LT)
            rel = Rel::LE;
    }
    if (!acc.is_constant()) return false;
    const GroupElement zero = GroupElement::zero(p.height());
    switch (rel) {
        case Rel::LE: return acc.constant() > zero;   // c <= 0 refuted by c > 0
        case Rel::LT: return acc.constant() >= zero;  // c < 0 refuted by c >= 0
        case Rel::EQ: return !(acc.constant() == zero);
    }
    return false;
}

namespace detail {

struct TrackedCon {
    AffineFunction fn;
    Rel rel;
    std::vector<Rational> combo;  // weights over the original constraint list
};

struct TrackedSystem {
    int dim = 0;
    int height = 1;
    std::vector<TrackedCon> cs;
};

inline TrackedSystem make_tracked(const Polyhedron& p) {
    TrackedSystem sys{p.dim(), p.height(), {}};
    const size_t m = p.constraints().size();
    sys.cs.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        std::vector<Rational> combo(m);
        combo[i] = 1;
        sys.cs.push_back({p.constraints()[i].fn, p.constraints()[i].rel, std::move(combo)});
    }
    return sys;
}

inline Refutation refutation_from(const TrackedCon& c) {
    Refutation r;
    for (size_t i = 0; i < c.combo.size(); ++i)
        if (c.combo[i] != 0) r.combination.push_back({static_cast<int>(i), c.combo[i]});
    r.derived_constant = c.fn.constant();
    r.derived_rel = c.rel;
    return r;
}

inline std::vector<Rational> combo_sum(const std::vector<Rational>& a, const Rational& la,
                                       const std::vector<Rational>& b, const Rational& lb) {
    std::vector<Rational> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = la * a[i] + lb * b[i];
    return out;
}

// Removes rows that hold identically; reports the first row that can never
// hold.  Rows with variables are left alone.
inline std::optional<Refutation> scan_and_clean(TrackedSystem& sys) {
    std::vector<TrackedCon> kept;
    kept.reserve(sys.cs.size());
    std::optional<Refutation> found;
    for (auto& c : sys.cs) {
        if (!c.fn.is_constant()) {
            kept.push_back(std::move(c));
            continue;
        }
        const LinearConstraint lc{c.fn, c.rel};
        if (lc.constant_truth()) continue;  // identically true: drop
        if (!found) found = refutation_from(c);
        kept.push_back(std::move(c));  // keep the false row: it encodes emptiness
    }
    sys.cs = std::move(kept);
    return found;
}

// Same-normal dominance: among inequality rows whose slope vectors agree up
// to positive scale, only the tightest upper/strict pair survives.
inline void dominance_prune(TrackedSystem& sys) {
    // Key: slopes divided by |leading slope|.
    std::map<std::string, std::vector<size_t>> buckets;
    for (size_t i = 0; i < sys.cs.size(); ++i) {
        const TrackedCon& c = sys.cs[i];
        if (c.rel == Rel::EQ || c.fn.is_constant()) continue;
        Rational lead;
        for (const auto& m : c.fn.coeffs())
            if (m != 0) {
                lead = rat_abs(m);
                break;
            }
        std::string key;
        for (const auto& m : c.fn.coeffs()) {
            key += encode_rational(m / lead);
            key += ',';
        }
        buckets[key].push_back(i);
    }
    std::vector<bool> drop(sys.cs.size(), false);
    for (const auto& [key, idxs] : buckets) {
        if (idxs.size() < 2) continue;
        // Normalize constants to the common scale and keep the strongest of
        // each kind:  f + c <= 0 is tighter for larger c.
        std::optional<size_t> best_le, best_lt;
        std::optional<GroupElement> c_le, c_lt;
        for (size_t i : idxs) {
            const TrackedCon& c = sys.cs[i];
            Rational lead;
            for (const auto& m : c.fn.coeffs())
                if (m != 0) {
                    lead = rat_abs(m);
                    break;
                }
            GroupElement scaled = (Rational(1) / lead) * c.fn.constant();
            if (c.rel == Rel::LE) {
                if (!best_le || scaled > *c_le) {
                    if (best_le) drop[*best_le] = true;
                    best_le = i;
                    c_le = scaled;
                } else {
                    drop[i] = true;
                }
            } else {
                if (!best_lt || scaled > *c_lt) {
                    if (best_lt) drop[*best_lt] = true;
                    best_lt = i;
                    c_lt = scaled;
                } else {
                    drop[i] = true;
                }
            }
        }
        if (best_le && best_lt) {
            // f <= -a vs f < -b: the strict row wins unless the non-strict
            // constant is strictly tighter.
            if (*c_lt >= *c_le)
                drop[*best_le] = true;
            else
                drop[*best_lt] = true;
        }
    }
    std::vector<TrackedCon> kept;
    kept.reserve(sys.cs.size());
    for (size_t i = 0; i < sys.cs.size(); ++i)
        if (!drop[i]) kept.push_back(std::move(sys.cs[i]));
    sys.cs = std::move(kept);
}

// One elimination step: projects out the last variable.
inline TrackedSystem eliminate_last(const TrackedSystem& sys) {
    const int v = sys.dim - 1;
    TrackedSystem out{sys.dim - 1, sys.height, {}};
    if (v < 0) throw internal_error("eliminate_last: no variable left");

    // An equality involving the variable defines it; substitute and drop.
    const TrackedCon* eq = nullptr;
    for (const auto& c : sys.cs)
        if (c.rel == Rel::EQ && c.fn.coeff(v) != 0) {
            eq = &c;
            break;
        }
    if (eq) {
        for (const auto& c : sys.cs) {
            if (&c == eq) continue;
            const Rational a = c.fn.coeff(v);
            if (a == 0) {
                out.cs.push_back({c.fn.drop_var(v), c.rel, c.combo});
                continue;
            }
            const Rational lambda = -a / eq->fn.coeff(v);
            AffineFunction fn = c.fn + lambda * eq->fn;
            out.cs.push_back(
                {fn.drop_var(v), c.rel, combo_sum(c.combo, 1, eq->combo, lambda)});
        }
        dominance_prune(out);
        return out;
    }

    std::vector<const TrackedCon*> lower, upper;
    for (const auto& c : sys.cs) {
        const Rational a = c.fn.coeff(v);
        if (a == 0)
            out.cs.push_back({c.fn.drop_var(v), c.rel, c.combo});
        else if (a > 0)
            upper.push_back(&c);
        else
            lower.push_back(&c);
    }
    for (const auto* lo : lower) {
        for (const auto* up : upper) {
            const Rational ll = Rational(1) / -lo->fn.coeff(v);  // > 0
            const Rational lu = Rational(1) / up->fn.coeff(v);   // > 0
            AffineFunction fn = ll * lo->fn + lu * up->fn;
            const Rel rel =
                (lo->rel == Rel::LT || up->rel == Rel::LT) ? Rel::LT : Rel::LE;
            out.cs.push_back({fn.drop_var(v), rel, combo_sum(lo->combo, ll, up->combo, lu)});
        }
    }
    dominance_prune(out);
    return out;
}

struct Cascade {
    bool empty = false;
    Refutation refutation;
    // stages[k] constrains the first k variables; stages[n] is the input.
    std::vector<TrackedSystem> stages;
};

inline Cascade run_cascade(const Polyhedron& p) {
    Cascade out;
    out.stages.resize(static_cast<size_t>(p.dim()) + 1);
    out.stages[static_cast<size_t>(p.dim())] = make_tracked(p);
    for (int k = p.dim(); k >= 0; --k) {
        auto& sys = out.stages[static_cast<size_t>(k)];
        if (auto r = scan_and_clean(sys)) {
            out.empty = true;
            out.refutation = *r;
            return out;
        }
        if (k > 0) out.stages[static_cast<size_t>(k - 1)] = eliminate_last(sys);
    }
    return out;
}

}  // namespace detail

// --- public operations ------------------------------------------------------

// Projects out variable i.  The result describes exactly { x' : some x
// extends x' into P } — soundness and completeness are what the test suite
// exercises by lifting points back.
inline Polyhedron fm_eliminate(const Polyhedron& p, int i) {
    if (i < 0 || i >= p.dim()) throw invalid_input_error("fm_eliminate: bad variable");
    // Rotate variable i into the last slot, eliminate, shapes stay aligned.
    detail::TrackedSystem sys = detail::make_tracked(p);
    if (i != p.dim() - 1) {
        for (auto& c : sys.cs) {
            std::vector<Rational> m = c.fn.coeffs();
            const Rational a = m[static_cast<size_t>(i)];
            m.erase(m.begin() + i);
            m.push_back(a);
            c.fn = AffineFunction(std::move(m), c.fn.constant());
        }
    }
    (void)detail::scan_and_clean(sys);
    detail::TrackedSystem res = detail::eliminate_last(sys);
    Polyhedron out(p.dim() - 1, p.height());
    for (auto& c : res.cs) out.add(std::move(c.fn), c.rel);
    return out;
}

// Projection onto an ascending list of coordinates.
inline Polyhedron fm_project(const Polyhedron& p, const std::vector<int>& keep) {
    Polyhedron cur = p;
    for (int i = p.dim() - 1; i >= 0; --i) {
        bool kept = false;
        for (int k : keep) kept |= (k == i);
        if (!kept) cur = fm_eliminate(cur, i);
    }
    return cur;
}

inline PolyhedralSet fm_project(const PolyhedralSet& s, const std::vector<int>& keep) {
    PolyhedralSet out(static_cast<int>(keep.size()), s.height());
    for (const auto& p : s.parts()) out.add(fm_project(p, keep));
    return out;
}

inline std::optional<Refutation> part_refutation(const Polyhedron& p) {
    detail::Cascade c = detail::run_cascade(p);
    if (!c.empty) return std::nullopt;
    return c.refutation;
}

inline bool part_empty(const Polyhedron& p) { return part_refutation(p).has_value(); }

// Deterministic point of a non-empty system; nullopt on an empty one.
inline std::optional<Point> sample_point(const Polyhedron& p) {
    detail::Cascade casc = detail::run_cascade(p);
    if (casc.empty) return std::nullopt;
    const int h = p.height();
    const GroupElement one = GroupElement::scalar(1, h);
    Point x;
    x.reserve(static_cast<size_t>(p.dim()));
    for (int k = 1; k <= p.dim(); ++k) {
        const auto& sys = casc.stages[static_cast<size_t>(k)];
        const int v = k - 1;
        std::optional<GroupElement> lo, hi;
        bool lo_strict = false, hi_strict = false;
        for (const auto& c : sys.cs) {
            const Rational a = c.fn.coeff(v);
            if (a == 0) continue;
            // a*x_v + rest(x) rel 0  =>  bound at -rest(x)/a.
            GroupElement rest = c.fn.constant();
            for (int j = 0; j < v; ++j)
                if (c.fn.coeff(j) != 0) rest += c.fn.coeff(j) * x[static_cast<size_t>(j)];
            GroupElement bound = (Rational(-1) / a) * rest;
            const bool strict = c.rel == Rel::LT;
            if (c.rel == Rel::EQ || a > 0) {  // upper
                if (!hi || bound < *hi || (bound == *hi && strict)) {
                    hi = bound;
                    hi_strict = strict;
                }
            }
            if (c.rel == Rel::EQ || a < 0) {  // lower
                if (!lo || bound > *lo || (bound == *lo && strict)) {
                    lo = bound;
                    lo_strict = strict;
                }
            }
        }
        GroupElement val(h);
        if (lo && hi) {
            if (*lo == *hi) {
                if (lo_strict || hi_strict)
                    throw internal_error("sample_point: degenerate strict interval");
                val = *lo;
            } else if (*lo < *hi) {
                val = Rational(1, 2) * (*lo + *hi);
            } else {
                throw internal_error("sample_point: crossed bounds in feasible system");
            }
        } else if (lo) {
            val = *lo + one;
        } else if (hi) {
            val = *hi - one;
        }
        x.push_back(std::move(val));
    }
    if (!p.contains(x)) throw internal_error("sample_point: verification failed");
    return x;
}

inline EmptinessCertificate is_empty(const PolyhedralSet& s) {
    EmptinessCertificate cert;
    std::vector<Refutation> refs;
    for (size_t i = 0; i < s.parts().size(); ++i) {
        auto r = part_refutation(s.parts()[i]);
        if (!r) {
            cert.empty = false;
            cert.witness_part = static_cast<int>(i);
            cert.witness = *sample_point(s.parts()[i]);
            return cert;
        }
        r->part = static_cast<int>(i);
        refs.push_back(std::move(*r));
    }
    cert.empty = true;
    cert.refutations = std::move(refs);
    return cert;
}

inline bool set_empty(const PolyhedralSet& s) {
    for (const auto& p : s.parts())
        if (!part_empty(p)) return false;
    return true;
}

// P minus a union, expanded disjunct-by-disjunct with eager pruning.
inline std::vector<Polyhedron> subtract_part(const Polyhedron& p, const PolyhedralSet& t) {
    std::vector<Polyhedron> acc;
    if (!part_empty(p)) acc.push_back(p);
    for (const auto& q : t.parts()) {
        std::vector<Polyhedron> next;
        for (const auto& d : acc) {
            for (const auto& c : q.constraints()) {
                for (const auto& neg : PolyhedralSet::negate_constraint(c)) {
                    Polyhedron refined = d;
                    refined.add(neg);
                    if (!part_empty(refined)) next.push_back(std::move(refined));
                }
            }
        }
        acc = std::move(next);
    }
    return acc;
}

inline PolyhedralSet difference(const PolyhedralSet& s, const PolyhedralSet& t) {
    PolyhedralSet out(s.dim(), s.height());
    for (const auto& p : s.parts())
        for (auto& d : subtract_part(p, t)) out.add(std::move(d));
    return out;
}

inline bool is_subset(const PolyhedralSet& s, const PolyhedralSet& t) {
    for (const auto& p : s.parts())
        if (!subtract_part(p, t).empty()) return false;
    return true;
}

inline bool is_subset(const Polyhedron& p, const PolyhedralSet& t) {
    return subtract_part(p, t).empty();
}

inline bool set_equal(const PolyhedralSet& s, const PolyhedralSet& t) {
    return is_subset(s, t) && is_subset(t, s);
}

// Canonical form: parts proved empty are removed, the rest sorted by their
// encoding.
inline PolyhedralSet canonicalize(const PolyhedralSet& s) {
    PolyhedralSet out(s.dim(), s.height());
    for (const auto& p : s.parts())
        if (!part_empty(p)) out.add(p);
    return out.sorted();
}

// Topological closure: strict faces relax to their non-strict forms, part by
// part (parts proved empty first get dropped — the closure of nothing is
// nothing, not a relaxed phantom).
inline PolyhedralSet closure(const PolyhedralSet& s) {
    PolyhedralSet out(s.dim(), s.height());
    for (const auto& p : s.parts())
        if (!part_empty(p)) out.add(p.closure());
    return out;
}

inline bool is_closed(const PolyhedralSet& s) {
    return is_subset(closure(s), s);
}

namespace detail {

// The relative-interior test behind `dimension`: make every constraint
// strict; an equality with a real slope kills the interior outright.
inline std::optional<Polyhedron> strict_interior_system(const Polyhedron& p) {
    Polyhedron out(p.dim(), p.height());
    for (const auto& c : p.constraints()) {
        if (c.is_constant()) {
            if (!c.constant_truth()) return std::nullopt;
            continue;
        }
        if (c.rel == Rel::EQ) return std::nullopt;
        out.add(c.fn, Rel::LT);
    }
    return out;
}

inline bool projection_has_interior(const Polyhedron& p, const std::vector<int>& keep) {
    const Polyhedron proj = fm_project(p, keep);
    auto strict = strict_interior_system(proj);
    return strict && !part_empty(*strict);
}

// All ascending index tuples of size k out of n, lexicographic.
inline void for_each_subset(int n, int k, const std::function<bool(const std::vector<int>&)>& f) {
    std::vector<int> idx(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
    if (k == 0) {
        f(idx);
        return;
    }
    while (true) {
        if (!f(idx)) return;
        int i = k - 1;
        while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
}

}  // namespace detail

// o-minimal dimension: the largest d such that some d-coordinate projection
// of some part has non-empty interior; -1 for the empty set.
inline int dimension(const PolyhedralSet& s) {
    int best = -1;
    for (const auto& p : s.parts()) {
        if (part_empty(p)) continue;
        if (best < 0) best = 0;
        for (int d = p.dim(); d > best; --d) {
            bool found = false;
            detail::for_each_subset(p.dim(), d, [&](const std::vector<int>& keep) {
                if (detail::projection_has_interior(p, keep)) {
                    found = true;
                    return false;
                }
                return true;
            });
            if (found) {
                best = d;
                break;
            }
        }
        if (best == s.dim()) break;
    }
    return best;
}

// Per-coordinate boundedness, decided by one-variable projections.
inline bool is_bounded(const Polyhedron& p, int coordinate) {
    const Polyhedron proj = fm_project(p, {coordinate});
    if (part_empty(proj)) return true;
    bool has_upper = false, has_lower = false;
    for (const auto& c : proj.constraints()) {
        const Rational a = c.fn.coeff(0);
        if (a == 0) continue;
        if (c.rel == Rel::EQ) return true;
        (a > 0 ? has_upper : has_lower) = true;
    }
    return has_upper && has_lower;
}

inline bool is_bounded(const PolyhedralSet& s) {
    for (const auto& p : s.parts())
        for (int i = 0; i < s.dim(); ++i)
            if (!is_bounded(p, i)) return false;
    return true;
}

namespace detail {

// Lifts a constraint of the n-space into the doubled (u, v)-space evaluated
// at u, at v, or at the midpoint (u + v)/2.
enum class DoubleSlot { U, V, Mid };

inline AffineFunction lift_doubled(const AffineFunction& f, DoubleSlot slot) {
    const int n = f.dim();
    std::vector<Rational> m(static_cast<size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        switch (slot) {
            case DoubleSlot::U: m[static_cast<size_t>(i)] = f.coeff(i); break;
            case DoubleSlot::V: m[static_cast<size_t>(n + i)] = f.coeff(i); break;
            case DoubleSlot::Mid:
                m[static_cast<size_t>(i)] = f.coeff(i) / 2;
                m[static_cast<size_t>(n + i)] = f.coeff(i) / 2;
                break;
        }
    }
    return AffineFunction(std::move(m), f.constant());
}

inline Polyhedron lift_doubled(const Polyhedron& p, DoubleSlot slot) {
    Polyhedron out(2 * p.dim(), p.height());
    for (const auto& c : p.constraints()) out.add(lift_doubled(c.fn, slot), c.rel);
    return out;
}

}  // namespace detail

// Midpoint criterion on a closed set: S is convex iff no u, v in S have
// (u+v)/2 outside S.  The violation search expands "midpoint outside every
// part" disjunctively with eager pruning.
inline bool is_convex(const PolyhedralSet& s) {
    if (!is_closed(s))
        throw precondition_error("is_convex: set must be closed (midpoint criterion)");
    const int n = s.dim();
    for (const auto& pa : s.parts()) {
        if (part_empty(pa)) continue;
        for (const auto& pb : s.parts()) {
            if (part_empty(pb)) continue;
            std::vector<Polyhedron> branches;
            {
                Polyhedron base = detail::lift_doubled(pa, detail::DoubleSlot::U)
                                      .intersect(detail::lift_doubled(pb, detail::DoubleSlot::V));
                if (!part_empty(base)) branches.push_back(std::move(base));
            }
            for (const auto& part : s.parts()) {
                std::vector<Polyhedron> next;
                for (const auto& b : branches) {
                    for (const auto& c : part.constraints()) {
                        for (const auto& neg : PolyhedralSet::negate_constraint(c)) {
                            Polyhedron refined = b;
                            refined.add(detail::lift_doubled(neg.fn, detail::DoubleSlot::Mid),
                                        neg.rel);
                            if (!part_empty(refined)) next.push_back(std::move(refined));
                        }
                    }
                }
                branches = std::move(next);
                if (branches.empty()) break;
            }
            if (!branches.empty()) return false;
        }
    }
    (void)n;
    return true;
}

// FM-complete redundancy removal (the expensive, flag-guarded variant):
// drops every constraint that the remaining ones entail.
inline Polyhedron remove_redundant(const Polyhedron& p) {
    std::vector<LinearConstraint> kept(p.constraints().begin(), p.constraints().end());
    for (size_t i = kept.size(); i-- > 0;) {
        Polyhedron rest(p.dim(), p.height());
        for (size_t j = 0; j < kept.size(); ++j)
            if (j != i) rest.add(kept[j]);
        bool redundant = true;
        for (const auto& neg : PolyhedralSet::negate_constraint(kept[i])) {
            Polyhedron test = rest;
            test.add(neg);
            if (!part_empty(test)) {
                redundant = false;
                break;
            }
        }
        if (redundant) kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    }
    Polyhedron out(p.dim(), p.height());
    for (auto& c : kept) out.add(std::move(c));
    return out;
}

struct FmOptions {
    bool full_redundancy = false;
};

inline Polyhedron fm_eliminate(const Polyhedron& p, int i, const FmOptions& opts) {
    Polyhedron out = fm_eliminate(p, i);
    if (opts.full_redundancy) out = remove_redundant(out);
    return out;
}

// Exact range of an affine functional over one part: bounds with strictness
// flags, or nullopt bounds on unbounded sides.  Empty parts report empty.
struct AffineRange {
    bool empty = false;
    std::optional<GroupElement> lo, hi;
    bool lo_strict = false, hi_strict = false;
};

inline AffineRange range_of(const AffineFunction& f, const Polyhedron& p) {
    // Fresh variable t first, then the original block: t - f(x) = 0.
    const int n = p.dim();
    Polyhedron lifted(n + 1, p.height());
    {
        std::vector<Rational> m(static_cast<size_t>(n + 1));
        m[0] = 1;
        for (int i = 0; i < n; ++i) m[static_cast<size_t>(i + 1)] = -f.coeff(i);
        lifted.add(AffineFunction(std::move(m), -f.constant()), Rel::EQ);
    }
    for (const auto& c : p.constraints()) lifted.add(c.fn.insert_var(0), c.rel);

    detail::Cascade casc = detail::run_cascade(lifted);
    AffineRange out;
    if (casc.empty) {
        out.empty = true;
        return out;
    }
    const auto& sys = casc.stages[1];
    for (const auto& c : sys.cs) {
        const Rational a = c.fn.coeff(0);
        if (a == 0) continue;
        GroupElement bound = (Rational(-1) / a) * c.fn.constant();
        const bool strict = c.rel == Rel::LT;
        if (c.rel == Rel::EQ || a > 0) {
            if (!out.hi || bound < *out.hi || (bound == *out.hi && strict)) {
                out.hi = bound;
                out.hi_strict = strict;
            }
        }
        if (c.rel == Rel::EQ || a < 0) {
            if (!out.lo || bound > *out.lo || (bound == *out.lo && strict)) {
                out.lo = bound;
                out.lo_strict = strict;
            }
        }
    }
    return out;
}

}  // namespace tropilat
