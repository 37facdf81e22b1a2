#pragma once

// Lattice terms over {+, -, min, max} with affine leaves (constants,
// coordinates, generators), their min-of-max normal form, exact equality
// checking against piecewise-affine data, and min-max synthesis: given a
// function that agrees with some generator at every point of its domain,
// either produce a defining min-of-max term over the generators or a pair of
// points witnessing that no such term exists.

#include "tropilat/pwa.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tropilat {

class LatticeTerm {
public:
    enum class Op { Const, Coord, Gen, Neg, Add, Min, Max, IntScale };

    static LatticeTerm constant(GroupElement c) {
        LatticeTerm t(Op::Const);
        t.const_ = std::move(c);
        return t;
    }
    static LatticeTerm coordinate(int i) {
        LatticeTerm t(Op::Coord);
        t.index_ = i;
        return t;
    }
    static LatticeTerm generator(int j) {
        LatticeTerm t(Op::Gen);
        t.index_ = j;
        return t;
    }
    static LatticeTerm neg(LatticeTerm a) {
        LatticeTerm t(Op::Neg);
        t.args_.push_back(std::move(a));
        return t;
    }
    static LatticeTerm add(LatticeTerm a, LatticeTerm b) {
        LatticeTerm t(Op::Add);
        t.args_.push_back(std::move(a));
        t.args_.push_back(std::move(b));
        return t;
    }
    static LatticeTerm min(LatticeTerm a, LatticeTerm b) {
        LatticeTerm t(Op::Min);
        t.args_.push_back(std::move(a));
        t.args_.push_back(std::move(b));
        return t;
    }
    static LatticeTerm max(LatticeTerm a, LatticeTerm b) {
        LatticeTerm t(Op::Max);
        t.args_.push_back(std::move(a));
        t.args_.push_back(std::move(b));
        return t;
    }
    static LatticeTerm scale(Int k, LatticeTerm a) {
        LatticeTerm t(Op::IntScale);
        t.k_ = std::move(k);
        t.args_.push_back(std::move(a));
        return t;
    }

    Op op() const { return op_; }
    const GroupElement& const_value() const { return const_; }
    int index() const { return index_; }
    const Int& scale_factor() const { return k_; }
    const std::vector<LatticeTerm>& args() const { return args_; }

    GroupElement eval(const Point& x, const std::vector<AffineFunction>& gens) const {
        switch (op_) {
            case Op::Const: return const_;
            case Op::Coord:
                if (index_ < 0 || index_ >= static_cast<int>(x.size()))
                    throw invalid_input_error("eval_term: coordinate out of range");
                return x[static_cast<size_t>(index_)];
            case Op::Gen:
                if (index_ < 0 || index_ >= static_cast<int>(gens.size()))
                    throw invalid_input_error("eval_term: generator out of range");
                return gens[static_cast<size_t>(index_)].eval(x);
            case Op::Neg: return -args_[0].eval(x, gens);
            case Op::Add: return args_[0].eval(x, gens) + args_[1].eval(x, gens);
            case Op::Min: {
                GroupElement a = args_[0].eval(x, gens), b = args_[1].eval(x, gens);
                return a <= b ? a : b;
            }
            case Op::Max: {
                GroupElement a = args_[0].eval(x, gens), b = args_[1].eval(x, gens);
                return a >= b ? a : b;
            }
            case Op::IntScale: return Rational(k_) * args_[0].eval(x, gens);
        }
        throw internal_error("eval_term: unreachable");
    }

private:
    explicit LatticeTerm(Op op) : op_(op), const_(1) {}

    Op op_;
    GroupElement const_;
    int index_ = 0;
    Int k_ = 0;
    std::vector<LatticeTerm> args_;
};

// min over clauses of max over each clause; clauses never empty.
struct MinMaxNormalForm {
    std::vector<std::vector<AffineFunction>> clauses;

    GroupElement eval(const Point& x) const {
        if (clauses.empty()) throw internal_error("normal form with no clauses");
        std::optional<GroupElement> best;
        for (const auto& clause : clauses) {
            std::optional<GroupElement> cmax;
            for (const auto& f : clause) {
                GroupElement v = f.eval(x);
                if (!cmax || v > *cmax) cmax = std::move(v);
            }
            if (!best || *cmax < *best) best = std::move(*cmax);
        }
        return *best;
    }
};

namespace detail {

inline std::vector<AffineFunction> sorted_clause(std::vector<AffineFunction> clause) {
    std::map<std::string, AffineFunction> by_key;
    for (auto& f : clause) by_key.emplace(f.canonical_key(), std::move(f));
    std::vector<AffineFunction> out;
    out.reserve(by_key.size());
    for (auto& [k, f] : by_key) out.push_back(std::move(f));
    return out;
}

inline std::vector<std::string> clause_keys(const std::vector<AffineFunction>& clause) {
    std::vector<std::string> keys;
    keys.reserve(clause.size());
    for (const auto& f : clause) keys.push_back(f.canonical_key());
    return keys;
}

// Dedupe affines inside clauses, drop clauses that contain another clause
// (max over a superset is pointwise no smaller, so the superset clause never
// wins the outer min), sort for determinism.
inline MinMaxNormalForm tidy(MinMaxNormalForm nf) {
    for (auto& clause : nf.clauses) clause = sorted_clause(std::move(clause));
    std::vector<std::vector<std::string>> keys;
    keys.reserve(nf.clauses.size());
    for (const auto& clause : nf.clauses) keys.push_back(clause_keys(clause));

    std::vector<bool> drop(nf.clauses.size(), false);
    for (size_t i = 0; i < nf.clauses.size(); ++i) {
        for (size_t j = 0; j < nf.clauses.size() && !drop[i]; ++j) {
            if (i == j) continue;
            if (keys[i] == keys[j]) {
                if (i > j) drop[i] = true;  // duplicate: keep the first
            } else if (std::includes(keys[i].begin(), keys[i].end(), keys[j].begin(),
                                     keys[j].end())) {
                drop[i] = true;  // proper superset of clause j: never the min
            }
        }
    }
    MinMaxNormalForm out;
    std::vector<std::pair<std::vector<std::string>, size_t>> order;
    for (size_t i = 0; i < nf.clauses.size(); ++i)
        if (!drop[i]) order.emplace_back(keys[i], i);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return a.first < b.first;
    });
    for (auto& [k, i] : order) out.clauses.push_back(std::move(nf.clauses[i]));
    return out;
}

// max_i min_j g_ij  ->  min over choice functions of max_i g_{i, sigma(i)}.
inline MinMaxNormalForm maxmin_to_minmax(const std::vector<std::vector<AffineFunction>>& rows) {
    MinMaxNormalForm out;
    std::vector<size_t> choice(rows.size(), 0);
    while (true) {
        std::vector<AffineFunction> clause;
        clause.reserve(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) clause.push_back(rows[i][choice[i]]);
        out.clauses.push_back(std::move(clause));
        size_t i = 0;
        while (i < rows.size() && choice[i] + 1 == rows[i].size()) choice[i++] = 0;
        if (i == rows.size()) break;
        ++choice[i];
    }
    return out;
}

}  // namespace detail

// Rewrites a term to min-of-max form: sums distribute over min/max, negation
// swaps them, scaling is sign-aware; the result is deduped and deterministic.
inline MinMaxNormalForm normalize(const LatticeTerm& t, const std::vector<AffineFunction>& gens,
                                  int dim, int height) {
    using Op = LatticeTerm::Op;
    switch (t.op()) {
        case Op::Const: {
            GroupElement c = t.const_value();
            if (c.height() != height)
                throw invalid_input_error("normalize: constant height mismatch");
            return {{{AffineFunction::constant_fn(dim, std::move(c))}}};
        }
        case Op::Coord:
            if (t.index() < 0 || t.index() >= dim)
                throw invalid_input_error("normalize: coordinate out of range");
            return {{{AffineFunction::coordinate(dim, t.index(), height)}}};
        case Op::Gen: {
            if (t.index() < 0 || t.index() >= static_cast<int>(gens.size()))
                throw invalid_input_error("normalize: generator out of range");
            const AffineFunction& g = gens[static_cast<size_t>(t.index())];
            if (g.dim() != dim || g.height() != height)
                throw invalid_input_error("normalize: generator shape mismatch");
            return {{{g}}};
        }
        case Op::Min: {
            MinMaxNormalForm a = normalize(t.args()[0], gens, dim, height);
            MinMaxNormalForm b = normalize(t.args()[1], gens, dim, height);
            for (auto& clause : b.clauses) a.clauses.push_back(std::move(clause));
            return detail::tidy(std::move(a));
        }
        case Op::Max: {
            MinMaxNormalForm a = normalize(t.args()[0], gens, dim, height);
            MinMaxNormalForm b = normalize(t.args()[1], gens, dim, height);
            MinMaxNormalForm out;
            for (const auto& ca : a.clauses)
                for (const auto& cb : b.clauses) {
                    std::vector<AffineFunction> clause = ca;
                    clause.insert(clause.end(), cb.begin(), cb.end());
                    out.clauses.push_back(std::move(clause));
                }
            return detail::tidy(std::move(out));
        }
        case Op::Add: {
            MinMaxNormalForm a = normalize(t.args()[0], gens, dim, height);
            MinMaxNormalForm b = normalize(t.args()[1], gens, dim, height);
            MinMaxNormalForm out;
            for (const auto& ca : a.clauses)
                for (const auto& cb : b.clauses) {
                    std::vector<AffineFunction> clause;
                    clause.reserve(ca.size() * cb.size());
                    for (const auto& fa : ca)
                        for (const auto& fb : cb) clause.push_back(fa + fb);
                    out.clauses.push_back(std::move(clause));
                }
            return detail::tidy(std::move(out));
        }
        case Op::Neg: {
            MinMaxNormalForm a = normalize(t.args()[0], gens, dim, height);
            // -(min of max) = max of min of negations; re-expand.
            std::vector<std::vector<AffineFunction>> rows;
            rows.reserve(a.clauses.size());
            for (const auto& clause : a.clauses) {
                std::vector<AffineFunction> row;
                row.reserve(clause.size());
                for (const auto& f : clause) row.push_back(-f);
                rows.push_back(std::move(row));
            }
            return detail::tidy(detail::maxmin_to_minmax(rows));
        }
        case Op::IntScale: {
            const Int& k = t.scale_factor();
            MinMaxNormalForm a =
                normalize(k < 0 ? LatticeTerm::neg(t.args()[0]) : t.args()[0], gens, dim,
                          height);
            const Rational f = k < 0 ? Rational(-k) : Rational(k);
            for (auto& clause : a.clauses)
                for (auto& fn : clause) fn = f * fn;
            return detail::tidy(std::move(a));
        }
    }
    throw internal_error("normalize: unreachable");
}

namespace detail {

// Attainment cells of a min-of-max on one polyhedron: pick the clause whose
// max attains the min and, per clause, the element attaining its max; the
// constraints of each choice are affine, branches are pruned as soon as they
// go empty.  Cells overlap only on ties, where all choices agree in value.
inline void nf_cells_on(const MinMaxNormalForm& nf, const Polyhedron& part,
                        PwaFunction& out) {
    const size_t k = nf.clauses.size();
    for (size_t a = 0; a < k; ++a) {
        for (const auto& winner : nf.clauses[a]) {
            Polyhedron base = part;
            for (const auto& other : nf.clauses[a])
                base.add(other - winner, Rel::LE);  // winner attains clause a
            if (part_empty(base)) continue;
            // Every other clause needs an element >= winner that attains it.
            std::vector<Polyhedron> branches{std::move(base)};
            for (size_t c = 0; c < k && !branches.empty(); ++c) {
                if (c == a) continue;
                std::vector<Polyhedron> next;
                for (const auto& br : branches) {
                    for (const auto& e : nf.clauses[c]) {
                        Polyhedron refined = br;
                        for (const auto& other : nf.clauses[c])
                            refined.add(other - e, Rel::LE);
                        refined.add(winner - e, Rel::LE);
                        if (!part_empty(refined)) next.push_back(std::move(refined));
                    }
                }
                branches = std::move(next);
            }
            for (auto& cell : branches) out.add_piece(std::move(cell), winner);
        }
    }
}

}  // namespace detail

// The normal form as a PwaFunction on every part of D.
inline PwaFunction nf_to_pwa(const MinMaxNormalForm& nf, const PolyhedralSet& d) {
    if (nf.clauses.empty()) throw internal_error("nf_to_pwa: empty normal form");
    PwaFunction out(d.dim(), d.height());
    for (const auto& part : d.parts()) detail::nf_cells_on(nf, part, out);
    return out;
}

struct TermEquality {
    bool equal = false;
    Point x;                 // on inequality: a witness point in D
    GroupElement term_value{1};
    GroupElement fn_value{1};
};

// Decides {x in D : nf(x) != g(x)} = 0 piece-by-piece and clause-by-clause,
// without materializing the normal form as a function.  nf(x) < g(x) means
// some clause max sits below g; nf(x) > g(x) means every clause max sits
// above g — the latter is a per-clause element choice, expanded with eager
// pruning.
inline TermEquality term_equals_on(const MinMaxNormalForm& nf, const PwaFunction& g,
                                   const PolyhedralSet& d) {
    if (g.dim() != d.dim() || g.height() != d.height())
        throw invalid_input_error("term_equals_on: shape mismatch");
    const auto witness_at = [&](Point pt) {
        TermEquality w;
        w.equal = false;
        w.term_value = nf.eval(pt);
        w.fn_value = g.eval(pt);
        w.x = std::move(pt);
        return w;
    };
    for (const auto& part : d.parts()) {
        for (const auto& piece : g.pieces()) {
            const Polyhedron scope = part.intersect(piece.cell);
            // Direction 1: g exceeds some whole clause.
            for (const auto& clause : nf.clauses) {
                Polyhedron bad = scope;
                for (const auto& e : clause) bad.add(e - piece.fn, Rel::LT);
                if (auto pt = sample_point(bad)) return witness_at(std::move(*pt));
            }
            // Direction 2: every clause max exceeds g.
            std::vector<Polyhedron> branches;
            if (!part_empty(scope)) branches.push_back(scope);
            for (const auto& clause : nf.clauses) {
                std::vector<Polyhedron> next;
                for (const auto& br : branches) {
                    for (const auto& e : clause) {
                        Polyhedron refined = br;
                        refined.add(piece.fn - e, Rel::LT);
                        if (!part_empty(refined)) next.push_back(std::move(refined));
                    }
                }
                branches = std::move(next);
                if (branches.empty()) break;
            }
            if (!branches.empty())
                return witness_at(*sample_point(branches.front()));
        }
    }
    // Every point of D must be covered by g (else nf has a value there that g
    // cannot match).
    for (const auto& part : d.parts()) {
        auto gaps = subtract_part(part, g.domain());
        if (!gaps.empty()) {
            TermEquality w;
            w.equal = false;
            w.x = *sample_point(gaps.front());
            w.term_value = nf.eval(w.x);
            w.fn_value = GroupElement::zero(d.height());
            return w;
        }
    }
    TermEquality ok;
    ok.equal = true;
    return ok;
}

// --- min-max synthesis --------------------------------------------------------

struct SynthesisResult {
    enum class Outcome { accepted, rejected };
    Outcome outcome = Outcome::rejected;
    // accepted:
    LatticeTerm term = LatticeTerm::constant(GroupElement(1));
    MinMaxNormalForm nf;
    std::vector<std::vector<int>> chosen_subsets;  // S_min, sorted
    std::string transcript;
    // rejected: a pair violating the two-point criterion against every
    // generator.
    Point x, y;
};

namespace detail {

// Is g <= max_{i in X} f_i throughout D?  A violation lives where some piece
// of g exceeds every chosen generator.
inline bool dominates_on(const PwaFunction& g, const std::vector<AffineFunction>& gens,
                         const std::vector<int>& subset) {
    for (const auto& piece : g.pieces()) {
        Polyhedron bad = piece.cell;
        for (int i : subset) bad.add(gens[static_cast<size_t>(i)] - piece.fn, Rel::LT);
        if (!part_empty(bad)) return false;
    }
    return true;
}

// Searches a pair (x, y) in D x D with, for every generator i, f_i(x) > g(x)
// or g(y) > f_i(y): the negation of the two-point criterion, expanded one
// generator at a time with eager pruning.
inline std::optional<std::pair<Point, Point>> violation_pair(
    const PwaFunction& g, const std::vector<AffineFunction>& gens) {
    const int n = g.dim();
    for (const auto& pa : g.pieces()) {
        for (const auto& pb : g.pieces()) {
            std::vector<Polyhedron> branches;
            {
                Polyhedron base = lift_doubled(pa.cell, DoubleSlot::U)
                                      .intersect(lift_doubled(pb.cell, DoubleSlot::V));
                if (!part_empty(base)) branches.push_back(std::move(base));
            }
            for (const auto& f : gens) {
                std::vector<Polyhedron> next;
                for (const auto& br : branches) {
                    // f(x) > g(x):
                    Polyhedron left = br;
                    left.add(lift_doubled(pa.fn - f, DoubleSlot::U), Rel::LT);
                    if (!part_empty(left)) next.push_back(std::move(left));
                    // g(y) > f(y):
                    Polyhedron right = br;
                    right.add(lift_doubled(f - pb.fn, DoubleSlot::V), Rel::LT);
                    if (!part_empty(right)) next.push_back(std::move(right));
                }
                branches = std::move(next);
                if (branches.empty()) break;
            }
            if (!branches.empty()) {
                Point both = *sample_point(branches.front());
                Point x(both.begin(), both.begin() + n);
                Point y(both.begin() + n, both.end());
                return std::make_pair(std::move(x), std::move(y));
            }
        }
    }
    return std::nullopt;
}

inline void enumerate_subsets_by_size(int m, const std::function<bool(const std::vector<int>&)>& f) {
    for (int k = 1; k <= m; ++k) {
        bool keep_going = true;
        for_each_subset(m, k, [&](const std::vector<int>& idx) {
            keep_going = f(idx);
            return keep_going;
        });
        if (!keep_going) return;
    }
}

}  // namespace detail

// Subset synthesis: find all minimal X with g <= max_{i in X} f_i on D, take
// the candidate min_{X} max_{i in X} f_i, and verify exact equality.  When
// equality fails, no min-max term over these generators can work, and a
// two-point witness is produced.
inline SynthesisResult synth_min_max(const PwaFunction& g,
                                     const std::vector<AffineFunction>& gens,
                                     const PolyhedralSet& d) {
    if (gens.empty()) throw invalid_input_error("synth_min_max: no generators");
    for (const auto& f : gens)
        if (f.dim() != g.dim() || f.height() != g.height())
            throw invalid_input_error("synth_min_max: generator shape mismatch");
    g.require_consistent();
    const PwaFunction gd = g.restrict(d).pruned();

    {
        auto w = is_w_combination(gd, gens);
        if (!w.ok)
            throw precondition_error(
                "synth_min_max: input is not a w-combination of the generators (gap at " +
                canonical_key(w.gap_witness) + ")");
    }

    const int m = static_cast<int>(gens.size());
    std::vector<std::vector<int>> minimal;
    detail::enumerate_subsets_by_size(m, [&](const std::vector<int>& x) {
        for (const auto& found : minimal)
            if (std::includes(x.begin(), x.end(), found.begin(), found.end()))
                return true;  // superset of a minimal element: skip
        if (detail::dominates_on(gd, gens, x)) minimal.push_back(x);
        return true;
    });

    SynthesisResult res;
    if (!minimal.empty()) {
        std::sort(minimal.begin(), minimal.end(), [](const auto& a, const auto& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        });
        MinMaxNormalForm nf;
        std::optional<LatticeTerm> term;
        for (const auto& x : minimal) {
            std::vector<AffineFunction> clause;
            std::optional<LatticeTerm> cmax;
            for (int i : x) {
                clause.push_back(gens[static_cast<size_t>(i)]);
                LatticeTerm gen = LatticeTerm::generator(i);
                cmax = cmax ? LatticeTerm::max(std::move(*cmax), std::move(gen))
                            : std::move(gen);
            }
            nf.clauses.push_back(std::move(clause));
            term = term ? LatticeTerm::min(std::move(*term), std::move(*cmax))
                        : std::move(*cmax);
        }
        TermEquality eq = term_equals_on(nf, gd, gd.domain());
        if (eq.equal) {
            res.outcome = SynthesisResult::Outcome::accepted;
            res.term = std::move(*term);
            res.nf = std::move(nf);
            res.chosen_subsets = std::move(minimal);
            res.transcript = "equality verified on " +
                             std::to_string(gd.pieces().size()) + " piece(s), " +
                             std::to_string(res.nf.clauses.size()) + " clause(s)";
            return res;
        }
    }

    auto pair = detail::violation_pair(gd, gens);
    if (!pair)
        throw internal_error(
            "synth_min_max: candidate failed but no two-point violation exists");
    // Re-check the witness exactly before handing it out.
    const GroupElement gx = gd.eval(pair->first), gy = gd.eval(pair->second);
    for (const auto& f : gens) {
        const bool bad_x = f.eval(pair->first) > gx;
        const bool bad_y = gy > f.eval(pair->second);
        if (!bad_x && !bad_y)
            throw internal_error("synth_min_max: violation witness failed re-check");
    }
    res.outcome = SynthesisResult::Outcome::rejected;
    res.x = std::move(pair->first);
    res.y = std::move(pair->second);
    return res;
}

}  // namespace tropilat
