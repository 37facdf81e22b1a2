#pragma once

// Elements of the value group and points of its cartesian powers.
//
// The value group of height h is Q^h ordered lexicographically with the
// FIRST component dominating: (1,0) > (0,99).  Height 1 is the ordinary
// rationals.  The group is divisible, so exact division by integers and
// scaling by rationals stay inside it — this is load-bearing for midpoint
// sampling and Fourier–Motzkin normalization.

#include "tropilat/rational.hpp"

#include <compare>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tropilat {

class GroupElement {
public:
    GroupElement() : comps_(1) {}
    explicit GroupElement(int height) : comps_(check_height(height)) {}
    explicit GroupElement(std::vector<Rational> comps) : comps_(std::move(comps)) {
        check_height(static_cast<int>(comps_.size()));
    }
    GroupElement(std::initializer_list<Rational> comps)
        : GroupElement(std::vector<Rational>(comps)) {}

    // The rational q at height 1, or q in the leading (dominant) coordinate
    // of a taller group, the rest zero.
    static GroupElement scalar(Rational q, int height = 1) {
        GroupElement g(height);
        g.comps_[0] = std::move(q);
        return g;
    }

    static GroupElement zero(int height) { return GroupElement(height); }

    int height() const { return static_cast<int>(comps_.size()); }
    const Rational& operator[](int i) const { return comps_[static_cast<size_t>(i)]; }
    Rational& operator[](int i) { return comps_[static_cast<size_t>(i)]; }
    const std::vector<Rational>& components() const { return comps_; }

    bool is_zero() const {
        for (const auto& c : comps_)
            if (c != 0) return false;
        return true;
    }

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        a.check_same_height(b);
        return a.comps_ == b.comps_;
    }

    friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
        a.check_same_height(b);
        for (int i = 0; i < a.height(); ++i) {
            if (a.comps_[static_cast<size_t>(i)] < b.comps_[static_cast<size_t>(i)])
                return std::strong_ordering::less;
            if (a.comps_[static_cast<size_t>(i)] > b.comps_[static_cast<size_t>(i)])
                return std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }

    GroupElement& operator+=(const GroupElement& o) {
        check_same_height(o);
        for (size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
        return *this;
    }
    GroupElement& operator-=(const GroupElement& o) {
        check_same_height(o);
        for (size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
        return *this;
    }
    friend GroupElement operator+(GroupElement a, const GroupElement& b) { return a += b; }
    friend GroupElement operator-(GroupElement a, const GroupElement& b) { return a -= b; }
    friend GroupElement operator-(const GroupElement& a) {
        GroupElement r(a.height());
        for (int i = 0; i < a.height(); ++i) r[i] = -a[i];
        return r;
    }
    // Scaling by a rational (Q-vector-space structure; divisibility).
    friend GroupElement operator*(const Rational& q, const GroupElement& a) {
        GroupElement r(a.height());
        for (int i = 0; i < a.height(); ++i) r[i] = q * a[i];
        return r;
    }

    GroupElement abs() const { return *this < GroupElement(height()) ? -*this : *this; }

    // Quotient by the k-th convex subgroup: drops the last k (most
    // infinitesimal) lexicographic coordinates.  k = 0 is the identity;
    // k must leave at least one coordinate.
    GroupElement convex_quotient(int k) const {
        if (k < 0 || k >= height())
            throw precondition_error("convex_quotient: need 0 <= k < height");
        return GroupElement(std::vector<Rational>(comps_.begin(), comps_.end() - k));
    }

    // True iff every coordinate before the last `k` vanishes, i.e. the
    // element lies in the k-th convex subgroup.
    bool in_convex_subgroup(int k) const {
        for (int i = 0; i + k < height(); ++i)
            if (comps_[static_cast<size_t>(i)] != 0) return false;
        return true;
    }

    // Height extension used by the truncation argument: a fresh dominant
    // coordinate is prepended (value 0 here), so existing elements become
    // infinitesimal relative to the new unit.
    GroupElement prepend_component(Rational leading) const {
        std::vector<Rational> c;
        c.reserve(comps_.size() + 1);
        c.push_back(std::move(leading));
        c.insert(c.end(), comps_.begin(), comps_.end());
        return GroupElement(std::move(c));
    }

    // Inverse bookkeeping for prepend_component: the leading coordinate and
    // the remainder (one height lower).
    std::pair<Rational, GroupElement> split_leading() const {
        if (height() < 2)
            throw precondition_error("split_leading: height must be at least 2");
        return {comps_[0],
                GroupElement(std::vector<Rational>(comps_.begin() + 1, comps_.end()))};
    }

    // Deterministic total order on encodings; used wherever the spec wants
    // "lexicographic by encoding" tie-breaks.
    std::string canonical_key() const {
        std::string key;
        for (const auto& c : comps_) {
            key += encode_rational(c);
            key += ',';
        }
        return key;
    }

private:
    static int check_height(int h) {
        if (h < 1) throw invalid_input_error("GroupElement: height must be >= 1");
        return h;
    }
    void check_same_height(const GroupElement& o) const {
        if (height() != o.height())
            throw invalid_input_error("GroupElement: height mismatch (" +
                                      std::to_string(height()) + " vs " +
                                      std::to_string(o.height()) + ")");
    }

    std::vector<Rational> comps_;
};

// A point of Gamma^n.
using Point = std::vector<GroupElement>;

inline std::strong_ordering compare(const GroupElement& a, const GroupElement& b) {
    return a <=> b;
}

inline const GroupElement& max_elem(const GroupElement& a, const GroupElement& b) {
    return a < b ? b : a;
}
inline const GroupElement& min_elem(const GroupElement& a, const GroupElement& b) {
    return b < a ? b : a;
}

// sup-norm |x| = max_i |x_i|; the Lipschitz condition is stated against it.
inline GroupElement norm_inf(std::span<const GroupElement> x) {
    if (x.empty()) throw precondition_error("norm_inf: empty point");
    GroupElement best = x[0].abs();
    for (size_t i = 1; i < x.size(); ++i) best = max_elem(best, x[i].abs());
    return best;
}

inline GroupElement norm_inf(const Point& x) {
    return norm_inf(std::span<const GroupElement>(x.data(), x.size()));
}

inline std::string canonical_key(const Point& x) {
    std::string key;
    for (const auto& g : x) {
        key += g.canonical_key();
        key += ';';
    }
    return key;
}

}  // namespace tropilat
