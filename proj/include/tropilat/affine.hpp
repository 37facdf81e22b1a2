#pragma once

// Q-affine functions  f(x) = sum_i m_i * x_i + c  with rational slopes m_i
// and a group-element constant c.  These are the atoms everything else is
// made of: constraints, piecewise-affine pieces, normal-form clauses.
// Z-affine means every slope is an integer (the constant may be anything).

#include "tropilat/group.hpp"

#include <span>
#include <string>
#include <vector>

namespace tropilat {

class AffineFunction {
public:
    AffineFunction() : coeffs_(), constant_(1) {}
    AffineFunction(std::vector<Rational> coeffs, GroupElement constant)
        : coeffs_(std::move(coeffs)), constant_(std::move(constant)) {}

    static AffineFunction constant_fn(int dim, GroupElement c) {
        return AffineFunction(std::vector<Rational>(static_cast<size_t>(dim)), std::move(c));
    }
    static AffineFunction zero(int dim, int height) {
        return constant_fn(dim, GroupElement(height));
    }
    static AffineFunction coordinate(int dim, int i, int height) {
        if (i < 0 || i >= dim) throw invalid_input_error("coordinate: index out of range");
        std::vector<Rational> m(static_cast<size_t>(dim));
        m[static_cast<size_t>(i)] = 1;
        return AffineFunction(std::move(m), GroupElement(height));
    }

    int dim() const { return static_cast<int>(coeffs_.size()); }
    int height() const { return constant_.height(); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    const Rational& coeff(int i) const { return coeffs_[static_cast<size_t>(i)]; }
    const GroupElement& constant() const { return constant_; }

    bool is_constant() const {
        for (const auto& m : coeffs_)
            if (m != 0) return false;
        return true;
    }

    bool is_z_affine() const {
        for (const auto& m : coeffs_)
            if (den(m) != 1) return false;
        return true;
    }

    GroupElement eval(std::span<const GroupElement> x) const {
        if (static_cast<int>(x.size()) != dim())
            throw invalid_input_error("eval_affine: dimension mismatch");
        GroupElement v = constant_;
        for (int i = 0; i < dim(); ++i) {
            if (coeffs_[static_cast<size_t>(i)] == 0) continue;
            if (x[static_cast<size_t>(i)].height() != height())
                throw invalid_input_error("eval_affine: height mismatch");
            v += coeffs_[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
        }
        return v;
    }
    GroupElement eval(const Point& x) const {
        return eval(std::span<const GroupElement>(x.data(), x.size()));
    }

    AffineFunction& operator+=(const AffineFunction& o) {
        check_shape(o);
        for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        constant_ += o.constant_;
        return *this;
    }
    AffineFunction& operator-=(const AffineFunction& o) {
        check_shape(o);
        for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        constant_ -= o.constant_;
        return *this;
    }
    friend AffineFunction operator+(AffineFunction a, const AffineFunction& b) { return a += b; }
    friend AffineFunction operator-(AffineFunction a, const AffineFunction& b) { return a -= b; }
    friend AffineFunction operator-(const AffineFunction& a) {
        AffineFunction r = a;
        for (auto& m : r.coeffs_) m = -m;
        r.constant_ = -r.constant_;
        return r;
    }
    friend AffineFunction operator*(const Rational& q, const AffineFunction& a) {
        AffineFunction r = a;
        for (auto& m : r.coeffs_) m = q * m;
        r.constant_ = q * r.constant_;
        return r;
    }
    friend AffineFunction operator+(AffineFunction a, const GroupElement& c) {
        a.constant_ += c;
        return a;
    }
    friend AffineFunction operator-(AffineFunction a, const GroupElement& c) {
        a.constant_ -= c;
        return a;
    }

    friend bool operator==(const AffineFunction& a, const AffineFunction& b) {
        return a.coeffs_ == b.coeffs_ && a.constant_ == b.constant_;
    }

    // Solves f(x) = 0 for variable i (slope must be nonzero): returns the
    // affine g with g's i-slope zero such that f(x) = 0  iff  x_i = g(x).
    AffineFunction solve_for(int i) const {
        const Rational& a = coeff(i);
        if (a == 0) throw precondition_error("solve_for: zero coefficient");
        AffineFunction g = (Rational(-1) / a) * *this;
        g.coeffs_[static_cast<size_t>(i)] = 0;
        return g;
    }

    // Substitutes x_i := r(x); r must not itself involve x_i.
    AffineFunction substitute_var(int i, const AffineFunction& r) const {
        check_shape(r);
        if (r.coeff(i) != 0)
            throw precondition_error("substitute_var: replacement depends on the variable");
        AffineFunction out = *this;
        const Rational a = out.coeffs_[static_cast<size_t>(i)];
        out.coeffs_[static_cast<size_t>(i)] = 0;
        if (a != 0) out += a * r;
        return out;
    }

    // Removes variable i (its slope must already be zero): the function seen
    // in the space with that coordinate projected away.
    AffineFunction drop_var(int i) const {
        if (coeff(i) != 0) throw precondition_error("drop_var: nonzero coefficient");
        std::vector<Rational> m;
        m.reserve(coeffs_.size() - 1);
        for (int j = 0; j < dim(); ++j)
            if (j != i) m.push_back(coeffs_[static_cast<size_t>(j)]);
        return AffineFunction(std::move(m), constant_);
    }

    // Re-inserts a variable slot with slope 0 at position i (inverse of
    // drop_var on the shape level).
    AffineFunction insert_var(int i) const {
        if (i < 0 || i > dim()) throw invalid_input_error("insert_var: bad position");
        std::vector<Rational> m;
        m.reserve(coeffs_.size() + 1);
        for (int j = 0; j < dim(); ++j) {
            if (j == i) m.emplace_back(0);
            m.push_back(coeffs_[static_cast<size_t>(j)]);
        }
        if (i == dim()) m.emplace_back(0);
        return AffineFunction(std::move(m), constant_);
    }

    // Precomposition with the affine substitution x_j := subs[j](y); all
    // subs must share one target dimension.  Used for images of sets under
    // affine maps and for piecewise GL_N(Z) transforms.
    AffineFunction compose(const std::vector<AffineFunction>& subs) const {
        if (static_cast<int>(subs.size()) != dim())
            throw invalid_input_error("compose: substitution arity mismatch");
        const int target_dim = subs.empty() ? 0 : subs[0].dim();
        AffineFunction out = constant_fn(target_dim, constant_);
        for (int j = 0; j < dim(); ++j) {
            if (coeff(j) == 0) continue;
            out += coeff(j) * subs[static_cast<size_t>(j)];
        }
        return out;
    }

    // Constant-wise quotient by the k-th convex subgroup; slopes unchanged.
    // Only meaningful on sets/functions that descend (the callers check).
    AffineFunction convex_quotient(int k) const {
        return AffineFunction(coeffs_, constant_.convex_quotient(k));
    }

    AffineFunction prepend_constant_component(Rational leading) const {
        return AffineFunction(coeffs_, constant_.prepend_component(std::move(leading)));
    }

    // Max_i |m_i| and sum_i |m_i|; the l1 value bounds the sup-norm Lipschitz
    // constant of the function on any convex set.
    Rational max_abs_slope() const {
        Rational best = 0;
        for (const auto& m : coeffs_) best = std::max(best, rat_abs(m));
        return best;
    }
    Rational l1_slope_norm() const {
        Rational s = 0;
        for (const auto& m : coeffs_) s += rat_abs(m);
        return s;
    }

    std::string canonical_key() const {
        std::string key;
        for (const auto& m : coeffs_) {
            key += encode_rational(m);
            key += ',';
        }
        key += '|';
        key += constant_.canonical_key();
        return key;
    }

private:
    void check_shape(const AffineFunction& o) const {
        if (dim() != o.dim() || height() != o.height())
            throw invalid_input_error("AffineFunction: shape mismatch");
    }

    std::vector<Rational> coeffs_;
    GroupElement constant_;
};

}  // namespace tropilat
