#pragma once

// Exact rational scalars and their canonical "p/q" text form.
//
// Every quantity in this library is exact: coefficients are rationals,
// constants are tuples of rationals.  boost::multiprecision keeps
// cpp_rational canonical (gcd(p,q) = 1, q > 0) through all arithmetic,
// which is exactly the invariant the text encoding relies on.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tropilat {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Error hierarchy.  Everything thrown by this library derives from error;
// the subclasses mirror the failure categories the API docs promise:
// malformed input, violated precondition, exhausted search cap, and
// internal re-verification failure (the last one is always a bug).
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class invalid_input_error : public error {
public:
    using error::error;
};

class precondition_error : public error {
public:
    using error::error;
};

class cap_exhausted_error : public error {
public:
    explicit cap_exhausted_error(const std::string& what, const Int& cap)
        : error(what), cap_reached(cap) {}
    Int cap_reached;
};

class internal_error : public error {
public:
    using error::error;
};

inline Int num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline int sign(const Rational& r) { return r.sign(); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Canonical text form "p/q" with q > 0 and gcd(p, q) = 1; integers keep the
// "/1" suffix off?  No: the wire format is always "p/q" — "3/1", "-2/5", "0/1".
inline std::string encode_rational(const Rational& r) {
    return num(r).str() + "/" + den(r).str();
}

// Accepts "p/q" and bare integers "p" (normalized on parse); rejects q <= 0
// only when the fraction cannot be brought to canonical form (q = 0).
inline Rational decode_rational(std::string_view text) {
    const auto bad = [&] {
        return invalid_input_error("malformed rational '" + std::string(text) + "'");
    };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rational(Int(std::string(text)));
        }
        Int p{std::string(text.substr(0, slash))};
        Int q{std::string(text.substr(slash + 1))};
        if (q == 0) throw bad();
        return Rational(p, q);
    } catch (const std::runtime_error&) {
        throw bad();
    }
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int rat_floor(const Rational& r) { return floor_div(num(r), den(r)); }

inline Int rat_ceil(const Rational& r) { return -floor_div(-num(r), den(r)); }

}  // namespace tropilat
