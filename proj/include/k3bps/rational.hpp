#ifndef K3BPS_RATIONAL_HPP
#define K3BPS_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace k3bps {

// The universal exact scalar. mpq_class keeps denominator > 0 and the
// fraction reduced after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Serialized form is "p" or "p/q".
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("not a rational: '" + s + "'");
    r.canonicalize();
    return r;
}

// Exact integer power, negative exponents allowed for nonzero base.
inline Rational pow_rational(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    Rational b = base;
    if (e < 0) {
        b = Rational(1) / b;
        e = -e;
    }
    Rational acc(1);
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

} // namespace k3bps

#endif
