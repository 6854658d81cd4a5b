#pragma once

#include <gmpxx.h>

#include <string>

namespace vrpsd {

using Rational = mpq_class;

// Accepts "a", "a/b" and leading sign. Throws std::invalid_argument.
Rational parse_rational(const std::string &text);

std::string to_string(const Rational &q);

// gmpxx has no long long constructor.
inline Rational to_rational(long long v) { return Rational(static_cast<long>(v)); }

// num/den in lowest terms.
inline Rational ratio(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline double to_double(const Rational &q) { return q.get_d(); }

// Smallest integer >= q.
long long ceil_of(const Rational &q);

// Exact conversion of a finite double.
inline Rational from_double(double v) { return Rational(v); }

inline Rational positive_part(const Rational &q) { return q > 0 ? q : Rational(0); }

} // namespace vrpsd
