#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace crnlyap {

// Exact arbitrary-precision rational. mpq_class keeps values canonical
// (lowest terms, positive denominator), which every certificate here relies on.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline int sign(const Rational& q) { return sgn(q); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

inline Rational rational_abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

// Serialized form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

using Vec = std::vector<Rational>;

}  // namespace crnlyap
