#ifndef PRESYM_RATIONAL_HPP
#define PRESYM_RATIONAL_HPP

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace presym {

/*
 * Exact rational scalar.
 *
 * mpq_class keeps values canonicalized (lowest terms, positive denominator)
 * and gives exact comparisons, which is what every rank/membership decision
 * in this project relies on.
 */
using Rational = mpq_class;

// Parse "p/q" or "p" (optional sign, arbitrary precision).
inline Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("empty rational literal");
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("bad rational literal: '" + text + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
}

// Format as "p" when the denominator is 1, else "p/q".
inline std::string format_rational(const Rational& q) {
    return q.get_str();
}

inline double to_double(const Rational& q) { return q.get_d(); }

} // namespace presym

#endif // PRESYM_RATIONAL_HPP
