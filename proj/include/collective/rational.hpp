#ifndef COLLECTIVE_RATIONAL_HPP
#define COLLECTIVE_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace collective {

/// Exact rational number. All frame algebra and body kinematics use this.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Comma-separated list of rationals, e.g. "1/2,0,-3".
RationalVector parse_rational_list(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

/// "(a, b, c)"
std::string format_vector(const RationalVector& values);

/// "a;b;c" (used in CSV cells)
std::string join_rationals(const RationalVector& values, char separator = ';');

RationalVector operator+(const RationalVector& a, const RationalVector& b);
RationalVector operator-(const RationalVector& a, const RationalVector& b);
RationalVector operator*(const Rational& s, const RationalVector& a);

RationalVector zero_vector(std::size_t size);
bool is_zero(const RationalVector& a);

}  // namespace collective

#endif  // COLLECTIVE_RATIONAL_HPP
