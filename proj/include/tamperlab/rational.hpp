#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tamperlab {

using Rational = mpq_class;

// Finite distribution with exact weights. Entries are kept in insertion order.
template <class T>
using Dist = std::vector<std::pair<T, Rational>>;

Rational make_rational(long num, long den = 1);

// Parses "3", "-3/4" or a terminating decimal such as "0.25".
Rational parse_rational(std::string_view text);

// "1/2", "-3", "0".
std::string to_fraction(const Rational& q);

// Exact positional decimal when the reduced denominator has no prime factors
// other than 2 and 5; otherwise rounded to 12 significant digits.
std::string to_decimal(const Rational& q);

template <class T>
Rational total_mass(const Dist<T>& d) {
  Rational s = 0;
  for (const auto& [_, p] : d) s += p;
  return s;
}

}  // namespace tamperlab
