#include "tamperlab/rational.hpp"

#include <stdexcept>

namespace tamperlab {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return std::invalid_argument("not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    std::size_t start = (digits[0] == '-' || digits[0] == '+') ? 1 : 0;
    if (frac == 0 || digits.size() == start) throw bad();
    for (std::size_t i = start; i < digits.size(); ++i)
      if (digits[i] < '0' || digits[i] > '9') throw bad();
    if (digits[0] == '+') digits.erase(0, 1);
    mpz_class num(digits, 10), den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw bad();
  if (q.get_den() == 0) throw bad();
  q.canonicalize();
  return q;
}

std::string to_fraction(const Rational& q) { return q.get_str(10); }

std::string to_decimal(const Rational& q) {
  mpz_class den = q.get_den();
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) den /= 2, ++twos;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) den /= 5, ++fives;
  if (den == 1) {
    unsigned places = std::max(twos, fives);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    mpz_class scaled = q.get_num() * scale / q.get_den();
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string digits = scaled.get_str();
    if (places > 0) {
      if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
      digits.insert(digits.size() - places, ".");
    }
    return (neg ? "-" : "") + digits;
  }
  mpf_class f(q, 128);
  mp_exp_t exp;
  std::string digits = f.get_str(exp, 10, 12);
  bool neg = !digits.empty() && digits[0] == '-';
  if (neg) digits.erase(0, 1);
  // digits is d1 d2 ... with value 0.d1d2... * 10^exp
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + digits;
  } else if (static_cast<std::size_t>(exp) >= digits.size()) {
    out = digits + std::string(exp - digits.size(), '0');
  } else {
    out = digits.substr(0, exp) + "." + digits.substr(exp);
  }
  return (neg ? "-" : "") + out;
}

}  // namespace tamperlab
