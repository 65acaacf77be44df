#include "tangenta/rational.hpp"

#include <algorithm>

namespace tangenta {

namespace {

// Strips every factor p from n, returning the multiplicity.
int strip_factor(Integer& n, unsigned p) {
  int count = 0;
  while (n % p == 0) {
    n /= p;
    ++count;
  }
  return count;
}

}  // namespace

bool has_terminating_decimal(const Rational& r) {
  Integer den = denominator(r);
  strip_factor(den, 2);
  strip_factor(den, 5);
  return den == 1;
}

std::string decimal_string(const Rational& r) {
  Integer num = numerator(r);
  Integer den = denominator(r);
  bool negative = num < 0;
  if (negative) num = -num;

  Integer d = den;
  int twos = strip_factor(d, 2);
  int fives = strip_factor(d, 5);
  int k = std::max(twos, fives);
  // num/den * 10^k is an integer once den = 2^twos 5^fives.
  Integer scaled = num * pow(Integer(2), unsigned(k - twos)) * pow(Integer(5), unsigned(k - fives));

  std::string digits = scaled.str();
  std::string out;
  if (negative) out += '-';
  if (k == 0) {
    out += digits;
  } else {
    while (static_cast<int>(digits.size()) <= k) digits.insert(digits.begin(), '0');
    out += digits.substr(0, digits.size() - k);
    std::string frac = digits.substr(digits.size() - k);
    while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
    if (!(frac.size() == 1 && frac[0] == '0')) {
      out += '.';
      out += frac;
    }
  }
  return out;
}

}  // namespace tangenta
