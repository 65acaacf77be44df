#ifndef TANGENTA_RATIONAL_HPP
#define TANGENTA_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace tangenta {

// Exact rational scalar used for constants, power exponents and the
// a-e linearization. Arbitrary precision so degree-4 relations at
// rational points never overflow.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline std::string to_string(const Rational& r) {
  return r.str();
}

// True when the rational has a terminating decimal expansion (denominator
// of the form 2^a 5^b), so it can be printed as an exact decimal literal.
bool has_terminating_decimal(const Rational& r);

// Exact decimal text for a terminating rational, e.g. 13/4 -> "3.25".
std::string decimal_string(const Rational& r);

}  // namespace tangenta

#endif
