#ifndef SUBHEAT_RATIONAL_HPP
#define SUBHEAT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace subheat {

// Exact rational scalar for all symbolic computations (coefficients, ranks,
// homogeneity bookkeeping). Arbitrary precision: bracket iteration and
// Gaussian elimination must never overflow or round.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
  return r.str();
}

}  // namespace subheat

#endif
