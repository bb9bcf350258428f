#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace knead {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

enum class Arithmetic { float64, exact };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses "p/q", integers and decimal literals ("-1.25", "3e-2").
Rational parse_rational(std::string_view text);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr Arithmetic mode = Arithmetic::float64;
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static double parse(std::string_view text);
  static std::string str(double x);
  static double abs(double x) { return std::fabs(x); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr Arithmetic mode = Arithmetic::exact;
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  // Every finite double is a dyadic rational; the conversion is exact.
  static Rational from_double(double x) { return Rational(x); }
  static Rational parse(std::string_view text) { return parse_rational(text); }
  static std::string str(const Rational& x) { return x.str(); }
  static Rational abs(const Rational& x) { return boost::multiprecision::abs(x); }
};

template <class T>
double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

template <class T>
T half() {
  return T(1) / T(2);
}

template <class T>
int sgn(const T& x) {
  return (x > T(0)) - (x < T(0));
}

}  // namespace knead
