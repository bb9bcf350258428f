#include "knead/scalar.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

namespace knead {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return false;
  }
  return true;
}

Rational parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error("not a number: '" + std::string(whole) + "'");
  Rational r{boost::multiprecision::mpz_int(std::string(s))};
  return negative ? Rational(-r) : r;
}

Rational pow10(long e) {
  Rational r = 1;
  for (long i = 0; i < (e < 0 ? -e : e); ++i) r *= 10;
  return e < 0 ? Rational(1 / r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw Error("empty number");

  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const Rational num = parse_integer(trim(std::string_view(s).substr(0, slash)), s);
    const Rational den = parse_integer(trim(std::string_view(s).substr(slash + 1)), s);
    if (den == 0) throw Error("zero denominator in '" + s + "'");
    return num / den;
  }

  std::string_view body = s;
  long exponent = 0;
  if (const auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    if (!exp_text.empty() && exp_text[0] == '+') exp_text.remove_prefix(1);
    const auto [ptr, ec] =
        std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size()) {
      throw Error("bad exponent in '" + s + "'");
    }
    body = body.substr(0, e);
  }

  std::string digits(body);
  if (const auto dot = digits.find('.'); dot != std::string::npos) {
    exponent -= static_cast<long>(digits.size() - dot - 1);
    digits.erase(dot, 1);
  }
  if (digits == "-" || digits == "+" || digits.empty()) throw Error("not a number: '" + s + "'");
  return parse_integer(digits, s) * pow10(exponent);
}

double ScalarTraits<double>::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s.find('/') != std::string::npos) {
    return knead::to_double(parse_rational(s));
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw Error("not a number: '" + s + "'");
  return v;
}

std::string ScalarTraits<double>::str(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace knead
