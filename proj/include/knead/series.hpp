#pragma once

#include "knead/scalar.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace knead {

class SeriesError : public Error {
 public:
  using Error::Error;
};

/// A power series in t kept to degree N (coefficients 0..N). Binary
/// operations truncate to the smaller of the two degrees.
template <class T>
class TruncatedSeries {
 public:
  TruncatedSeries() : c_(1, T(0)) {}
  explicit TruncatedSeries(std::size_t degree) : c_(degree + 1, T(0)) {}
  explicit TruncatedSeries(std::vector<T> coeffs);
  TruncatedSeries(std::initializer_list<T> coeffs, std::size_t degree);

  static TruncatedSeries constant(const T& c, std::size_t degree);
  /// t^k truncated at `degree`.
  static TruncatedSeries monomial(std::size_t k, std::size_t degree);

  std::size_t degree() const { return c_.size() - 1; }
  const T& operator[](std::size_t n) const { return c_[n]; }
  T& operator[](std::size_t n) { return c_[n]; }
  std::span<const T> coeffs() const { return c_; }

  TruncatedSeries truncated(std::size_t degree) const;
  /// Multiplies by t^k, dropping what falls past the truncation.
  TruncatedSeries shifted(std::size_t k) const;

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(const T& s);

  friend TruncatedSeries operator+(TruncatedSeries l, const TruncatedSeries& r) { return l += r; }
  friend TruncatedSeries operator-(TruncatedSeries l, const TruncatedSeries& r) { return l -= r; }
  friend TruncatedSeries operator*(TruncatedSeries l, const T& s) { return l *= s; }
  friend TruncatedSeries operator*(const T& s, TruncatedSeries r) { return r *= s; }
  friend TruncatedSeries operator-(TruncatedSeries s) { return s *= T(-1); }
  friend TruncatedSeries operator*(const TruncatedSeries& l, const TruncatedSeries& r) {
    return multiply(l, r);
  }
  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  static TruncatedSeries multiply(const TruncatedSeries& l, const TruncatedSeries& r);
  std::vector<T> c_;
};

template <class T>
TruncatedSeries<T> derivative(const TruncatedSeries<T>& s);
/// Horner evaluation of the truncated polynomial.
template <class T, class U>
U eval(const TruncatedSeries<T>& s, const U& t) {
  U acc(0);
  for (std::size_t n = s.degree() + 1; n-- > 0;) acc = acc * t + U(s[n]);
  return acc;
}
template <class T>
double eval_double(const TruncatedSeries<T>& s, double t) {
  double acc = 0;
  for (std::size_t n = s.degree() + 1; n-- > 0;) acc = acc * t + to_double(s[n]);
  return acc;
}
template <class T>
TruncatedSeries<T> inverse(const TruncatedSeries<T>& s);
template <class T>
TruncatedSeries<T> exp(const TruncatedSeries<T>& s);
template <class T>
TruncatedSeries<T> log(const TruncatedSeries<T>& s);
/// Largest |coefficient| over degrees lo..hi (clamped to the truncation).
template <class T>
double max_abs(const TruncatedSeries<T>& s, std::size_t lo = 0, std::size_t hi = SIZE_MAX);

/// Square matrix of series sharing one truncation degree.
template <class T>
class SeriesMatrix {
 public:
  SeriesMatrix(std::size_t dim, std::size_t degree);
  static SeriesMatrix identity(std::size_t dim, std::size_t degree);

  std::size_t dim() const { return dim_; }
  std::size_t degree() const { return degree_; }
  TruncatedSeries<T>& operator()(std::size_t i, std::size_t j) { return e_[i * dim_ + j]; }
  const TruncatedSeries<T>& operator()(std::size_t i, std::size_t j) const {
    return e_[i * dim_ + j];
  }
  /// Principal submatrix on indices first..dim-1.
  SeriesMatrix trailing(std::size_t first) const;
  /// Scalar matrix of the coefficients of t^n.
  std::vector<T> coefficient(std::size_t n) const;

  friend SeriesMatrix operator*(const SeriesMatrix& l, const SeriesMatrix& r) {
    return multiply(l, r);
  }
  friend SeriesMatrix operator-(SeriesMatrix l, const SeriesMatrix& r) {
    for (std::size_t k = 0; k < l.e_.size(); ++k) l.e_[k] -= r.e_[k];
    return l;
  }

 private:
  static SeriesMatrix multiply(const SeriesMatrix& l, const SeriesMatrix& r);
  std::size_t dim_;
  std::size_t degree_;
  std::vector<TruncatedSeries<T>> e_;
};

template <class T>
SeriesMatrix<T> derivative(const SeriesMatrix<T>& m);

/// Determinant over the truncated series ring: cofactor expansion for
/// dim <= 4, Bareiss fraction-free elimination above.
template <class T>
TruncatedSeries<T> det(const SeriesMatrix<T>& m);
template <class T>
TruncatedSeries<T> det_cofactor(const SeriesMatrix<T>& m);
template <class T>
TruncatedSeries<T> det_bareiss(const SeriesMatrix<T>& m);

/// Solves M x = rhs; requires M(0) invertible.
template <class T>
std::vector<TruncatedSeries<T>> solve(const SeriesMatrix<T>& m,
                                      std::vector<TruncatedSeries<T>> rhs);

}  // namespace knead
