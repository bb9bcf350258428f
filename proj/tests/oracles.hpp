#pragma once
// Independent reference computations used only by the tests.

#include "knead/series.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace knead::oracle {

// Coefficient n >= 1 of -log(1 - 2t), i.e. 2^n / n.
inline Rational neg_log_one_minus_2t_coeff(std::size_t n) {
  Rational p = 1;
  for (std::size_t k = 0; k < n; ++k) p *= 2;
  return p / Rational(static_cast<long>(n));
}

// Determinant as the signed sum over all permutations.
template <class T>
TruncatedSeries<T> det_leibniz(const SeriesMatrix<T>& m) {
  const std::size_t d = m.dim();
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  TruncatedSeries<T> acc(m.degree());
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) inversions += perm[i] > perm[j];
    }
    TruncatedSeries<T> term = TruncatedSeries<T>::constant(T(1), m.degree());
    for (std::size_t i = 0; i < d; ++i) term = term * m(i, perm[i]);
    if (inversions % 2) {
      acc -= term;
    } else {
      acc += term;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

}  // namespace knead::oracle

namespace knead::oracle {

// Coefficients of (1 - 2t) / (1 - t): 1, -1, -1, ...
inline Rational tent_det_coeff(std::size_t n) { return n == 0 ? Rational(1) : Rational(-1); }

// Germ orbits of the tent map at its cutting point, worked out by hand:
// 1/2- -> 1- -> 0+ (fixed) with [sg] = 1, 1, -1, -1, ...
// 1/2+ -> 1- -> 0+ (fixed) with [sg] = 1, -1, 1, 1, ...
inline int tent_sg_minus(std::size_t m) { return m < 2 ? 1 : -1; }
inline int tent_sg_plus(std::size_t m) { return m == 1 ? -1 : 1; }

}  // namespace knead::oracle

namespace knead::oracle {

// Fixed-point weight read off the chord h through (u, hu) and (v, hv):
// -1 when 0 < slope <= 1 and the closed chord meets the diagonal,
// +1 when the chord crosses the diagonal strictly inside with slope > 1 or < 0,
// 0 otherwise.
template <class T>
int chord_pi(const T& u, const T& hu, const T& v, const T& hv) {
  const T slope = (hv - hu) / (v - u);
  const T du = hu - u;
  const T dv = hv - v;
  const bool touches = du * dv <= T(0);
  const bool crosses = du * dv < T(0);
  if (slope > T(0) && slope <= T(1) && touches) return -1;
  if (crosses && (slope > T(1) || slope < T(0))) return 1;
  return 0;
}

// Itineraries of length n seen on a fine grid of interior points, as strings.
template <class T, class Sys>
std::vector<std::string> sampled_words(const Sys& sys, std::size_t n, long grid) {
  std::vector<std::string> words;
  const T width = sys.b() - sys.a();
  for (long k = 0; k < grid; ++k) {
    T x = sys.a() + width * (T(2 * k + 1) / T(2 * grid));
    std::string w;
    bool ok = true;
    for (std::size_t m = 0; m < n && ok; ++m) {
      std::size_t i = 0;
      while (i + 1 < sys.branch_count() && !(x < sys.cut(i + 1))) ++i;
      if (x == sys.cut(i) || x == sys.cut(i + 1)) ok = false;
      w += static_cast<char>('0' + i);
      const auto& br = sys.branch(i);
      x = br.slope * x + br.intercept;
    }
    if (ok) words.push_back(w);
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

}  // namespace knead::oracle
