#include "knead/series.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace knead {

template <class T>
TruncatedSeries<T>::TruncatedSeries(std::vector<T> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(T(0));
}

template <class T>
TruncatedSeries<T>::TruncatedSeries(std::initializer_list<T> coeffs, std::size_t degree)
    : c_(degree + 1, T(0)) {
  std::size_t n = 0;
  for (const T& c : coeffs) {
    if (n > degree) break;
    c_[n++] = c;
  }
}

template <class T>
TruncatedSeries<T> TruncatedSeries<T>::constant(const T& c, std::size_t degree) {
  TruncatedSeries s(degree);
  s.c_[0] = c;
  return s;
}

template <class T>
TruncatedSeries<T> TruncatedSeries<T>::monomial(std::size_t k, std::size_t degree) {
  TruncatedSeries s(degree);
  if (k <= degree) s.c_[k] = T(1);
  return s;
}

template <class T>
TruncatedSeries<T> TruncatedSeries<T>::truncated(std::size_t degree) const {
  TruncatedSeries s(degree);
  for (std::size_t n = 0; n <= std::min(degree, this->degree()); ++n) s.c_[n] = c_[n];
  return s;
}

template <class T>
TruncatedSeries<T> TruncatedSeries<T>::shifted(std::size_t k) const {
  TruncatedSeries s(degree());
  for (std::size_t n = k; n <= degree(); ++n) s.c_[n] = c_[n - k];
  return s;
}

template <class T>
TruncatedSeries<T>& TruncatedSeries<T>::operator+=(const TruncatedSeries& o) {
  if (o.degree() < degree()) c_.resize(o.c_.size());
  for (std::size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
  return *this;
}

template <class T>
TruncatedSeries<T>& TruncatedSeries<T>::operator-=(const TruncatedSeries& o) {
  if (o.degree() < degree()) c_.resize(o.c_.size());
  for (std::size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
  return *this;
}

template <class T>
TruncatedSeries<T>& TruncatedSeries<T>::operator*=(const T& s) {
  for (auto& c : c_) c *= s;
  return *this;
}

template <class T>
TruncatedSeries<T> TruncatedSeries<T>::multiply(const TruncatedSeries& l,
                                                const TruncatedSeries& r) {
  const std::size_t N = std::min(l.degree(), r.degree());
  TruncatedSeries out(N);
  for (std::size_t i = 0; i <= N; ++i) {
    if (l.c_[i] == T(0)) continue;
    for (std::size_t j = 0; i + j <= N; ++j) out.c_[i + j] += l.c_[i] * r.c_[j];
  }
  return out;
}

template <class T>
TruncatedSeries<T> derivative(const TruncatedSeries<T>& s) {
  if (s.degree() == 0) return TruncatedSeries<T>(0);
  TruncatedSeries<T> d(s.degree() - 1);
  for (std::size_t n = 1; n <= s.degree(); ++n) d[n - 1] = T(static_cast<long>(n)) * s[n];
  return d;
}

template <class T>
TruncatedSeries<T> inverse(const TruncatedSeries<T>& s) {
  if (s[0] == T(0)) throw SeriesError("non-invertible series: zero constant term");
  const std::size_t N = s.degree();
  TruncatedSeries<T> b(N);
  const T inv0 = T(1) / s[0];
  b[0] = inv0;
  for (std::size_t n = 1; n <= N; ++n) {
    T acc(0);
    for (std::size_t i = 1; i <= n; ++i) acc += s[i] * b[n - i];
    b[n] = -acc * inv0;
  }
  return b;
}

template <class T>
TruncatedSeries<T> exp(const TruncatedSeries<T>& s) {
  const std::size_t N = s.degree();
  TruncatedSeries<T> e(N);
  if constexpr (ScalarTraits<T>::exact) {
    if (s[0] != T(0)) throw SeriesError("exp of a series with nonzero constant term is not rational");
    e[0] = T(1);
  } else {
    e[0] = std::exp(s[0]);
  }
  for (std::size_t n = 1; n <= N; ++n) {
    T acc(0);
    for (std::size_t k = 1; k <= n; ++k) acc += T(static_cast<long>(k)) * s[k] * e[n - k];
    e[n] = acc / T(static_cast<long>(n));
  }
  return e;
}

template <class T>
TruncatedSeries<T> log(const TruncatedSeries<T>& s) {
  if (s[0] == T(0)) throw SeriesError("non-invertible series: log of zero constant term");
  const std::size_t N = s.degree();
  TruncatedSeries<T> l(N);
  if constexpr (ScalarTraits<T>::exact) {
    if (s[0] != T(1)) throw SeriesError("log of a series with constant term != 1 is not rational");
  } else {
    if (s[0] < 0) throw SeriesError("log of a series with negative constant term");
    l[0] = std::log(s[0]);
  }
  for (std::size_t n = 1; n <= N; ++n) {
    T acc = T(static_cast<long>(n)) * s[n];
    for (std::size_t k = 1; k < n; ++k) acc -= T(static_cast<long>(k)) * l[k] * s[n - k];
    l[n] = acc / (T(static_cast<long>(n)) * s[0]);
  }
  return l;
}

template <class T>
double max_abs(const TruncatedSeries<T>& s, std::size_t lo, std::size_t hi) {
  double m = 0;
  for (std::size_t n = lo; n <= std::min(hi, s.degree()); ++n) {
    m = std::max(m, std::fabs(to_double(s[n])));
  }
  return m;
}

template <class T>
SeriesMatrix<T>::SeriesMatrix(std::size_t dim, std::size_t degree)
    : dim_(dim), degree_(degree), e_(dim * dim, TruncatedSeries<T>(degree)) {}

template <class T>
SeriesMatrix<T> SeriesMatrix<T>::identity(std::size_t dim, std::size_t degree) {
  SeriesMatrix m(dim, degree);
  for (std::size_t i = 0; i < dim; ++i) m(i, i)[0] = T(1);
  return m;
}

template <class T>
SeriesMatrix<T> SeriesMatrix<T>::trailing(std::size_t first) const {
  SeriesMatrix m(dim_ - first, degree_);
  for (std::size_t i = first; i < dim_; ++i) {
    for (std::size_t j = first; j < dim_; ++j) m(i - first, j - first) = (*this)(i, j);
  }
  return m;
}

template <class T>
std::vector<T> SeriesMatrix<T>::coefficient(std::size_t n) const {
  std::vector<T> out;
  out.reserve(e_.size());
  for (const auto& s : e_) out.push_back(n <= s.degree() ? s[n] : T(0));
  return out;
}

template <class T>
SeriesMatrix<T> SeriesMatrix<T>::multiply(const SeriesMatrix& l, const SeriesMatrix& r) {
  if (l.dim_ != r.dim_) throw SeriesError("matrix dimension mismatch");
  SeriesMatrix out(l.dim_, std::min(l.degree_, r.degree_));
  for (std::size_t i = 0; i < l.dim_; ++i) {
    for (std::size_t j = 0; j < l.dim_; ++j) {
      TruncatedSeries<T> acc(out.degree_);
      for (std::size_t k = 0; k < l.dim_; ++k) acc += l(i, k) * r(k, j);
      out(i, j) = std::move(acc);
    }
  }
  return out;
}

template <class T>
SeriesMatrix<T> derivative(const SeriesMatrix<T>& m) {
  SeriesMatrix<T> out(m.dim(), m.degree() == 0 ? 0 : m.degree() - 1);
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = derivative(m(i, j));
  }
  return out;
}

namespace {

template <class T>
TruncatedSeries<T> cofactor_rec(const std::vector<TruncatedSeries<T>>& a, std::size_t d,
                                std::size_t degree) {
  if (d == 0) return TruncatedSeries<T>::constant(T(1), degree);
  if (d == 1) return a[0];
  if (d == 2) return a[0] * a[3] - a[1] * a[2];
  TruncatedSeries<T> acc(degree);
  std::vector<TruncatedSeries<T>> minor((d - 1) * (d - 1));
  for (std::size_t col = 0; col < d; ++col) {
    if (a[col] == TruncatedSeries<T>(a[col].degree())) continue;
    for (std::size_t i = 1; i < d; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j == col) continue;
        minor[(i - 1) * (d - 1) + jj++] = a[i * d + j];
      }
    }
    TruncatedSeries<T> term = a[col] * cofactor_rec(minor, d - 1, degree);
    if (col % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

template <class T>
std::vector<TruncatedSeries<T>> entries(const SeriesMatrix<T>& m) {
  std::vector<TruncatedSeries<T>> a;
  a.reserve(m.dim() * m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) a.push_back(m(i, j));
  }
  return a;
}

// Row index >= k whose column-k entry has the "best" unit constant term, or
// npos when none is invertible.
template <class T>
std::size_t unit_pivot(const std::vector<TruncatedSeries<T>>& a, std::size_t d, std::size_t k) {
  std::size_t best = SIZE_MAX;
  double best_abs = 0;
  for (std::size_t i = k; i < d; ++i) {
    const T& c = a[i * d + k][0];
    if (c == T(0)) continue;
    if constexpr (ScalarTraits<T>::exact) return i;
    const double v = std::fabs(to_double(c));
    if (v > best_abs) {
      best_abs = v;
      best = i;
    }
  }
  return best;
}

}  // namespace

template <class T>
TruncatedSeries<T> det_cofactor(const SeriesMatrix<T>& m) {
  return cofactor_rec(entries(m), m.dim(), m.degree());
}

template <class T>
TruncatedSeries<T> det_bareiss(const SeriesMatrix<T>& m) {
  const std::size_t d = m.dim();
  if (d == 0) return TruncatedSeries<T>::constant(T(1), m.degree());
  auto a = entries(m);
  T sign(1);
  TruncatedSeries<T> prev_inv = TruncatedSeries<T>::constant(T(1), m.degree());
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const std::size_t p = unit_pivot(a, d, k);
    if (p == SIZE_MAX) return det_cofactor(m);
    if (p != k) {
      for (std::size_t j = 0; j < d; ++j) std::swap(a[k * d + j], a[p * d + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < d; ++i) {
      for (std::size_t j = k + 1; j < d; ++j) {
        a[i * d + j] = (a[k * d + k] * a[i * d + j] - a[i * d + k] * a[k * d + j]) * prev_inv;
      }
    }
    prev_inv = inverse(a[k * d + k]);
  }
  return a[d * d - 1] * sign;
}

template <class T>
TruncatedSeries<T> det(const SeriesMatrix<T>& m) {
  return m.dim() <= 4 ? det_cofactor(m) : det_bareiss(m);
}

template <class T>
std::vector<TruncatedSeries<T>> solve(const SeriesMatrix<T>& m,
                                      std::vector<TruncatedSeries<T>> rhs) {
  const std::size_t d = m.dim();
  if (rhs.size() != d) throw SeriesError("right-hand side has the wrong size");
  auto a = entries(m);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t p = unit_pivot(a, d, k);
    if (p == SIZE_MAX) throw SeriesError("matrix is not invertible over the series ring");
    if (p != k) {
      for (std::size_t j = 0; j < d; ++j) std::swap(a[k * d + j], a[p * d + j]);
      std::swap(rhs[k], rhs[p]);
    }
    const TruncatedSeries<T> inv = inverse(a[k * d + k]);
    for (std::size_t j = k; j < d; ++j) a[k * d + j] = a[k * d + j] * inv;
    rhs[k] = rhs[k] * inv;
    for (std::size_t i = 0; i < d; ++i) {
      if (i == k) continue;
      const TruncatedSeries<T> f = a[i * d + k];
      for (std::size_t j = k; j < d; ++j) a[i * d + j] -= f * a[k * d + j];
      rhs[i] -= f * rhs[k];
    }
  }
  return rhs;
}

#define KNEAD_INSTANTIATE(T)                                                                   \
  template class TruncatedSeries<T>;                                                           \
  template class SeriesMatrix<T>;                                                              \
  template TruncatedSeries<T> derivative(const TruncatedSeries<T>&);                           \
  template TruncatedSeries<T> inverse(const TruncatedSeries<T>&);                              \
  template TruncatedSeries<T> exp(const TruncatedSeries<T>&);                                  \
  template TruncatedSeries<T> log(const TruncatedSeries<T>&);                                  \
  template double max_abs(const TruncatedSeries<T>&, std::size_t, std::size_t);                \
  template SeriesMatrix<T> derivative(const SeriesMatrix<T>&);                                 \
  template TruncatedSeries<T> det(const SeriesMatrix<T>&);                                     \
  template TruncatedSeries<T> det_cofactor(const SeriesMatrix<T>&);                            \
  template TruncatedSeries<T> det_bareiss(const SeriesMatrix<T>&);                             \
  template std::vector<TruncatedSeries<T>> solve(const SeriesMatrix<T>&,                       \
                                                 std::vector<TruncatedSeries<T>>);

KNEAD_INSTANTIATE(double)
KNEAD_INSTANTIATE(Rational)
#undef KNEAD_INSTANTIATE

}  // namespace knead
