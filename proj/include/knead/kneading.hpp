#pragma once

#include "knead/series.hpp"
#include "knead/system.hpp"

#include <vector>

namespace knead {

/// A germ contributing to row j of the kneading matrix with its sign eps*.
template <class T>
struct RowGerm {
  Germ<T> germ;
  int eps;
};

/// Row j > 0 uses (c_j+, +1) and (c_j-, -1); row 0 uses (a+, +1) and (b-, +1).
template <class T>
std::vector<RowGerm<T>> row_germs(const WeightedSystem<T>& sys, std::size_t j);

template <class T>
TruncatedSeries<T> theta(const WeightedSystem<T>& sys, const Germ<T>& x, std::size_t k,
                         std::size_t N);
/// theta(x, t; c_k) for k = 0..l from a single orbit.
template <class T>
std::vector<TruncatedSeries<T>> theta_all(const WeightedSystem<T>& sys, const Germ<T>& x,
                                          std::size_t N);

template <class T>
SeriesMatrix<T> kneading_matrix(const WeightedSystem<T>& sys, std::size_t N);
/// The l x l block on indices 1..l.
template <class T>
SeriesMatrix<T> reduced_matrix(const WeightedSystem<T>& sys, std::size_t N);
template <class T>
TruncatedSeries<T> kneading_det(const WeightedSystem<T>& sys, std::size_t N);
template <class T>
TruncatedSeries<T> reduced_det(const WeightedSystem<T>& sys, std::size_t N);

/// Weighted preimage count of y inside J; coefficient p sums g^p over Gamma_{p,y} n J.
template <class T>
TruncatedSeries<T> gamma(const PreimageTable<T>& table, const GermInterval<T>& J);
template <class T>
TruncatedSeries<T> gamma(const WeightedSystem<T>& sys, const T& y, const GermInterval<T>& J,
                         std::size_t N);

/// sum_j gamma_{c_j,J} R_jk - (theta(v;c_k) - theta(u;c_k)) for k = 0..l. Empty J gives zeros.
template <class T>
std::vector<TruncatedSeries<T>> mki_residual(const WeightedSystem<T>& sys,
                                             const GermInterval<T>& J, std::size_t N);

/// m_{c_j}(u, t); identically 1/2 for j = 0.
template <class T>
TruncatedSeries<T> m_series(const PreimageTable<T>* table, const Germ<T>& u, std::size_t N);
template <class T>
TruncatedSeries<T> m_series(const WeightedSystem<T>& sys, std::size_t j, const Germ<T>& u,
                            std::size_t N);
template <class T>
SeriesMatrix<T> f_matrix(const WeightedSystem<T>& sys, std::size_t N);
/// Largest coefficient of F R - R' through degree N - 1.
template <class T>
double fast_identity_residual(const WeightedSystem<T>& sys, std::size_t N);

template <class T>
struct MtReport {
  // eta[i][k] = Delta_{c_{i+1}} eta(.; I_k), the l x (l+1) matrix N(t).
  std::vector<std::vector<TruncatedSeries<T>>> nmatrix;
  std::vector<TruncatedSeries<T>> minors;     // D_j
  std::vector<TruncatedSeries<T>> mt_by_col;  // (-1)^j D_j / (1 - s_j g_j t)
  TruncatedSeries<T> d_mt;
  TruncatedSeries<T> det_r;
  TruncatedSeries<T> det_b;
  TruncatedSeries<T> h;
  std::vector<TruncatedSeries<T>> kappa;  // kappa_1..kappa_l
  double key_residual = 0;       // max over sampled germs of |sum - 1|
  double column_spread = 0;      // max |mt_by_col[j] - mt_by_col[0]|
  double mt_vs_det = 0;          // |D_MT - det R|
  double relation_residual = 0;  // |H det R - det B|
  double kappa_residual = 0;     // |2H theta_0 + sum 2 kappa_i theta_i - 1| on sampled germs
};

template <class T>
MtReport<T> mt_relations(const WeightedSystem<T>& sys, std::size_t N,
                         const std::vector<Germ<T>>& samples);

/// Largest |coefficient| over a list of series.
template <class T>
double max_abs(const std::vector<TruncatedSeries<T>>& v) {
  double m = 0;
  for (const auto& s : v) m = std::max(m, max_abs(s));
  return m;
}

}  // namespace knead
