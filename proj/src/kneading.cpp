#include "knead/kneading.hpp"

namespace knead {

template <class T>
std::vector<RowGerm<T>> row_germs(const WeightedSystem<T>& sys, std::size_t j) {
  if (j == 0) return {{Germ<T>{sys.a(), 1}, 1}, {Germ<T>{sys.b(), -1}, 1}};
  return {{Germ<T>{sys.cut(j), 1}, 1}, {Germ<T>{sys.cut(j), -1}, -1}};
}

template <class T>
std::vector<TruncatedSeries<T>> theta_all(const WeightedSystem<T>& sys, const Germ<T>& x,
                                          std::size_t N) {
  const auto orbit = germ_orbit(sys, x, N);
  std::vector<TruncatedSeries<T>> out(sys.ell() + 1, TruncatedSeries<T>(N));
  for (std::size_t m = 0; m <= N; ++m) {
    for (std::size_t k = 0; k <= sys.ell(); ++k) {
      out[k][m] = orbit[m].sg * sigma(orbit[m].germ, sys.cut(k));
    }
  }
  return out;
}

template <class T>
TruncatedSeries<T> theta(const WeightedSystem<T>& sys, const Germ<T>& x, std::size_t k,
                         std::size_t N) {
  if (k > sys.ell()) throw Error("cut index out of range");
  const auto orbit = germ_orbit(sys, x, N);
  TruncatedSeries<T> out(N);
  for (std::size_t m = 0; m <= N; ++m) out[m] = orbit[m].sg * sigma(orbit[m].germ, sys.cut(k));
  return out;
}

template <class T>
SeriesMatrix<T> kneading_matrix(const WeightedSystem<T>& sys, std::size_t N) {
  const std::size_t d = sys.ell() + 1;
  SeriesMatrix<T> r(d, N);
  for (std::size_t j = 0; j < d; ++j) {
    for (const auto& [germ, eps] : row_germs(sys, j)) {
      const auto th = theta_all(sys, germ, N);
      for (std::size_t k = 0; k < d; ++k) {
        if (eps > 0) {
          r(j, k) += th[k];
        } else {
          r(j, k) -= th[k];
        }
      }
    }
  }
  return r;
}

template <class T>
SeriesMatrix<T> reduced_matrix(const WeightedSystem<T>& sys, std::size_t N) {
  return kneading_matrix(sys, N).trailing(1);
}

template <class T>
TruncatedSeries<T> kneading_det(const WeightedSystem<T>& sys, std::size_t N) {
  return det(kneading_matrix(sys, N));
}

template <class T>
TruncatedSeries<T> reduced_det(const WeightedSystem<T>& sys, std::size_t N) {
  return det(reduced_matrix(sys, N));
}

template <class T>
TruncatedSeries<T> gamma(const PreimageTable<T>& table, const GermInterval<T>& J) {
  TruncatedSeries<T> out(table.depth());
  for (std::size_t p = 0; p <= table.depth(); ++p) out[p] = table.weight_in(p, J);
  return out;
}

template <class T>
TruncatedSeries<T> gamma(const WeightedSystem<T>& sys, const T& y, const GermInterval<T>& J,
                         std::size_t N) {
  if (J.empty()) return TruncatedSeries<T>(N);
  return gamma(PreimageTable<T>(sys, y, N), J);
}

namespace {

template <class T>
std::vector<PreimageTable<T>> cut_tables(const WeightedSystem<T>& sys, std::size_t N) {
  std::vector<PreimageTable<T>> tables;
  tables.reserve(sys.ell());
  for (std::size_t j = 1; j <= sys.ell(); ++j) tables.emplace_back(sys, sys.cut(j), N);
  return tables;
}

}  // namespace

template <class T>
std::vector<TruncatedSeries<T>> mki_residual(const WeightedSystem<T>& sys,
                                             const GermInterval<T>& J, std::size_t N) {
  const std::size_t d = sys.ell() + 1;
  std::vector<TruncatedSeries<T>> out(d, TruncatedSeries<T>(N));
  if (J.empty()) return out;
  const auto r = kneading_matrix(sys, N);
  const auto tables = cut_tables(sys, N);
  const auto upper = theta_all(sys, J.upper(), N);
  const auto lower = theta_all(sys, J.lower(), N);
  for (std::size_t j = 1; j < d; ++j) {
    const auto g = gamma(tables[j - 1], J);
    for (std::size_t k = 0; k < d; ++k) out[k] += g * r(j, k);
  }
  for (std::size_t k = 0; k < d; ++k) out[k] -= upper[k] - lower[k];
  return out;
}

template <class T>
TruncatedSeries<T> m_series(const PreimageTable<T>* table, const Germ<T>& u, std::size_t N) {
  if (table == nullptr) return TruncatedSeries<T>::constant(half<T>(), N);
  TruncatedSeries<T> out(N);
  for (std::size_t p = 0; p <= std::min(N, table->depth()); ++p) out[p] = table->sigma_sum(p, u);
  return out;
}

template <class T>
TruncatedSeries<T> m_series(const WeightedSystem<T>& sys, std::size_t j, const Germ<T>& u,
                            std::size_t N) {
  if (j == 0) return m_series<T>(nullptr, u, N);
  const PreimageTable<T> table(sys, sys.cut(j), N);
  return m_series(&table, u, N);
}

template <class T>
SeriesMatrix<T> f_matrix(const WeightedSystem<T>& sys, std::size_t N) {
  const std::size_t d = sys.ell() + 1;
  const auto tables = cut_tables(sys, N);
  SeriesMatrix<T> f(d, N);
  for (std::size_t i = 0; i < d; ++i) {
    for (const auto& [germ, eps] : row_germs(sys, i)) {
      const auto orbit = germ_orbit(sys, germ, N + 1);
      for (std::size_t q = 0; q <= N; ++q) {
        const OrbitPoint<T>& pt = orbit[q + 1];
        const T coef = T(eps) * pt.sg;
        if (coef == T(0)) continue;
        for (std::size_t j = 0; j < d; ++j) {
          auto& target = f(i, j);
          if (j == 0) {
            target[q] += coef * half<T>();
            continue;
          }
          const auto& table = tables[j - 1];
          for (std::size_t p = 0; p + q <= N; ++p) target[p + q] += coef * table.sigma_sum(p, pt.germ);
        }
      }
    }
  }
  return f;
}

template <class T>
double fast_identity_residual(const WeightedSystem<T>& sys, std::size_t N) {
  const auto r = kneading_matrix(sys, N);
  const auto fr = f_matrix(sys, N) * r;
  const auto dr = derivative(r);
  double worst = 0;
  for (std::size_t i = 0; i < r.dim(); ++i) {
    for (std::size_t j = 0; j < r.dim(); ++j) {
      worst = std::max(worst, max_abs(fr(i, j).truncated(dr.degree()) - dr(i, j)));
    }
  }
  return worst;
}

template <class T>
MtReport<T> mt_relations(const WeightedSystem<T>& sys, std::size_t N,
                         const std::vector<Germ<T>>& samples) {
  const std::size_t ell = sys.ell();
  const auto t = TruncatedSeries<T>::monomial(1, N);
  const auto one = TruncatedSeries<T>::constant(T(1), N);
  auto sg = [&](std::size_t k) { return T(sys.sign(k)) * sys.weight(k); };
  auto eta = [&](const Germ<T>& x) {
    auto th = theta_all(sys, x, N);
    std::vector<TruncatedSeries<T>> e(ell + 1);
    for (std::size_t k = 0; k <= ell; ++k) e[k] = th[k] - (k < ell ? th[k + 1] : -th[0]);
    return std::make_pair(th, e);
  };

  MtReport<T> rep;
  rep.nmatrix.assign(ell, std::vector<TruncatedSeries<T>>(ell + 1));
  for (std::size_t i = 1; i <= ell; ++i) {
    const auto plus = eta(Germ<T>{sys.cut(i), 1}).second;
    const auto minus = eta(Germ<T>{sys.cut(i), -1}).second;
    for (std::size_t k = 0; k <= ell; ++k) rep.nmatrix[i - 1][k] = plus[k] - minus[k];
  }
  for (std::size_t j = 0; j <= ell; ++j) {
    SeriesMatrix<T> m(ell, N);
    for (std::size_t i = 0; i < ell; ++i) {
      std::size_t col = 0;
      for (std::size_t k = 0; k <= ell; ++k) {
        if (k != j) m(i, col++) = rep.nmatrix[i][k];
      }
    }
    rep.minors.push_back(det(m));
    auto v = rep.minors.back() * inverse(one - t * sg(j));
    if (j % 2) v = -v;
    rep.mt_by_col.push_back(std::move(v));
  }
  rep.d_mt = rep.mt_by_col[0];
  for (const auto& v : rep.mt_by_col) {
    rep.column_spread = std::max(rep.column_spread, max_abs(v - rep.d_mt));
  }

  const auto r = kneading_matrix(sys, N);
  rep.det_r = det(r);
  rep.det_b = det(r.trailing(1));
  rep.h = one - t * ((sg(0) + sg(ell)) / T(2));
  for (std::size_t i = 1; i <= ell; ++i) rep.kappa.push_back(t * ((sg(i - 1) - sg(i)) / T(2)));
  rep.mt_vs_det = max_abs(rep.d_mt - rep.det_r);
  rep.relation_residual = max_abs(rep.h * rep.det_r - rep.det_b);

  for (const auto& x : samples) {
    const auto [th, e] = eta(x);
    auto key = -one;
    for (std::size_t k = 0; k <= ell; ++k) key += (one - t * sg(k)) * e[k];
    rep.key_residual = std::max(rep.key_residual, max_abs(key));
    auto kap = rep.h * th[0] * T(2) - one;
    for (std::size_t i = 1; i <= ell; ++i) kap += rep.kappa[i - 1] * th[i] * T(2);
    rep.kappa_residual = std::max(rep.kappa_residual, max_abs(kap));
  }
  return rep;
}

#define KNEAD_INSTANTIATE(T)                                                                    \
  template std::vector<RowGerm<T>> row_germs(const WeightedSystem<T>&, std::size_t);            \
  template TruncatedSeries<T> theta(const WeightedSystem<T>&, const Germ<T>&, std::size_t,      \
                                    std::size_t);                                               \
  template std::vector<TruncatedSeries<T>> theta_all(const WeightedSystem<T>&, const Germ<T>&,  \
                                                     std::size_t);                              \
  template SeriesMatrix<T> kneading_matrix(const WeightedSystem<T>&, std::size_t);              \
  template SeriesMatrix<T> reduced_matrix(const WeightedSystem<T>&, std::size_t);               \
  template TruncatedSeries<T> kneading_det(const WeightedSystem<T>&, std::size_t);              \
  template TruncatedSeries<T> reduced_det(const WeightedSystem<T>&, std::size_t);               \
  template TruncatedSeries<T> gamma(const PreimageTable<T>&, const GermInterval<T>&);           \
  template TruncatedSeries<T> gamma(const WeightedSystem<T>&, const T&, const GermInterval<T>&, \
                                    std::size_t);                                               \
  template std::vector<TruncatedSeries<T>> mki_residual(const WeightedSystem<T>&,               \
                                                        const GermInterval<T>&, std::size_t);   \
  template TruncatedSeries<T> m_series(const PreimageTable<T>*, const Germ<T>&, std::size_t);   \
  template TruncatedSeries<T> m_series(const WeightedSystem<T>&, std::size_t, const Germ<T>&,   \
                                       std::size_t);                                            \
  template SeriesMatrix<T> f_matrix(const WeightedSystem<T>&, std::size_t);                     \
  template double fast_identity_residual(const WeightedSystem<T>&, std::size_t);                \
  template MtReport<T> mt_relations(const WeightedSystem<T>&, std::size_t,                      \
                                    const std::vector<Germ<T>>&);

KNEAD_INSTANTIATE(double)
KNEAD_INSTANTIATE(Rational)
#undef KNEAD_INSTANTIATE

}  // namespace knead
