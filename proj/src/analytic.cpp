#include "knead/analytic.hpp"

#include "knead/kneading.hpp"

#include <cmath>

namespace knead {

namespace {

// sum_m t^m w^m(x) v(f^m x) where w is the cocycle built from `factor`.
template <class T, class Value, class Factor>
std::vector<double> orbit_sum(const WeightedSystem<T>& sys, const Germ<T>& x, double t,
                              std::size_t width, Value value, Factor factor,
                              const OrbitSumLimits& lim) {
  GermOrbit<T> orbit(sys, x);
  std::vector<double> acc(width, 0.0);
  const bool periodic = orbit.detect_cycle(lim.cycle_search);
  if (periodic) {
    const auto [start, len] = *orbit.cycle();
    double w = 1;  // t^m w^m
    std::vector<double> v(width);
    for (std::size_t m = 0; m < start; ++m) {
      const Germ<T>& g = orbit.at(m);
      value(g, v);
      for (std::size_t k = 0; k < width; ++k) acc[k] += w * v[k];
      w *= t * factor(g);
    }
    std::vector<double> block(width, 0.0);
    double r = 1;
    for (std::size_t m = start; m < start + len; ++m) {
      const Germ<T>& g = orbit.at(m);
      value(g, v);
      for (std::size_t k = 0; k < width; ++k) block[k] += r * v[k];
      r *= t * factor(g);
    }
    if (std::fabs(r) >= 1) throw Error("orbit sum diverges at t = " + std::to_string(t));
    for (std::size_t k = 0; k < width; ++k) acc[k] += w * block[k] / (1 - r);
    return acc;
  }
  double w = 1;
  std::vector<double> v(width);
  std::size_t small = 0;
  for (std::size_t m = 0; m < lim.max_terms; ++m) {
    const Germ<T>& g = orbit.at(m);
    value(g, v);
    double largest = 0;
    for (std::size_t k = 0; k < width; ++k) {
      acc[k] += w * v[k];
      largest = std::max(largest, std::fabs(acc[k]));
    }
    w *= t * factor(g);
    if (std::fabs(w) <= lim.rel_tol * std::max(1.0, largest)) {
      if (++small >= 8) return acc;
    } else {
      small = 0;
    }
    if (w == 0) return acc;
  }
  throw Error("orbit sum did not converge at t = " + std::to_string(t));
}

}  // namespace

template <class T>
std::vector<double> theta_at(const WeightedSystem<T>& sys, const Germ<T>& x, double t,
                             const OrbitSumLimits& lim) {
  const std::size_t d = sys.ell() + 1;
  return orbit_sum(
      sys, x, t, d,
      [&](const Germ<T>& g, std::vector<double>& v) {
        for (std::size_t k = 0; k < d; ++k) v[k] = compare(g, sys.cut(k)) > 0 ? 0.5 : -0.5;
      },
      [&](const Germ<T>& g) {
        const std::size_t i = sys.branch_of(g);
        return sys.sign(i) * to_double(sys.weight(i));
      },
      lim);
}

template <class T>
double generating_at(const WeightedSystem<T>& sys, const Germ<T>& x, double t,
                     const OrbitSumLimits& lim) {
  return orbit_sum(
      sys, x, t, 1, [](const Germ<T>&, std::vector<double>& v) { v[0] = 1; },
      [&](const Germ<T>& g) { return to_double(sys.weight(sys.branch_of(g))); }, lim)[0];
}

template <class T>
Eigen::MatrixXd kneading_matrix_at(const WeightedSystem<T>& sys, double t,
                                   const OrbitSumLimits& lim) {
  const std::size_t d = sys.ell() + 1;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    for (const auto& [germ, eps] : row_germs(sys, j)) {
      const auto th = theta_at(sys, germ, t, lim);
      for (std::size_t k = 0; k < d; ++k) r(j, k) += eps * th[k];
    }
  }
  return r;
}

template <class T>
double kneading_det_at(const WeightedSystem<T>& sys, double t, const OrbitSumLimits& lim) {
  return kneading_matrix_at(sys, t, lim).determinant();
}

template <class T>
double reduced_det_at(const WeightedSystem<T>& sys, double t, const OrbitSumLimits& lim) {
  const Eigen::MatrixXd r = kneading_matrix_at(sys, t, lim);
  return r.bottomRightCorner(r.rows() - 1, r.cols() - 1).determinant();
}

#define KNEAD_INSTANTIATE(T)                                                                  \
  template std::vector<double> theta_at(const WeightedSystem<T>&, const Germ<T>&, double,     \
                                        const OrbitSumLimits&);                               \
  template double generating_at(const WeightedSystem<T>&, const Germ<T>&, double,             \
                                const OrbitSumLimits&);                                       \
  template Eigen::MatrixXd kneading_matrix_at(const WeightedSystem<T>&, double,               \
                                              const OrbitSumLimits&);                         \
  template double kneading_det_at(const WeightedSystem<T>&, double, const OrbitSumLimits&);   \
  template double reduced_det_at(const WeightedSystem<T>&, double, const OrbitSumLimits&);

KNEAD_INSTANTIATE(double)
KNEAD_INSTANTIATE(Rational)
#undef KNEAD_INSTANTIATE

}  // namespace knead
