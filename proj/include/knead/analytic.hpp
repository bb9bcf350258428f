#pragma once
// Kneading quantities at a scalar t, summed to convergence rather than
// truncated. Eventually periodic orbits contribute an exact geometric tail.

#include "knead/system.hpp"

#include <Eigen/Dense>

#include <vector>

namespace knead {

struct OrbitSumLimits {
  std::size_t cycle_search = 4096;   // germs stored while looking for a cycle
  std::size_t max_terms = 1 << 20;   // hard stop for aperiodic orbits
  double rel_tol = 1e-17;
};

/// theta(x, t; c_k) for k = 0..l.
template <class T>
std::vector<double> theta_at(const WeightedSystem<T>& sys, const Germ<T>& x, double t,
                             const OrbitSumLimits& lim = {});
/// G(x, t) = sum t^n g^n(x).
template <class T>
double generating_at(const WeightedSystem<T>& sys, const Germ<T>& x, double t,
                     const OrbitSumLimits& lim = {});

template <class T>
Eigen::MatrixXd kneading_matrix_at(const WeightedSystem<T>& sys, double t,
                                   const OrbitSumLimits& lim = {});
template <class T>
double kneading_det_at(const WeightedSystem<T>& sys, double t, const OrbitSumLimits& lim = {});
template <class T>
double reduced_det_at(const WeightedSystem<T>& sys, double t, const OrbitSumLimits& lim = {});

}  // namespace knead
