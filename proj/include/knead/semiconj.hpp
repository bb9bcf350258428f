#pragma once
// Weighted lap function, the semi-conjugacy phi_t onto an expanding PL
// model for 0 < t < t*, and the limit map phi with its critical PL model.

#include "knead/cylinders.hpp"
#include "knead/pressure.hpp"
#include "knead/series.hpp"
#include "knead/system.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace knead {

/// G(x, t) = sum t^n g^n(x) from the germ orbit.
template <class T>
TruncatedSeries<T> generating(const WeightedSystem<T>& sys, const Germ<T>& x, std::size_t N);
/// Average of G(x-) and G(x+) at an interior point.
template <class T>
TruncatedSeries<T> generating_point(const WeightedSystem<T>& sys, const T& x, std::size_t N);

enum class LapRoute {
  cylinders,  // boundary census over Z_{n+1}
  gamma,      // sum_j gamma_{c_j,J} G(c_j)
  kneading,   // sum_k Delta_J theta_k w_k with R w = (0, G(c_1), ..., G(c_l))
};

template <class T>
struct LapSeries {
  GermInterval<T> J;
  TruncatedSeries<T> L;
};

template <class T>
LapSeries<T> lap(const WeightedSystem<T>& sys, const GermInterval<T>& J, std::size_t N,
                 LapRoute route = LapRoute::cylinders, const CylinderCaps& caps = {});

/// w = R^{-1} (0, G(c_1), ..., G(c_l)) over the series ring.
template <class T>
std::vector<TruncatedSeries<T>> lap_weights(const WeightedSystem<T>& sys, std::size_t N);

struct PhiOptions {
  std::size_t N = 48;
  double tail_tol = 1e-9;
  // When absent, t* comes from pressure().
  std::optional<double> t_star;
  PressureOptions pressure;
};

/// phi_t(x) = L(<a+, x>, t) / L(]a, b[, t), with L summed through the
/// kneading route and evaluated at one fixed t.
template <class T>
class SemiConjugacy {
 public:
  SemiConjugacy(const WeightedSystem<T>& sys, double t, const PhiOptions& opt = {});

  const WeightedSystem<T>& system() const { return *sys_; }
  double t() const { return t_; }
  double t_star() const { return t_star_; }
  std::size_t degree() const { return N_; }
  /// Estimated tail of L(]a,b[) past degree N, relative to its value.
  double tail_bound() const { return tail_; }

  double operator()(const Germ<T>& x) const;
  /// L(J, t) evaluated at t.
  double lap(const GermInterval<T>& J) const;
  double total() const { return total_; }

 private:
  double h(const Germ<T>& x) const;

  const WeightedSystem<T>* sys_;
  double t_;
  double t_star_ = 0;
  std::size_t N_;
  // partial_[k][j] = sum_{n <= j} w_k[n] t^n
  std::vector<std::vector<double>> partial_;
  double h_a_ = 0;
  double total_ = 0;
  double tail_ = 0;
};

template <class T>
double phi_t(const WeightedSystem<T>& sys, double t, const Germ<T>& x,
             const PhiOptions& opt = {});

struct ModelBranch {
  std::size_t i = 0;
  double lo = 0;  // left end of the model interval
  double hi = 0;
  double slope = 0;
  double intercept = 0;
  double image_lo = 0;  // model value at the left end
  double image_hi = 0;
  bool degenerate = false;
  double chord_slope_error = 0;  // |measured chord slope - slope| relative to |slope|
};

struct ModelMap {
  double t = 0;  // 1/rho_1 for the critical model
  bool critical = false;
  std::vector<ModelBranch> branches;
  bool disjoint = true;
  // Critical model only.
  std::vector<double> c_tilde;    // phi(c_k), k = 0..l+1
  std::vector<std::size_t> kept;  // surviving indices
  bool continuous = false;
  std::string label;
  double rho1 = 0;
  std::vector<double> weights;  // g_i by original index

  /// f~_i(y); throws for an index outside the model.
  double apply(std::size_t i, double y) const;
  /// The surviving branches of a critical model as a weighted system on [0, 1].
  WeightedSystem<double> as_system() const;
};

template <class T>
ModelMap model_map(const SemiConjugacy<T>& phi);
template <class T>
ModelMap model_map(const WeightedSystem<T>& sys, double t, const PhiOptions& opt = {});

/// max over samples of |phi_t(f x) - f~_t(phi_t(x))|.
template <class T>
double semiconj_residual(const SemiConjugacy<T>& phi, const ModelMap& model,
                         const std::vector<Germ<T>>& samples);

/// Uniformly drawn interior germs with random direction, sorted in germ order.
template <class T>
std::vector<Germ<T>> random_germs(const WeightedSystem<T>& sys, std::size_t count,
                                  std::uint64_t seed);

/// Scalar lap machinery at a single t: h(x) = theta(x, t) . R(t)^{-1} (0, G(c_j, t)).
template <class T>
class ScalarLap {
 public:
  ScalarLap(const WeightedSystem<T>& sys, double t);

  double h(const Germ<T>& x) const;
  /// h averaged over x- and x+, so that points carry no mass.
  double h_point(const T& x) const;
  double lap(const GermInterval<T>& J) const { return h(J.upper()) - h(J.lower()); }
  double total() const { return h_b_ - h_a_; }
  double h_a() const { return h_a_; }
  double rcond() const { return rcond_; }

 private:
  const WeightedSystem<T>* sys_;
  double t_;
  Eigen::VectorXd w_;
  double h_a_ = 0;
  double h_b_ = 0;
  double rcond_ = 0;
};

struct CrossCheck {
  double value = 0;
  double rcond = 0;
  std::vector<std::string> warnings;
};

/// phi_t through the scalar matrix formula; for l = 1 through normalized theta(x, t; c_1).
template <class T>
CrossCheck h_crosscheck(const WeightedSystem<T>& sys, double t, const Germ<T>& x);

struct LambdaOptions {
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  double agreement_tol = 1e-6;
  PressureOptions pressure;
};

struct LambdaValue {
  double value = 0;
  double spread = 0;             // quadratic vs linear extrapolation
  std::vector<double> ratios;    // ratio at each (1 - delta) t*
};

/// Lambda(J) = lim L(J, t) / L(]a, b[, t) as t increases to t*.
template <class T>
class LambdaMeasure {
 public:
  explicit LambdaMeasure(const WeightedSystem<T>& sys, const LambdaOptions& opt = {});
  LambdaMeasure(const WeightedSystem<T>& sys, double t_star, const LambdaOptions& opt = {});

  double t_star() const { return t_star_; }
  double rho1() const { return 1.0 / t_star_; }
  /// Lambda of the interval between two germs.
  LambdaValue operator()(const Germ<T>& lo, const Germ<T>& hi) const;
  LambdaValue operator()(const GermInterval<T>& J) const;
  /// phi(x) = Lambda(]a, x[) with Lambda({x}) = 0 enforced.
  LambdaValue phi(const T& x) const;
  /// Lambda({x}) before enforcement, as a diagnostic.
  double point_mass(const T& x) const;

 private:
  LambdaValue extrapolate(std::vector<double> ratios) const;

  const WeightedSystem<T>* sys_;
  double t_star_ = 0;
  LambdaOptions opt_;
  std::vector<ScalarLap<T>> laps_;
};

template <class T>
LambdaValue lambda(const WeightedSystem<T>& sys, const GermInterval<T>& J,
                   const LambdaOptions& opt = {});

struct CriticalOptions {
  LambdaOptions lambda;
  double collapse_tol = 1e-9;
};

/// The PL model of slopes s_i rho_1 / g_i on the surviving intervals.
template <class T>
ModelMap critical_model(const WeightedSystem<T>& sys, const CriticalOptions& opt = {});
template <class T>
ModelMap critical_model(const LambdaMeasure<T>& lam, const WeightedSystem<T>& sys,
                        const CriticalOptions& opt = {});

/// sum over Z_n of Lambda(alpha) for n = 1..depth (index n - 1).
template <class T>
std::vector<double> lambda_mass(const LambdaMeasure<T>& lam, const WeightedSystem<T>& sys,
                                std::size_t depth, const CylinderCaps& caps = {});

}  // namespace knead
