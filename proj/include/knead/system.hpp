#pragma once

#include "knead/scalar.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace knead {

class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::optional<std::size_t> branch = std::nullopt);
  std::optional<std::size_t> branch() const { return branch_; }

 private:
  std::optional<std::size_t> branch_;
};

// Raised in float64 mode when an orbit lands within the snap tolerance of a
// cutting point without hitting it exactly.
class GermAmbiguity : public Error {
 public:
  using Error::Error;
};

/// A one-sided approach to a point: (x, +1) is x+, (x, -1) is x-.
///
/// The ordering compares the base first and the direction second,
/// which is exactly the germ order x- < x+ and x+ < y- for x < y.
template <class T>
struct Germ {
  T base{};
  int dir = 1;

  friend bool operator==(const Germ&, const Germ&) = default;
  friend bool operator<(const Germ& l, const Germ& r) {
    return l.base < r.base || (l.base == r.base && l.dir < r.dir);
  }
  friend bool operator>(const Germ& l, const Germ& r) { return r < l; }
  friend bool operator<=(const Germ& l, const Germ& r) { return !(r < l); }
  friend bool operator>=(const Germ& l, const Germ& r) { return !(l < r); }
};

/// Position of a germ relative to a base point in the order on I u I^.
/// Never zero: a germ is never equal to a point.
template <class T>
int compare(const Germ<T>& g, const T& y) {
  if (g.base < y) return -1;
  if (g.base > y) return 1;
  return g.dir;
}

/// Half-sign sigma(x^, y) = sgn(x^ - y) / 2.
template <class T>
T sigma(const Germ<T>& g, const T& y) {
  return compare(g, y) > 0 ? half<T>() : -half<T>();
}

/// The interval <u^, v^> = { x : u^ < x < v^ }.
template <class T>
class GermInterval {
 public:
  GermInterval() = default;  // empty
  GermInterval(Germ<T> lower, Germ<T> upper);

  static GermInterval open(const T& u, const T& v) { return {{u, 1}, {v, -1}}; }
  static GermInterval closed(const T& u, const T& v) { return {{u, -1}, {v, 1}}; }
  static GermInterval point(const T& x) { return {{x, -1}, {x, 1}}; }

  bool empty() const { return empty_; }
  const Germ<T>& lower() const { return lower_; }
  const Germ<T>& upper() const { return upper_; }
  bool contains(const T& x) const {
    return !empty_ && compare(lower_, x) < 0 && compare(upper_, x) > 0;
  }

 private:
  Germ<T> lower_{};
  Germ<T> upper_{};
  bool empty_ = true;
};

/// One monotone branch f_i on the closure of ]c_i, c_{i+1}[.
template <class T>
struct Branch {
  using Fn = std::function<T(const T&)>;

  bool affine = true;
  T slope{};
  T intercept{};
  Fn map;      // custom branches only
  Fn inverse;  // optional for custom branches; bisection otherwise
  T weight{1};
  // Prescribed values f_i(c_i^+) and f_i(c_{i+1}^-). When absent they are
  // computed from the map during validation.
  std::optional<std::pair<T, T>> endpoint_images;

  static Branch linear(T slope, T intercept, T weight = T(1));
  // Affine branch through prescribed endpoint images.
  static Branch chord(T image_lo, T image_hi, T weight = T(1));
  static Branch custom(Fn map, Fn inverse, T weight = T(1));
};

/// Unvalidated description of a weighted system.
template <class T>
struct SystemSpec {
  T a{};
  T b{};
  std::vector<T> cuts;  // interior c_1 < ... < c_l
  std::vector<Branch<T>> branches;
  double snap_tolerance = 1e-12;  // relative to b - a, float64 only
};

template <class T>
struct OrbitPoint {
  Germ<T> germ;
  T sg;   // [sg]^m
  int s;  // s^m
  T g;    // g^m
};

template <class T>
class WeightedSystem {
 public:
  explicit WeightedSystem(SystemSpec<T> spec);

  const T& a() const { return points_.front(); }
  const T& b() const { return points_.back(); }
  std::size_t ell() const { return points_.size() - 2; }
  std::size_t branch_count() const { return branches_.size(); }
  /// c_k for k = 0..l+1, with c_0 = a and c_{l+1} = b.
  const T& cut(std::size_t k) const { return points_[k]; }
  std::span<const T> points() const { return points_; }
  const Branch<T>& branch(std::size_t i) const { return branches_[i]; }
  int sign(std::size_t i) const { return signs_[i]; }
  const T& weight(std::size_t i) const { return branches_[i].weight; }
  const T& image_lo(std::size_t i) const { return images_[i].first; }
  const T& image_hi(std::size_t i) const { return images_[i].second; }
  /// Absolute snap tolerance; zero in exact mode.
  const T& snap() const { return snap_; }
  /// True when adjacent branches agree at every interior cutting point.
  bool continuous() const;

  bool is_germ(const Germ<T>& g) const;
  /// Index i with g in I^_i.
  std::size_t branch_of(const Germ<T>& g) const;
  /// Continuous extension of f_i, evaluated anywhere on [c_i, c_{i+1}].
  T apply(std::size_t i, const T& x) const;
  /// The preimage of y under f_i if it lies strictly inside ]c_i, c_{i+1}[.
  std::optional<T> preimage(std::size_t i, const T& y) const;
  /// f^ on germs.
  Germ<T> step(const Germ<T>& g) const;

 private:
  T checked_image(const T& y) const;

  std::vector<T> points_;
  std::vector<Branch<T>> branches_;
  std::vector<int> signs_;
  std::vector<std::pair<T, T>> images_;
  T snap_{};
};

template <class T>
WeightedSystem<T> validate_system(SystemSpec<T> spec) {
  return WeightedSystem<T>(std::move(spec));
}

template <class T>
Germ<T> germ_step(const WeightedSystem<T>& sys, const Germ<T>& g) {
  return sys.step(g);
}

/// Lazily extended forward orbit of a germ. Once a germ repeats, later
/// positions are replayed from the detected cycle.
template <class T>
class GermOrbit {
 public:
  GermOrbit(const WeightedSystem<T>& sys, Germ<T> start);

  const Germ<T>& at(std::size_t m);
  /// Index where the cycle starts and its length, once detected.
  std::optional<std::pair<std::size_t, std::size_t>> cycle() const { return cycle_; }
  /// Extends the orbit until a cycle is found or `limit` germs are stored.
  bool detect_cycle(std::size_t limit);

 private:
  void extend();

  const WeightedSystem<T>* sys_;
  std::vector<Germ<T>> germs_;
  std::map<Germ<T>, std::size_t> seen_;
  std::optional<std::pair<std::size_t, std::size_t>> cycle_;
};

/// Germs with their cocycles [sg]^m, s^m, g^m for m = 0..n.
template <class T>
std::vector<OrbitPoint<T>> germ_orbit(const WeightedSystem<T>& sys, const Germ<T>& start,
                                      std::size_t n);

template <class T>
struct Preimage {
  T x;
  T weight;  // g^p(x)
};

/// Gamma_{p,y} for p = 0..depth, each level sorted by x, with prefix sums of
/// the weights for fast interval and half-sign sums.
template <class T>
class PreimageTable {
 public:
  PreimageTable(const WeightedSystem<T>& sys, const T& y, std::size_t depth);

  const T& target() const { return target_; }
  std::size_t depth() const { return levels_.size() - 1; }
  std::span<const Preimage<T>> level(std::size_t p) const { return levels_[p]; }
  /// Sum of g^p(x) over x in Gamma_{p,y} with x in J.
  T weight_in(std::size_t p, const GermInterval<T>& J) const;
  /// Sum of g^p(x) sigma(u^, x) over Gamma_{p,y}.
  T sigma_sum(std::size_t p, const Germ<T>& u) const;

 private:
  // Number of preimages x at level p with x < g in the germ order.
  std::size_t count_below(std::size_t p, const Germ<T>& g) const;
  T prefix(std::size_t p, std::size_t n) const { return prefix_[p][n]; }

  T target_;
  std::vector<std::vector<Preimage<T>>> levels_;
  std::vector<std::vector<T>> prefix_;
};

template <class T>
PreimageTable<T> preimages(const WeightedSystem<T>& sys, const T& y, std::size_t depth) {
  return PreimageTable<T>(sys, y, depth);
}

}  // namespace knead
