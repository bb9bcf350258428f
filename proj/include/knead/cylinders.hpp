#pragma once

#include "knead/series.hpp"
#include "knead/system.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace knead {

class CapExceeded : public Error {
 public:
  using Error::Error;
};

struct CylinderCaps {
  std::size_t max_depth = 24;
  std::uint64_t max_cylinders = 10'000'000;  // per depth
};

/// An n-cylinder ]u, v[ with its itinerary and the germs f^n(u+), f^n(v-).
template <class T>
struct Cylinder {
  std::vector<std::uint8_t> word;
  T u{};
  T v{};
  int sn = 1;
  T gn{1};
  Germ<T> image_u;
  Germ<T> image_v;

  std::size_t depth() const { return word.size(); }
};

/// Depth-first pullback enumeration visiting every cylinder of depth 1..n.
/// The visitor sees a reference to scratch storage; copy what you keep.
template <class T>
void for_each_cylinder(const WeightedSystem<T>& sys, std::size_t n,
                       const std::function<void(const Cylinder<T>&)>& visit,
                       const CylinderCaps& caps = {});

/// Z_n sorted by left endpoint.
template <class T>
std::vector<Cylinder<T>> enumerate_cylinders(const WeightedSystem<T>& sys, std::size_t n,
                                             const CylinderCaps& caps = {});

template <class T>
std::string word_string(const Cylinder<T>& c);

template <class T>
struct Norms {
  T l1{};
  T linf{};
  std::uint64_t count = 0;
};

/// ||g^n||_1 and ||g^n||_inf for n = 1..n_max (index n - 1).
template <class T>
std::vector<Norms<T>> norms(const WeightedSystem<T>& sys, std::size_t n_max,
                            const CylinderCaps& caps = {});

struct RhoEstimate {
  std::size_t n;
  double rho1;    // ||g^n||_1^{1/n}
  double rhoinf;  // ||g^n||_inf^{1/n}
};
template <class T>
std::vector<RhoEstimate> rho_estimates(const WeightedSystem<T>& sys, std::size_t n_max,
                                       const CylinderCaps& caps = {});

/// pi(alpha) from the boundary germs; in {-1, 0, 1}.
template <class T>
int pi_weight(const WeightedSystem<T>& sys, const Cylinder<T>& c);
template <class T>
T omega(const WeightedSystem<T>& sys, const Cylinder<T>& c);

/// N_1..N_{n_max} (index n - 1).
template <class T>
std::vector<T> fixed_point_counts(const WeightedSystem<T>& sys, std::size_t n_max,
                                  const CylinderCaps& caps = {});
/// exp(sum N_n t^n / n), truncated at min(N, counts.size()).
template <class T>
TruncatedSeries<T> zeta_series(const std::vector<T>& counts, std::size_t N);
/// N_f(t) = sum N_n t^{n-1}.
template <class T>
TruncatedSeries<T> nf_series(const std::vector<T>& counts, std::size_t N);

template <class T>
struct ZetaCheck {
  std::vector<T> counts;
  TruncatedSeries<T> zeta;
  TruncatedSeries<T> det;
  TruncatedSeries<T> product_residual;  // Z D - 1 through degree N
  TruncatedSeries<T> log_residual;      // N_f + D'/D through degree N - 1
};
template <class T>
ZetaCheck<T> zeta_residual(const WeightedSystem<T>& sys, std::size_t N,
                           const CylinderCaps& caps = {});

struct ExpansivenessProbe {
  std::vector<double> sup_diam;  // depth 1..n_max
  bool contracting = false;      // heuristic: the last values keep shrinking
  std::string label = "heuristic";
};
template <class T>
ExpansivenessProbe expansiveness_probe(const WeightedSystem<T>& sys, std::size_t n_max,
                                       const CylinderCaps& caps = {});

}  // namespace knead
