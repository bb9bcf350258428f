#pragma once

#include "knead/cylinders.hpp"
#include "knead/series.hpp"
#include "knead/system.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace knead {

class PreconditionError : public Error {
 public:
  using Error::Error;
};

struct PressureOptions {
  std::size_t N = 64;
  double tol = 1e-12;
  std::size_t grid = 1000;
  double margin = 0.02;       // t_max stays this far below 1 / rho_inf
  double search_bound = 1.0;
  double dip_tol = 1e-9;      // |D_N| below this without a sign change is a dip
  bool analytic_refine = true;
  bool check_stability = true;
  std::size_t rho_depth = 16;
  std::uint64_t rho_budget = 200'000;  // cylinders per level for the rho estimates
  CylinderCaps caps;
};

struct ZeroSearch {
  bool found = false;
  double t = 0;                 // refined zero
  double t_truncated = 0;       // zero of the truncated polynomial
  std::pair<double, double> bracket{0, 0};
  bool refined = false;         // analytic refinement succeeded
  std::optional<double> dip;    // possible even-order zero
  std::vector<std::string> notes;
};

struct PressureResult {
  bool found = false;
  double t_star = 0;
  double pressure = 0;
  double rho1 = 0;
  double t_truncated = 0;
  std::pair<double, double> bracket{0, 0};
  double t_max = 0;
  double rho1_hat = 0;
  double rhoinf_hat = 0;
  std::size_t rho_depth = 0;
  double stability_gap = 0;    // |t*(N) - t*(2N)| on refined values
  double truncation_gap = 0;   // same on raw truncated roots
  bool unstable = false;
  bool refined = false;
  std::optional<double> possible_even_zero;
  std::vector<std::string> warnings;
};

/// First sign change of `series` on (0, t_max], refined on `exact` when given.
ZeroSearch first_zero(const std::function<double(double)>& truncated, double t_max,
                      const PressureOptions& opt,
                      const std::function<double(double)>& exact = nullptr);

template <class T>
PressureResult pressure(const WeightedSystem<T>& sys, const PressureOptions& opt = {});

/// D_N(t) on the scan grid used by pressure().
template <class T>
std::vector<std::pair<double, double>> pressure_scan(const WeightedSystem<T>& sys,
                                                     const PressureOptions& opt, double t_max);

struct SpuriousZeroReport {
  ZeroSearch det_r;
  ZeroSearch det_b;
  bool differ = false;
};
template <class T>
SpuriousZeroReport spurious_zero_demo(const WeightedSystem<T>& sys,
                                      const PressureOptions& opt = {});

/// (1/n) log ||g^n||_1 for n = 1..n_max.
template <class T>
std::vector<double> brute_force_pressure(const WeightedSystem<T>& sys, std::size_t n_max,
                                         const CylinderCaps& caps = {});

}  // namespace knead
