#include "knead/pressure.hpp"

#include "knead/analytic.hpp"
#include "knead/kneading.hpp"

#include <cmath>

namespace knead {

namespace {

int sign_of(double v) { return (v > 0) - (v < 0); }

std::pair<double, double> bisect(const std::function<double(double)>& f, double lo, double hi,
                                 double tol) {
  int slo = sign_of(f(lo));
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int sm = sign_of(f(mid));
    if (sm == 0) return {mid, mid};
    if (sm == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

double golden_min(const std::function<double(double)>& f, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

template <class T>
void check_weights(const WeightedSystem<T>& sys) {
  bool positive = false;
  for (std::size_t i = 0; i < sys.branch_count(); ++i) {
    if (sys.weight(i) < T(0)) {
      throw PreconditionError("negative weight on branch " + std::to_string(i) +
                              ": the pressure search needs g_i >= 0");
    }
    positive = positive || sys.weight(i) > T(0);
  }
  if (!positive) throw PreconditionError("all weights are zero");
}

}  // namespace

ZeroSearch first_zero(const std::function<double(double)>& truncated, double t_max,
                      const PressureOptions& opt, const std::function<double(double)>& exact) {
  ZeroSearch out;
  double prev_t = 0;
  double prev = truncated(0);
  const double scale = std::max(1.0, std::fabs(prev));
  double before = prev;
  bool bracketed = false;
  for (std::size_t k = 1; k <= opt.grid; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(opt.grid);
    const double v = truncated(t);
    if (v == 0 || sign_of(v) != sign_of(prev)) {
      out.bracket = {prev_t, t};
      bracketed = true;
      break;
    }
    // A local minimum of |D| on the grid: look closer for a touching zero.
    if (k >= 2 && std::fabs(prev) <= std::fabs(before) && std::fabs(prev) <= std::fabs(v) &&
        std::fabs(prev) < 1e-2 * scale) {
      const double step = t_max / static_cast<double>(opt.grid);
      const double tmin = golden_min([&](double x) { return std::fabs(truncated(x)); },
                                     prev_t - step, t);
      if (std::fabs(truncated(tmin)) < opt.dip_tol * scale) {
        out.dip = tmin;
        out.notes.push_back("possible even-order zero near t = " + std::to_string(tmin));
        return out;
      }
    }
    before = prev;
    prev = v;
    prev_t = t;
  }
  if (!bracketed) {
    out.notes.push_back("no zero found <= t_max = " + std::to_string(t_max));
    return out;
  }
  out.found = true;
  const auto [lo, hi] = bisect(truncated, out.bracket.first, out.bracket.second, opt.tol);
  out.t_truncated = 0.5 * (lo + hi);
  out.t = out.t_truncated;
  out.bracket = {lo, hi};
  if (!exact) return out;

  try {
    double w = 1e-9;
    for (int it = 0; it < 20; ++it, w *= 4) {
      const double a = std::max(out.t_truncated - w, 0.5 * out.t_truncated);
      const double b = out.t_truncated + w;
      const double ea = exact(a);
      const double eb = exact(b);
      if (sign_of(ea) != sign_of(eb) || ea == 0 || eb == 0) {
        const auto [rl, rh] = bisect(exact, a, b, opt.tol);
        out.t = 0.5 * (rl + rh);
        out.bracket = {rl, rh};
        out.refined = true;
        return out;
      }
    }
    out.notes.push_back("analytic refinement found no sign change near the truncated zero");
  } catch (const Error& e) {
    out.notes.push_back(std::string("analytic refinement failed: ") + e.what());
  }
  return out;
}

template <class T>
std::vector<std::pair<double, double>> pressure_scan(const WeightedSystem<T>& sys,
                                                     const PressureOptions& opt, double t_max) {
  const auto d = kneading_det(sys, opt.N);
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k <= opt.grid; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(opt.grid);
    out.emplace_back(t, eval_double(d, t));
  }
  return out;
}

template <class T>
PressureResult pressure(const WeightedSystem<T>& sys, const PressureOptions& opt) {
  check_weights(sys);
  PressureResult res;

  CylinderCaps caps = opt.caps;
  caps.max_cylinders = std::min<std::uint64_t>(caps.max_cylinders, opt.rho_budget);
  for (std::size_t n = 1; n <= std::min(opt.rho_depth, caps.max_depth); ++n) {
    try {
      const auto nm = norms(sys, n, caps);
      const double inv = 1.0 / static_cast<double>(n);
      res.rho1_hat = std::pow(to_double(nm.back().l1), inv);
      res.rhoinf_hat = std::pow(to_double(nm.back().linf), inv);
      res.rho_depth = n;
    } catch (const CapExceeded&) {
      break;
    }
  }
  if (res.rho_depth > 0 && res.rhoinf_hat >= res.rho1_hat) {
    res.warnings.push_back("hypothesis rho_1 > rho_inf not visibly satisfied");
  }
  res.t_max = opt.search_bound;
  if (res.rhoinf_hat > 0) res.t_max = std::min(res.t_max, (1 - opt.margin) / res.rhoinf_hat);

  auto solve = [&](std::size_t N) {
    const auto d = kneading_det(sys, N);
    std::function<double(double)> exact;
    if (opt.analytic_refine) exact = [&](double t) { return kneading_det_at(sys, t); };
    return first_zero([&](double t) { return eval_double(d, t); }, res.t_max, opt, exact);
  };

  const ZeroSearch z = solve(opt.N);
  for (const auto& n : z.notes) res.warnings.push_back(n);
  res.possible_even_zero = z.dip;
  if (!z.found) return res;
  res.found = true;
  res.t_star = z.t;
  res.t_truncated = z.t_truncated;
  res.bracket = z.bracket;
  res.refined = z.refined;
  res.rho1 = 1 / z.t;
  res.pressure = -std::log(z.t);

  if (opt.check_stability) {
    const ZeroSearch z2 = solve(2 * opt.N);
    if (z2.found) {
      res.stability_gap = std::fabs(z2.t - z.t);
      res.truncation_gap = std::fabs(z2.t_truncated - z.t_truncated);
    } else {
      res.stability_gap = INFINITY;
      res.truncation_gap = INFINITY;
    }
    res.unstable = !(res.stability_gap < 10 * opt.tol);
    if (res.unstable) res.warnings.push_back("zero is not stable under doubling N");
  }
  return res;
}

template <class T>
SpuriousZeroReport spurious_zero_demo(const WeightedSystem<T>& sys, const PressureOptions& opt) {
  PressureOptions quiet = opt;
  quiet.check_stability = false;
  const PressureResult base = pressure(sys, quiet);
  const double t_max = base.t_max;
  const auto r = kneading_matrix(sys, opt.N);
  const auto dr = det(r);
  const auto db = det(r.trailing(1));
  SpuriousZeroReport out;
  std::function<double(double)> er, eb;
  if (opt.analytic_refine) {
    er = [&](double t) { return kneading_det_at(sys, t); };
    eb = [&](double t) { return reduced_det_at(sys, t); };
  }
  out.det_r = first_zero([&](double t) { return eval_double(dr, t); }, t_max, opt, er);
  out.det_b = first_zero([&](double t) { return eval_double(db, t); }, t_max, opt, eb);
  out.differ = out.det_r.found != out.det_b.found ||
               (out.det_r.found && std::fabs(out.det_r.t - out.det_b.t) > 1e3 * opt.tol);
  return out;
}

template <class T>
std::vector<double> brute_force_pressure(const WeightedSystem<T>& sys, std::size_t n_max,
                                         const CylinderCaps& caps) {
  std::vector<double> out;
  const auto nm = norms(sys, n_max, caps);
  for (std::size_t n = 1; n <= nm.size(); ++n) {
    out.push_back(std::log(to_double(nm[n - 1].l1)) / static_cast<double>(n));
  }
  return out;
}

#define KNEAD_INSTANTIATE(T)                                                                   \
  template PressureResult pressure(const WeightedSystem<T>&, const PressureOptions&);         \
  template std::vector<std::pair<double, double>> pressure_scan(                               \
      const WeightedSystem<T>&, const PressureOptions&, double);                               \
  template SpuriousZeroReport spurious_zero_demo(const WeightedSystem<T>&,                    \
                                                 const PressureOptions&);                      \
  template std::vector<double> brute_force_pressure(const WeightedSystem<T>&, std::size_t,    \
                                                    const CylinderCaps&);

KNEAD_INSTANTIATE(double)
KNEAD_INSTANTIATE(Rational)
#undef KNEAD_INSTANTIATE

}  // namespace knead
