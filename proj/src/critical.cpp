#include "knead/analytic.hpp"
#include "knead/kneading.hpp"
#include "knead/semiconj.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace knead {

template <class T>
ScalarLap<T>::ScalarLap(const WeightedSystem<T>& sys, double t) : sys_(&sys), t_(t) {
  const std::size_t d = sys.ell() + 1;
  const Eigen::MatrixXd r = kneading_matrix_at(sys, t);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
  for (std::size_t j = 1; j < d; ++j) {
    g(j) = 0.5 * (generating_at(sys, Germ<T>{sys.cut(j), -1}, t) +
                  generating_at(sys, Germ<T>{sys.cut(j), 1}, t));
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(r);
  rcond_ = lu.rcond();
  w_ = lu.solve(g);
  h_a_ = h(Germ<T>{sys.a(), 1});
  h_b_ = h(Germ<T>{sys.b(), -1});
}

template <class T>
double ScalarLap<T>::h(const Germ<T>& x) const {
  const auto th = theta_at(*sys_, x, t_);
  return Eigen::Map<const Eigen::VectorXd>(th.data(), Eigen::Index(th.size())).dot(w_);
}

template <class T>
double ScalarLap<T>::h_point(const T& x) const {
  if (x == sys_->a()) return h_a_;
  if (x == sys_->b()) return h_b_;
  return 0.5 * (h(Germ<T>{x, -1}) + h(Germ<T>{x, 1}));
}

template <class T>
CrossCheck h_crosscheck(const WeightedSystem<T>& sys, double t, const Germ<T>& x) {
  CrossCheck out;
  const ScalarLap<T> lap(sys, t);
  out.rcond = lap.rcond();
  if (out.rcond < 1e-10) {
    std::ostringstream msg;
    msg << "R(t) is ill-conditioned at t = " << t << " (reciprocal condition " << out.rcond
        << ")";
    out.warnings.push_back(msg.str());
  }
  if (sys.ell() == 1) {
    const double lo = theta_at(sys, Germ<T>{sys.a(), 1}, t)[1];
    const double hi = theta_at(sys, Germ<T>{sys.b(), -1}, t)[1];
    out.value = (theta_at(sys, x, t)[1] - lo) / (hi - lo);
  } else {
    out.value = (lap.h(x) - lap.h_a()) / lap.total();
  }
  return out;
}

template <class T>
LambdaMeasure<T>::LambdaMeasure(const WeightedSystem<T>& sys, const LambdaOptions& opt)
    : sys_(&sys), opt_(opt) {
  for (std::size_t i = 0; i < sys.branch_count(); ++i) {
    if (sys.weight(i) < T(0)) {
      throw PreconditionError("Lambda needs nonnegative weights; branch " + std::to_string(i) +
                              " is negative");
    }
  }
  const auto pr = pressure(sys, opt.pressure);
  if (!pr.found) throw PreconditionError("no zero of the kneading determinant below t_max");
  if (pr.rho1_hat <= pr.rhoinf_hat) {
    throw PreconditionError("rho_1 > rho_inf is not visibly satisfied");
  }
  *this = LambdaMeasure(sys, pr.t_star, opt);
}

template <class T>
LambdaMeasure<T>::LambdaMeasure(const WeightedSystem<T>& sys, double t_star,
                                const LambdaOptions& opt)
    : sys_(&sys), t_star_(t_star), opt_(opt) {
  if (opt.deltas.size() < 2) throw Error("Lambda needs at least two offsets");
  for (double d : opt.deltas) laps_.emplace_back(sys, (1 - d) * t_star);
}

// Polynomial extrapolation to delta = 0 through every offset, compared with
// the line through the two smallest offsets.
template <class T>
LambdaValue LambdaMeasure<T>::extrapolate(std::vector<double> ratios) const {
  const auto& d = opt_.deltas;
  const std::size_t n = d.size();
  double full = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) w *= d[j] / (d[j] - d[i]);
    }
    full += w * ratios[i];
  }
  const double d1 = d[n - 2], d2 = d[n - 1];
  const double line = ratios[n - 1] - d2 * (ratios[n - 2] - ratios[n - 1]) / (d1 - d2);
  LambdaValue out;
  out.value = full;
  out.spread = std::fabs(full - line);
  out.ratios = std::move(ratios);
  if (!std::isfinite(full) || !(out.spread <= opt_.agreement_tol)) {
    std::ostringstream msg;
    msg << "Λ unstable, increase N (spread " << out.spread << ")";
    throw Error(msg.str());
  }
  return out;
}

template <class T>
LambdaValue LambdaMeasure<T>::operator()(const Germ<T>& lo, const Germ<T>& hi) const {
  std::vector<double> r;
  for (const auto& lap : laps_) r.push_back((lap.h(hi) - lap.h(lo)) / lap.total());
  return extrapolate(std::move(r));
}

template <class T>
LambdaValue LambdaMeasure<T>::operator()(const GermInterval<T>& J) const {
  if (J.empty()) return {};
  return (*this)(J.lower(), J.upper());
}

template <class T>
LambdaValue LambdaMeasure<T>::phi(const T& x) const {
  std::vector<double> r;
  for (const auto& lap : laps_) r.push_back((lap.h_point(x) - lap.h_a()) / lap.total());
  return extrapolate(std::move(r));
}

template <class T>
double LambdaMeasure<T>::point_mass(const T& x) const {
  return (*this)(Germ<T>{x, -1}, Germ<T>{x, 1}).value;
}

template <class T>
LambdaValue lambda(const WeightedSystem<T>& sys, const GermInterval<T>& J,
                   const LambdaOptions& opt) {
  return LambdaMeasure<T>(sys, opt)(J);
}

template <class T>
ModelMap critical_model(const LambdaMeasure<T>& lam, const WeightedSystem<T>& sys,
                        const CriticalOptions& opt) {
  const std::size_t l = sys.ell();
  ModelMap out;
  out.critical = true;
  out.rho1 = lam.rho1();
  out.t = lam.t_star();
  for (std::size_t i = 0; i <= l; ++i) out.weights.push_back(to_double(sys.weight(i)));
  out.c_tilde.assign(l + 2, 0.0);
  out.c_tilde[l + 1] = 1;
  for (std::size_t k = 1; k <= l; ++k) out.c_tilde[k] = lam.phi(sys.cut(k)).value;

  for (std::size_t i = 0; i <= l; ++i) {
    if (out.c_tilde[i + 1] - out.c_tilde[i] > opt.collapse_tol) out.kept.push_back(i);
  }
  if (out.kept.empty()) throw Error("every interval collapses under phi");
  // Collapsed intervals become single points shared by their neighbours.
  for (std::size_t i = 0; i <= l; ++i) {
    if (!std::binary_search(out.kept.begin(), out.kept.end(), i)) {
      out.c_tilde[i + 1] = out.c_tilde[i];
    }
  }
  for (std::size_t k = out.kept.back() + 1; k <= l + 1; ++k) out.c_tilde[k] = 1;

  const auto points = sys.points();
  auto image = [&](const Germ<T>& y) {
    const auto it = std::find(points.begin(), points.end(), y.base);
    if (it != points.end()) return out.c_tilde[std::size_t(it - points.begin())];
    return std::clamp(lam.phi(y.base).value, 0.0, 1.0);
  };
  for (std::size_t i : out.kept) {
    ModelBranch br;
    br.i = i;
    br.lo = out.c_tilde[i];
    br.hi = out.c_tilde[i + 1];
    br.slope = sys.sign(i) * out.rho1 / out.weights[i];
    br.image_lo = image(sys.step(Germ<T>{sys.cut(i), 1}));
    br.image_hi = image(sys.step(Germ<T>{sys.cut(i + 1), -1}));
    br.intercept = br.image_lo - br.slope * br.lo;
    const double chord = (br.image_hi - br.image_lo) / (br.hi - br.lo);
    br.chord_slope_error = std::fabs(chord - br.slope) / std::fabs(br.slope);
    out.branches.push_back(br);
  }
  for (std::size_t i = 0; i + 1 < out.branches.size(); ++i) {
    if (out.branches[i].hi > out.branches[i + 1].lo) out.disjoint = false;
  }
  out.continuous = sys.continuous();
  out.label = out.continuous ? "interval endomorphism" : "partially defined";
  return out;
}

template <class T>
ModelMap critical_model(const WeightedSystem<T>& sys, const CriticalOptions& opt) {
  return critical_model(LambdaMeasure<T>(sys, opt.lambda), sys, opt);
}

WeightedSystem<double> ModelMap::as_system() const {
  if (!critical) throw Error("only the critical model covers an interval");
  if (branches.size() < 2) throw Error("the critical model keeps fewer than two intervals");
  SystemSpec<double> spec;
  spec.a = 0;
  spec.b = 1;
  for (std::size_t m = 0; m < branches.size(); ++m) {
    const auto& br = branches[m];
    if (m > 0) spec.cuts.push_back(br.lo);
    spec.branches.push_back(Branch<double>::chord(br.image_lo, br.image_hi, weights[br.i]));
  }
  return validate_system(std::move(spec));
}

template <class T>
std::vector<double> lambda_mass(const LambdaMeasure<T>& lam, const WeightedSystem<T>& sys,
                                std::size_t depth, const CylinderCaps& caps) {
  std::vector<double> mass(depth, 0.0);
  for_each_cylinder<T>(
      sys, depth,
      [&](const Cylinder<T>& c) {
        mass[c.depth() - 1] += lam(Germ<T>{c.u, 1}, Germ<T>{c.v, -1}).value;
      },
      caps);
  return mass;
}

#define KNEAD_INSTANTIATE(T)                                                                \
  template class ScalarLap<T>;                                                              \
  template CrossCheck h_crosscheck(const WeightedSystem<T>&, double, const Germ<T>&);       \
  template class LambdaMeasure<T>;                                                          \
  template LambdaValue lambda(const WeightedSystem<T>&, const GermInterval<T>&,             \
                              const LambdaOptions&);                                        \
  template ModelMap critical_model(const LambdaMeasure<T>&, const WeightedSystem<T>&,       \
                                   const CriticalOptions&);                                 \
  template ModelMap critical_model(const WeightedSystem<T>&, const CriticalOptions&);       \
  template std::vector<double> lambda_mass(const LambdaMeasure<T>&, const WeightedSystem<T>&, \
                                           std::size_t, const CylinderCaps&);

KNEAD_INSTANTIATE(double)
KNEAD_INSTANTIATE(Rational)
#undef KNEAD_INSTANTIATE

}  // namespace knead
