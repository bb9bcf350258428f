#include "knead/semiconj.hpp"

#include "knead/kneading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace knead {

template <class T>
TruncatedSeries<T> generating(const WeightedSystem<T>& sys, const Germ<T>& x, std::size_t N) {
  const auto orbit = germ_orbit(sys, x, N);
  TruncatedSeries<T> out(N);
  for (std::size_t n = 0; n <= N; ++n) out[n] = orbit[n].g;
  return out;
}

template <class T>
TruncatedSeries<T> generating_point(const WeightedSystem<T>& sys, const T& x, std::size_t N) {
  if (!(sys.a() < x && x < sys.b())) throw Error("generating_point needs an interior point");
  return (generating(sys, Germ<T>{x, -1}, N) + generating(sys, Germ<T>{x, 1}, N)) * half<T>();
}

template <class T>
std::vector<TruncatedSeries<T>> lap_weights(const WeightedSystem<T>& sys, std::size_t N) {
  std::vector<TruncatedSeries<T>> rhs(sys.ell() + 1, TruncatedSeries<T>(N));
  for (std::size_t j = 1; j <= sys.ell(); ++j) rhs[j] = generating_point(sys, sys.cut(j), N);
  return solve(kneading_matrix(sys, N), std::move(rhs));
}

namespace {

template <class T>
TruncatedSeries<T> lap_cylinders(const WeightedSystem<T>& sys, const GermInterval<T>& J,
                                 std::size_t N, const CylinderCaps& caps) {
  if (N + 1 > caps.max_depth) {
    throw CapExceeded("lap needs cylinders of depth " + std::to_string(N + 1) +
                      " beyond the depth cap " + std::to_string(caps.max_depth));
  }
  TruncatedSeries<T> out(N);
  for_each_cylinder<T>(
      sys, N + 1,
      [&](const Cylinder<T>& c) {
        const int hits = int(J.contains(c.u)) + int(J.contains(c.v));
        if (hits == 0) return;
        // g^n on the boundary germs of an (n+1)-cylinder is g^n of its parent word.
        T g(1);
        for (std::size_t m = 0; m + 1 < c.depth(); ++m) g *= sys.weight(c.word[m]);
        out[c.depth() - 1] += g * T(hits) * half<T>();
      },
      caps);
  return out;
}

template <class T>
TruncatedSeries<T> lap_gamma(const WeightedSystem<T>& sys, const GermInterval<T>& J,
                             std::size_t N) {
  TruncatedSeries<T> out(N);
  for (std::size_t j = 1; j <= sys.ell(); ++j) {
    out += gamma(sys, sys.cut(j), J, N) * generating_point(sys, sys.cut(j), N);
  }
  return out;
}

template <class T>
TruncatedSeries<T> lap_kneading(const WeightedSystem<T>& sys, const GermInterval<T>& J,
                                std::size_t N) {
  const auto w = lap_weights(sys, N);
  const auto hi = theta_all(sys, J.upper(), N);
  const auto lo = theta_all(sys, J.lower(), N);
  TruncatedSeries<T> out(N);
  for (std::size_t k = 0; k <= sys.ell(); ++k) out += (hi[k] - lo[k]) * w[k];
  return out;
}

}  // namespace

template <class T>
LapSeries<T> lap(const WeightedSystem<T>& sys, const GermInterval<T>& J, std::size_t N,
                 LapRoute route, const CylinderCaps& caps) {
  if (J.empty()) return {J, TruncatedSeries<T>(N)};
  switch (route) {
    case LapRoute::cylinders:
      return {J, lap_cylinders(sys, J, N, caps)};
    case LapRoute::gamma:
      return {J, lap_gamma(sys, J, N)};
    case LapRoute::kneading:
      break;
  }
  return {J, lap_kneading(sys, J, N)};
}

template <class T>
SemiConjugacy<T>::SemiConjugacy(const WeightedSystem<T>& sys, double t, const PhiOptions& opt)
    : sys_(&sys), t_(t), N_(opt.N) {
  for (std::size_t i = 0; i < sys.branch_count(); ++i) {
    if (!(sys.weight(i) > T(0))) {
      throw PreconditionError("phi_t needs every weight positive; branch " + std::to_string(i) +
                              " has weight " + ScalarTraits<T>::str(sys.weight(i)));
    }
  }
  if (opt.t_star) {
    t_star_ = *opt.t_star;
  } else {
    const auto pr = pressure(sys, opt.pressure);
    t_star_ = pr.found ? pr.t_star : pr.t_max;
  }
  if (!(t > 0 && t < t_star_)) {
    throw Error("t out of range: need 0 < t < " + std::to_string(t_star_) + ", got " +
                std::to_string(t));
  }

  const auto w = lap_weights(sys, N_);
  partial_.assign(sys.ell() + 1, std::vector<double>(N_ + 1));
  for (std::size_t k = 0; k <= sys.ell(); ++k) {
    double acc = 0, tn = 1;
    for (std::size_t n = 0; n <= N_; ++n, tn *= t) {
      acc += to_double(w[k][n]) * tn;
      partial_[k][n] = acc;
    }
  }
  h_a_ = h(Germ<T>{sys.a(), 1});
  total_ = h(Germ<T>{sys.b(), -1}) - h_a_;

  // Geometric tail of L(]a,b[) from the decay over its last ten coefficients.
  const auto whole = lap_kneading(sys, GermInterval<T>::open(sys.a(), sys.b()), N_);
  const std::size_t span = std::min<std::size_t>(10, N_);
  const double top = std::fabs(to_double(whole[N_]));
  const double base = std::fabs(to_double(whole[N_ - span]));
  if (top == 0) {
    tail_ = 0;
  } else {
    const double r = base > 0 ? t * std::pow(top / base, 1.0 / double(span))
                              : std::numeric_limits<double>::infinity();
    tail_ = r < 1 ? top * std::pow(t, double(N_)) * r / (1 - r) / std::fabs(total_)
                  : std::numeric_limits<double>::infinity();
  }
  if (!(tail_ <= opt.tail_tol)) {
    throw Error("phi_t tail bound " + std::to_string(tail_) + " exceeds " +
                std::to_string(opt.tail_tol) + ", increase N");
  }
}

// Evaluates the truncated product theta_k * w_k at t without forming it:
// sum_m theta_k[m] t^m (sum_{n <= N - m} w_k[n] t^n).
template <class T>
double SemiConjugacy<T>::h(const Germ<T>& x) const {
  const auto orbit = germ_orbit(*sys_, x, N_);
  double acc = 0;
  for (std::size_t k = 0; k <= sys_->ell(); ++k) {
    double tm = 1;
    for (std::size_t m = 0; m <= N_; ++m, tm *= t_) {
      const double th = to_double(orbit[m].sg * sigma(orbit[m].germ, sys_->cut(k)));
      acc += th * tm * partial_[k][N_ - m];
    }
  }
  return acc;
}

template <class T>
double SemiConjugacy<T>::operator()(const Germ<T>& x) const {
  if (x == Germ<T>{sys_->a(), 1}) return 0;
  if (x == Germ<T>{sys_->b(), -1}) return 1;
  return (h(x) - h_a_) / total_;
}

template <class T>
double SemiConjugacy<T>::lap(const GermInterval<T>& J) const {
  if (J.empty()) return 0;
  return h(J.upper()) - h(J.lower());
}

template <class T>
double phi_t(const WeightedSystem<T>& sys, double t, const Germ<T>& x, const PhiOptions& opt) {
  return SemiConjugacy<T>(sys, t, opt)(x);
}

double ModelMap::apply(std::size_t i, double y) const {
  for (const auto& br : branches) {
    if (br.i == i) return br.slope * y + br.intercept;
  }
  throw Error("branch " + std::to_string(i) + " is not part of the model");
}

template <class T>
ModelMap model_map(const SemiConjugacy<T>& phi) {
  const auto& sys = phi.system();
  ModelMap out;
  out.t = phi.t();
  for (std::size_t i = 0; i < sys.branch_count(); ++i) out.weights.push_back(to_double(sys.weight(i)));
  for (std::size_t i = 0; i < sys.branch_count(); ++i) {
    const Germ<T> lo{sys.cut(i), 1};
    const Germ<T> hi{sys.cut(i + 1), -1};
    ModelBranch br;
    br.i = i;
    br.lo = phi(lo);
    br.hi = phi(hi);
    br.slope = sys.sign(i) / (phi.t() * out.weights[i]);
    br.image_lo = phi(sys.step(lo));
    br.image_hi = phi(sys.step(hi));
    br.intercept = br.image_lo - br.slope * br.lo;
    br.degenerate = !(br.hi - br.lo > 1e-14);
    if (!br.degenerate) {
      const double chord = (br.image_hi - br.image_lo) / (br.hi - br.lo);
      br.chord_slope_error = std::fabs(chord - br.slope) / std::fabs(br.slope);
    }
    out.branches.push_back(br);
  }
  for (std::size_t i = 0; i + 1 < out.branches.size(); ++i) {
    if (!(out.branches[i].hi < out.branches[i + 1].lo)) out.disjoint = false;
  }
  return out;
}

template <class T>
ModelMap model_map(const WeightedSystem<T>& sys, double t, const PhiOptions& opt) {
  return model_map(SemiConjugacy<T>(sys, t, opt));
}

template <class T>
double semiconj_residual(const SemiConjugacy<T>& phi, const ModelMap& model,
                         const std::vector<Germ<T>>& samples) {
  const auto& sys = phi.system();
  double worst = 0;
  for (const auto& x : samples) {
    const std::size_t i = sys.branch_of(x);
    worst = std::max(worst, std::fabs(phi(sys.step(x)) - model.apply(i, phi(x))));
  }
  return worst;
}

template <class T>
std::vector<Germ<T>> random_germs(const WeightedSystem<T>& sys, std::size_t count,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a = to_double(sys.a()), b = to_double(sys.b());
  std::vector<Germ<T>> out;
  out.reserve(count);
  while (out.size() < count) {
    const T x = ScalarTraits<T>::from_double(a + (b - a) * unit(rng));
    if (!(sys.a() < x && x < sys.b())) continue;
    out.push_back(Germ<T>{x, (rng() & 1) ? 1 : -1});
  }
  std::sort(out.begin(), out.end());
  return out;
}

#define KNEAD_INSTANTIATE(T)                                                                   \
  template TruncatedSeries<T> generating(const WeightedSystem<T>&, const Germ<T>&,             \
                                         std::size_t);                                         \
  template TruncatedSeries<T> generating_point(const WeightedSystem<T>&, const T&,             \
                                               std::size_t);                                   \
  template std::vector<TruncatedSeries<T>> lap_weights(const WeightedSystem<T>&, std::size_t); \
  template LapSeries<T> lap(const WeightedSystem<T>&, const GermInterval<T>&, std::size_t,     \
                            LapRoute, const CylinderCaps&);                                    \
  template class SemiConjugacy<T>;                                                             \
  template double phi_t(const WeightedSystem<T>&, double, const Germ<T>&, const PhiOptions&);  \
  template ModelMap model_map(const SemiConjugacy<T>&);                                        \
  template ModelMap model_map(const WeightedSystem<T>&, double, const PhiOptions&);            \
  template double semiconj_residual(const SemiConjugacy<T>&, const ModelMap&,                  \
                                    const std::vector<Germ<T>>&);                              \
  template std::vector<Germ<T>> random_germs(const WeightedSystem<T>&, std::size_t,            \
                                             std::uint64_t);

KNEAD_INSTANTIATE(double)
KNEAD_INSTANTIATE(Rational)
#undef KNEAD_INSTANTIATE

}  // namespace knead
