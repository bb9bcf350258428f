#include "knead/cylinders.hpp"

#include "knead/kneading.hpp"

#include <algorithm>
#include <cmath>

namespace knead {

namespace {

template <class T>
class Enumerator {
 public:
  Enumerator(const WeightedSystem<T>& sys, std::size_t n, const CylinderCaps& caps,
             const std::function<void(const Cylinder<T>&)>& visit)
      : sys_(sys), n_(n), caps_(caps), visit_(visit), counts_(n + 1, 0) {
    affine_ = true;
    for (std::size_t i = 0; i < sys.branch_count(); ++i) affine_ = affine_ && sys.branch(i).affine;
  }

  void run() {
    if (n_ > caps_.max_depth) {
      throw CapExceeded("cylinder depth " + std::to_string(n_) + " exceeds the cap of " +
                        std::to_string(caps_.max_depth));
    }
    if (n_ == 0) return;
    Node root{sys_.a(), sys_.b(), sys_.a(), sys_.b(), T(1), T(0)};
    cur_.sn = 1;
    cur_.gn = T(1);
    descend(root);
  }

 private:
  // Current cylinder ]u,v[ with f^k(]u,v[) = ]p,q[ and, for affine systems,
  // f^k(x) = A x + B on it.
  struct Node {
    T u, v, p, q, A, B;
  };

  bool near(const T& x, const T& y) const {
    if constexpr (ScalarTraits<T>::exact) {
      return x == y;
    } else {
      return std::fabs(x - y) <= sys_.snap();
    }
  }

  T clamp(T y) const {
    if (y < sys_.a()) return sys_.a();
    if (y > sys_.b()) return sys_.b();
    return y;
  }

  T pull(const Node& node, const T& y) const {
    if (affine_) return (y - node.B) / node.A;
    T x = y;
    for (std::size_t r = cur_.word.size(); r-- > 0;) {
      auto z = sys_.preimage(cur_.word[r], x);
      if (!z) throw Error("cylinder pullback left its branch");
      x = std::move(*z);
    }
    return x;
  }

  void descend(const Node& node) {
    const std::size_t depth = cur_.word.size();
    const int s = cur_.sn;
    const T g = cur_.gn;
    for (std::size_t j = 0; j < sys_.branch_count(); ++j) {
      const T& cj = sys_.cut(j);
      const T& cj1 = sys_.cut(j + 1);
      if (!(node.q > cj) || near(node.q, cj) || !(node.p < cj1) || near(node.p, cj1)) continue;
      const bool keep_lo = !(node.p < cj) && !near(node.p, cj);
      const bool keep_hi = !(node.q > cj1) && !near(node.q, cj1);
      const T lo = keep_lo ? node.p : cj;
      const T hi = keep_hi ? node.q : cj1;
      if (!(lo < hi)) continue;

      if (++counts_[depth + 1] > caps_.max_cylinders) {
        throw CapExceeded("more than " + std::to_string(caps_.max_cylinders) +
                          " cylinders at depth " + std::to_string(depth + 1));
      }

      Node child;
      if (depth == 0) {
        child.u = lo;
        child.v = hi;
      } else if (s > 0) {
        child.u = keep_lo ? node.u : pull(node, lo);
        child.v = keep_hi ? node.v : pull(node, hi);
      } else {
        child.u = keep_hi ? node.u : pull(node, hi);
        child.v = keep_lo ? node.v : pull(node, lo);
      }
      const T ylo = clamp(sys_.apply(j, lo));
      const T yhi = clamp(sys_.apply(j, hi));
      const int sj = sys_.sign(j);
      child.p = sj > 0 ? ylo : yhi;
      child.q = sj > 0 ? yhi : ylo;
      if (affine_) {
        const auto& br = sys_.branch(j);
        child.A = depth == 0 ? br.slope : br.slope * node.A;
        child.B = depth == 0 ? br.intercept : br.slope * node.B + br.intercept;
      }

      cur_.word.push_back(static_cast<std::uint8_t>(j));
      cur_.sn = s * sj;
      cur_.gn = g * sys_.weight(j);
      cur_.u = child.u;
      cur_.v = child.v;
      if (cur_.sn > 0) {
        cur_.image_u = {child.p, 1};
        cur_.image_v = {child.q, -1};
      } else {
        cur_.image_u = {child.q, -1};
        cur_.image_v = {child.p, 1};
      }
      visit_(cur_);
      if (depth + 1 < n_) descend(child);
      cur_.word.pop_back();
      cur_.sn = s;
      cur_.gn = g;
    }
  }

  const WeightedSystem<T>& sys_;
  std::size_t n_;
  CylinderCaps caps_;
  const std::function<void(const Cylinder<T>&)>& visit_;
  std::vector<std::uint64_t> counts_;
  bool affine_;
  Cylinder<T> cur_;
};

}  // namespace

template <class T>
void for_each_cylinder(const WeightedSystem<T>& sys, std::size_t n,
                       const std::function<void(const Cylinder<T>&)>& visit,
                       const CylinderCaps& caps) {
  Enumerator<T>(sys, n, caps, visit).run();
}

template <class T>
std::vector<Cylinder<T>> enumerate_cylinders(const WeightedSystem<T>& sys, std::size_t n,
                                             const CylinderCaps& caps) {
  std::vector<Cylinder<T>> out;
  for_each_cylinder<T>(
      sys, n,
      [&](const Cylinder<T>& c) {
        if (c.depth() == n) out.push_back(c);
      },
      caps);
  std::sort(out.begin(), out.end(),
            [](const Cylinder<T>& l, const Cylinder<T>& r) { return l.u < r.u; });
  return out;
}

template <class T>
std::string word_string(const Cylinder<T>& c) {
  std::string s;
  for (auto i : c.word) {
    if (!s.empty() && i >= 10) s += '.';
    s += std::to_string(i);
  }
  return s;
}

template <class T>
std::vector<Norms<T>> norms(const WeightedSystem<T>& sys, std::size_t n_max,
                            const CylinderCaps& caps) {
  std::vector<Norms<T>> out(n_max);
  for_each_cylinder<T>(
      sys, n_max,
      [&](const Cylinder<T>& c) {
        auto& nm = out[c.depth() - 1];
        const T w = ScalarTraits<T>::abs(c.gn);
        nm.l1 += w;
        if (w > nm.linf) nm.linf = w;
        ++nm.count;
      },
      caps);
  return out;
}

template <class T>
std::vector<RhoEstimate> rho_estimates(const WeightedSystem<T>& sys, std::size_t n_max,
                                       const CylinderCaps& caps) {
  std::vector<RhoEstimate> out;
  const auto nm = norms(sys, n_max, caps);
  for (std::size_t n = 1; n <= nm.size(); ++n) {
    const double inv = 1.0 / static_cast<double>(n);
    out.push_back({n, std::pow(to_double(nm[n - 1].l1), inv),
                   std::pow(to_double(nm[n - 1].linf), inv)});
  }
  return out;
}

template <class T>
int pi_weight(const WeightedSystem<T>&, const Cylinder<T>& c) {
  // -sum over {u+, v-} of sigma(f^n x, x) eps(f^n x), in units of 1/2.
  const int at_u = (compare(c.image_u, c.u) > 0 ? 1 : -1) * c.image_u.dir;
  const int at_v = (compare(c.image_v, c.v) > 0 ? 1 : -1) * c.image_v.dir;
  return -(at_u + at_v) / 2;
}

template <class T>
T omega(const WeightedSystem<T>& sys, const Cylinder<T>& c) {
  return c.gn * T(pi_weight(sys, c));
}

template <class T>
std::vector<T> fixed_point_counts(const WeightedSystem<T>& sys, std::size_t n_max,
                                  const CylinderCaps& caps) {
  std::vector<T> out(n_max, T(0));
  for_each_cylinder<T>(
      sys, n_max,
      [&](const Cylinder<T>& c) {
        const int pi = pi_weight(sys, c);
        if (pi != 0) out[c.depth() - 1] += c.gn * T(pi);
      },
      caps);
  return out;
}

template <class T>
TruncatedSeries<T> zeta_series(const std::vector<T>& counts, std::size_t N) {
  const std::size_t deg = std::min(N, counts.size());
  TruncatedSeries<T> s(deg);
  for (std::size_t n = 1; n <= deg; ++n) s[n] = counts[n - 1] / T(static_cast<long>(n));
  return exp(s);
}

template <class T>
TruncatedSeries<T> nf_series(const std::vector<T>& counts, std::size_t N) {
  const std::size_t deg = std::min(N, counts.size());
  TruncatedSeries<T> s(deg == 0 ? 0 : deg - 1);
  for (std::size_t n = 1; n <= deg; ++n) s[n - 1] = counts[n - 1];
  return s;
}

template <class T>
ZetaCheck<T> zeta_residual(const WeightedSystem<T>& sys, std::size_t N,
                           const CylinderCaps& caps) {
  ZetaCheck<T> out;
  out.counts = fixed_point_counts(sys, N, caps);
  out.zeta = zeta_series(out.counts, N);
  out.det = kneading_det(sys, N);
  out.product_residual = out.zeta * out.det - TruncatedSeries<T>::constant(T(1), N);
  const auto d = out.det.truncated(N - 1);
  out.log_residual = nf_series(out.counts, N) + derivative(out.det) * inverse(d);
  return out;
}

template <class T>
ExpansivenessProbe expansiveness_probe(const WeightedSystem<T>& sys, std::size_t n_max,
                                       const CylinderCaps& caps) {
  ExpansivenessProbe out;
  out.sup_diam.assign(n_max, 0.0);
  for_each_cylinder<T>(
      sys, n_max,
      [&](const Cylinder<T>& c) {
        double& d = out.sup_diam[c.depth() - 1];
        d = std::max(d, to_double(T(c.v - c.u)));
      },
      caps);
  // Heuristic: the tail shrinks by a definite factor over the last few levels.
  if (n_max >= 4) {
    const double last = out.sup_diam.back();
    const double earlier = out.sup_diam[n_max - 4];
    out.contracting = last < 0.9 * earlier;
  }
  return out;
}

#define KNEAD_INSTANTIATE(T)                                                                    \
  template void for_each_cylinder(const WeightedSystem<T>&, std::size_t,                        \
                                  const std::function<void(const Cylinder<T>&)>&,               \
                                  const CylinderCaps&);                                         \
  template std::vector<Cylinder<T>> enumerate_cylinders(const WeightedSystem<T>&, std::size_t,  \
                                                        const CylinderCaps&);                   \
  template std::string word_string(const Cylinder<T>&);                                         \
  template std::vector<Norms<T>> norms(const WeightedSystem<T>&, std::size_t,                   \
                                       const CylinderCaps&);                                    \
  template std::vector<RhoEstimate> rho_estimates(const WeightedSystem<T>&, std::size_t,        \
                                                  const CylinderCaps&);                         \
  template int pi_weight(const WeightedSystem<T>&, const Cylinder<T>&);                         \
  template T omega(const WeightedSystem<T>&, const Cylinder<T>&);                               \
  template std::vector<T> fixed_point_counts(const WeightedSystem<T>&, std::size_t,             \
                                             const CylinderCaps&);                              \
  template TruncatedSeries<T> zeta_series(const std::vector<T>&, std::size_t);                  \
  template TruncatedSeries<T> nf_series(const std::vector<T>&, std::size_t);                    \
  template ZetaCheck<T> zeta_residual(const WeightedSystem<T>&, std::size_t,                    \
                                      const CylinderCaps&);                                     \
  template ExpansivenessProbe expansiveness_probe(const WeightedSystem<T>&, std::size_t,        \
                                                  const CylinderCaps&);

KNEAD_INSTANTIATE(double)
KNEAD_INSTANTIATE(Rational)
#undef KNEAD_INSTANTIATE

}  // namespace knead
