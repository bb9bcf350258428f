#include "knead/system.hpp"

#include <algorithm>

namespace knead {

ValidationError::ValidationError(const std::string& what, std::optional<std::size_t> branch)
    : Error(branch ? what + " (branch " + std::to_string(*branch) + ")" : what), branch_(branch) {}

template <class T>
GermInterval<T>::GermInterval(Germ<T> lower, Germ<T> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)), empty_(!(lower_ < upper_)) {}

template <class T>
Branch<T> Branch<T>::linear(T slope, T intercept, T weight) {
  Branch b;
  b.slope = std::move(slope);
  b.intercept = std::move(intercept);
  b.weight = std::move(weight);
  return b;
}

template <class T>
Branch<T> Branch<T>::chord(T image_lo, T image_hi, T weight) {
  Branch b;
  b.endpoint_images = std::make_pair(std::move(image_lo), std::move(image_hi));
  b.weight = std::move(weight);
  return b;
}

template <class T>
Branch<T> Branch<T>::custom(Fn map, Fn inverse, T weight) {
  Branch b;
  b.affine = false;
  b.map = std::move(map);
  b.inverse = std::move(inverse);
  b.weight = std::move(weight);
  return b;
}

template <class T>
WeightedSystem<T>::WeightedSystem(SystemSpec<T> spec) {
  if (!(spec.a < spec.b)) throw ValidationError("zero-length interval: need a < b");
  if (spec.cuts.empty()) throw ValidationError("at least one interior cutting point is required");
  if (spec.branches.size() != spec.cuts.size() + 1) {
    throw ValidationError("expected " + std::to_string(spec.cuts.size() + 1) + " branches, got " +
                          std::to_string(spec.branches.size()));
  }

  points_.reserve(spec.cuts.size() + 2);
  points_.push_back(spec.a);
  for (auto& c : spec.cuts) points_.push_back(std::move(c));
  points_.push_back(spec.b);
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    if (points_[k] == points_[k + 1]) {
      throw ValidationError("zero-length interval at c_" + std::to_string(k), k);
    }
    if (!(points_[k] < points_[k + 1])) {
      throw ValidationError("unsorted cuts: c_" + std::to_string(k) + " >= c_" +
                                std::to_string(k + 1),
                            k);
    }
  }

  if constexpr (!ScalarTraits<T>::exact) {
    snap_ = T(spec.snap_tolerance) * (b() - a());
  }

  branches_ = std::move(spec.branches);
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    Branch<T>& br = branches_[i];
    const T& lo_x = points_[i];
    const T& hi_x = points_[i + 1];
    std::pair<T, T> img;
    if (br.endpoint_images) {
      img = *br.endpoint_images;
      if (br.affine) {
        br.slope = (img.second - img.first) / (hi_x - lo_x);
        br.intercept = img.first - br.slope * lo_x;
      }
    } else if (br.affine) {
      if (br.slope == T(0)) throw ValidationError("non-monotone branch: slope is zero", i);
      img = {br.slope * lo_x + br.intercept, br.slope * hi_x + br.intercept};
    } else {
      if (!br.map) throw ValidationError("custom branch without a map", i);
      img = {br.map(lo_x), br.map(hi_x)};
    }
    const int s = sgn(T(img.second - img.first));
    if (s == 0) throw ValidationError("non-monotone branch: constant on its interval", i);
    if (br.affine && sgn(br.slope) != s) {
      throw ValidationError("non-monotone branch: slope sign disagrees with endpoint images", i);
    }
    for (T* y : {&img.first, &img.second}) {
      if (*y < a()) {
        if (a() - *y > snap_) throw ValidationError("image escapes [a,b]", i);
        *y = a();
      }
      if (*y > b()) {
        if (*y - b() > snap_) throw ValidationError("image escapes [a,b]", i);
        *y = b();
      }
    }
    signs_.push_back(s);
    images_.push_back(std::move(img));
  }
}

template <class T>
bool WeightedSystem<T>::continuous() const {
  for (std::size_t k = 1; k <= ell(); ++k) {
    if (image_hi(k - 1) != image_lo(k)) return false;
  }
  return true;
}

template <class T>
bool WeightedSystem<T>::is_germ(const Germ<T>& g) const {
  if (g.dir != 1 && g.dir != -1) return false;
  if (g.base < a() || g.base > b()) return false;
  if (g.base == a() && g.dir != 1) return false;
  if (g.base == b() && g.dir != -1) return false;
  return true;
}

template <class T>
std::size_t WeightedSystem<T>::branch_of(const Germ<T>& g) const {
  if (!is_germ(g)) throw Error("not a germ of I^");
  const auto it = std::upper_bound(points_.begin(), points_.end(), g.base);
  std::size_t idx = static_cast<std::size_t>(it - points_.begin()) - 1;
  if (points_[idx] == g.base && g.dir < 0) --idx;
  return idx;
}

template <class T>
T WeightedSystem<T>::apply(std::size_t i, const T& x) const {
  if (x == points_[i]) return images_[i].first;
  if (x == points_[i + 1]) return images_[i].second;
  const Branch<T>& br = branches_[i];
  if (br.affine) return br.slope * x + br.intercept;
  return br.map(x);
}

template <class T>
std::optional<T> WeightedSystem<T>::preimage(std::size_t i, const T& y) const {
  const auto& [ylo, yhi] = images_[i];
  const bool inside = signs_[i] > 0 ? (ylo < y && y < yhi) : (yhi < y && y < ylo);
  if (!inside) return std::nullopt;
  const T& xlo = points_[i];
  const T& xhi = points_[i + 1];
  const Branch<T>& br = branches_[i];
  T z;
  if (br.affine) {
    z = xlo + (y - ylo) * (xhi - xlo) / (yhi - ylo);
  } else if (br.inverse) {
    z = br.inverse(y);
  } else {
    T lo = xlo, hi = xhi;
    const T tol = snap_;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      T mid = (lo + hi) / T(2);
      const T v = br.map(mid);
      if ((v < y) == (signs_[i] > 0)) {
        lo = std::move(mid);
      } else {
        hi = std::move(mid);
      }
    }
    z = (lo + hi) / T(2);
  }
  if (!(xlo < z && z < xhi)) return std::nullopt;
  return z;
}

template <class T>
T WeightedSystem<T>::checked_image(const T& y) const {
  if (y < a()) {
    if (a() - y > snap_) throw Error("orbit left [a,b]");
    return a();
  }
  if (y > b()) {
    if (y - b() > snap_) throw Error("orbit left [a,b]");
    return b();
  }
  if constexpr (!ScalarTraits<T>::exact) {
    const auto it = std::lower_bound(points_.begin(), points_.end(), y);
    auto near = [&](const T& c) { return c != y && ScalarTraits<T>::abs(c - y) <= snap_; };
    if ((it != points_.end() && near(*it)) || (it != points_.begin() && near(*(it - 1)))) {
      throw GermAmbiguity("germ ambiguity: orbit point " + ScalarTraits<T>::str(y) +
                          " is within the snap tolerance of a cutting point");
    }
  }
  return y;
}

template <class T>
Germ<T> WeightedSystem<T>::step(const Germ<T>& g) const {
  const std::size_t i = branch_of(g);
  Germ<T> out{checked_image(apply(i, g.base)), signs_[i] * g.dir};
  if ((out.base == a() && out.dir != 1) || (out.base == b() && out.dir != -1)) {
    throw Error("forward invariance violated at branch " + std::to_string(i));
  }
  return out;
}

template <class T>
GermOrbit<T>::GermOrbit(const WeightedSystem<T>& sys, Germ<T> start) : sys_(&sys) {
  if (!sys.is_germ(start)) throw Error("orbit start is not a germ of I^");
  seen_.emplace(start, 0);
  germs_.push_back(std::move(start));
}

template <class T>
void GermOrbit<T>::extend() {
  Germ<T> next = sys_->step(germs_.back());
  if (const auto it = seen_.find(next); it != seen_.end()) {
    cycle_ = std::make_pair(it->second, germs_.size() - it->second);
    return;
  }
  seen_.emplace(next, germs_.size());
  germs_.push_back(std::move(next));
}

template <class T>
const Germ<T>& GermOrbit<T>::at(std::size_t m) {
  while (!cycle_ && germs_.size() <= m) extend();
  if (m < germs_.size()) return germs_[m];
  const auto [start, len] = *cycle_;
  return germs_[start + (m - start) % len];
}

template <class T>
bool GermOrbit<T>::detect_cycle(std::size_t limit) {
  while (!cycle_ && germs_.size() < limit) extend();
  return cycle_.has_value();
}

template <class T>
std::vector<OrbitPoint<T>> germ_orbit(const WeightedSystem<T>& sys, const Germ<T>& start,
                                      std::size_t n) {
  GermOrbit<T> orbit(sys, start);
  std::vector<OrbitPoint<T>> out;
  out.reserve(n + 1);
  out.push_back({orbit.at(0), T(1), 1, T(1)});
  for (std::size_t m = 1; m <= n; ++m) {
    const OrbitPoint<T>& prev = out.back();
    const std::size_t i = sys.branch_of(prev.germ);
    const T g = prev.g * sys.weight(i);
    const int s = prev.s * sys.sign(i);
    out.push_back({orbit.at(m), T(s) * g, s, g});
  }
  return out;
}

template <class T>
PreimageTable<T>::PreimageTable(const WeightedSystem<T>& sys, const T& y, std::size_t depth)
    : target_(y) {
  levels_.resize(depth + 1);
  levels_[0].push_back({y, T(1)});
  for (std::size_t p = 0; p < depth; ++p) {
    auto& next = levels_[p + 1];
    for (const auto& pre : levels_[p]) {
      for (std::size_t i = 0; i < sys.branch_count(); ++i) {
        if (auto z = sys.preimage(i, pre.x)) {
          next.push_back({std::move(*z), sys.weight(i) * pre.weight});
        }
      }
    }
    std::sort(next.begin(), next.end(),
              [](const Preimage<T>& l, const Preimage<T>& r) { return l.x < r.x; });
  }
  prefix_.resize(depth + 1);
  for (std::size_t p = 0; p <= depth; ++p) {
    auto& pre = prefix_[p];
    pre.reserve(levels_[p].size() + 1);
    pre.push_back(T(0));
    for (const auto& x : levels_[p]) pre.push_back(pre.back() + x.weight);
  }
}

template <class T>
std::size_t PreimageTable<T>::count_below(std::size_t p, const Germ<T>& g) const {
  const auto& lv = levels_[p];
  auto less = [](const Preimage<T>& e, const T& v) { return e.x < v; };
  auto lower = std::lower_bound(lv.begin(), lv.end(), g.base, less);
  if (g.dir > 0 && lower != lv.end() && lower->x == g.base) ++lower;
  return static_cast<std::size_t>(lower - lv.begin());
}

template <class T>
T PreimageTable<T>::weight_in(std::size_t p, const GermInterval<T>& J) const {
  if (J.empty()) return T(0);
  const std::size_t lo = count_below(p, J.lower());
  const std::size_t hi = count_below(p, J.upper());
  if (hi <= lo) return T(0);
  return prefix(p, hi) - prefix(p, lo);
}

template <class T>
T PreimageTable<T>::sigma_sum(std::size_t p, const Germ<T>& u) const {
  const std::size_t n = count_below(p, u);
  const T below = prefix(p, n);
  const T above = prefix(p, levels_[p].size()) - below;
  return (below - above) / T(2);
}

#define KNEAD_INSTANTIATE(T)                                                                    \
  template class GermInterval<T>;                                                               \
  template struct Branch<T>;                                                                    \
  template class WeightedSystem<T>;                                                             \
  template class GermOrbit<T>;                                                                  \
  template class PreimageTable<T>;                                                              \
  template std::vector<OrbitPoint<T>> germ_orbit(const WeightedSystem<T>&, const Germ<T>&,      \
                                                 std::size_t);

KNEAD_INSTANTIATE(double)
KNEAD_INSTANTIATE(Rational)

}  // namespace knead
