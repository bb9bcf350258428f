#pragma once

#include "knead/system.hpp"

#include <algorithm>
#include <random>

namespace knead::testing {

template <class T>
T q(long p, long d = 1) {
  return T(p) / T(d);
}

template <class T>
WeightedSystem<T> tent() {
  SystemSpec<T> s;
  s.a = T(0);
  s.b = T(1);
  s.cuts = {q<T>(1, 2)};
  s.branches = {Branch<T>::linear(T(2), T(0)), Branch<T>::linear(T(-2), T(2))};
  return WeightedSystem<T>(std::move(s));
}

template <class T>
WeightedSystem<T> extended_tent(const T& M) {
  SystemSpec<T> s;
  s.a = T(0);
  s.b = T(3);
  s.cuts = {T(1), T(2)};
  s.branches = {Branch<T>::linear(T(2), T(0)), Branch<T>::linear(T(-2), T(4)),
                Branch<T>::linear(T(2), T(-4), M)};
  return WeightedSystem<T>(std::move(s));
}

// Markov map with transition matrix [[1,1],[1,0]].
template <class T>
WeightedSystem<T> golden_mean() {
  SystemSpec<T> s;
  s.a = T(0);
  s.b = T(1);
  s.cuts = {q<T>(1, 2)};
  s.branches = {Branch<T>::linear(T(2), T(0)), Branch<T>::linear(T(1), q<T>(-1, 2))};
  return WeightedSystem<T>(std::move(s));
}

// Discontinuous two-branch map with weights 3:2.
template <class T>
WeightedSystem<T> discontinuous_32() {
  SystemSpec<T> s;
  s.a = T(0);
  s.b = T(1);
  s.cuts = {q<T>(1, 2)};
  s.branches = {Branch<T>::linear(q<T>(3, 2), q<T>(1, 4), T(3)),
                Branch<T>::linear(T(2), T(-1), T(2))};
  return WeightedSystem<T>(std::move(s));
}

// Random affine system on [0,1] with l interior cuts on a 1/64 grid and
// branches through random grid endpoints. Weights in [wlo, whi] on a 1/10 grid.
template <class T>
WeightedSystem<T> random_affine(std::mt19937_64& rng, std::size_t ell, double wlo = 0.1,
                                double whi = 3.0) {
  const long grid = 64;
  for (;;) {
    std::uniform_int_distribution<long> pos(1, grid - 1);
    std::vector<long> cuts;
    while (cuts.size() < ell) {
      const long c = pos(rng);
      if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    SystemSpec<T> s;
    s.a = T(0);
    s.b = T(1);
    for (long c : cuts) s.cuts.push_back(q<T>(c, grid));
    std::uniform_int_distribution<long> img(0, grid);
    std::uniform_int_distribution<long> wd(static_cast<long>(wlo * 10), static_cast<long>(whi * 10));
    bool ok = true;
    for (std::size_t i = 0; i <= ell; ++i) {
      const long y0 = img(rng);
      const long y1 = img(rng);
      if (y0 == y1) {
        ok = false;
        break;
      }
      s.branches.push_back(Branch<T>::chord(q<T>(y0, grid), q<T>(y1, grid), q<T>(wd(rng), 10)));
    }
    if (ok) return WeightedSystem<T>(std::move(s));
  }
}

}  // namespace knead::testing
