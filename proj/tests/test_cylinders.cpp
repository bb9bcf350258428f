#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "knead/cylinders.hpp"
#include "knead/kneading.hpp"

using namespace knead;
using namespace knead::testing;
using R = Rational;

namespace {

template <class T>
std::vector<std::string> words(const std::vector<Cylinder<T>>& cyl) {
  std::vector<std::string> w;
  for (const auto& c : cyl) {
    std::string s;
    for (auto i : c.word) s += static_cast<char>('0' + i);
    w.push_back(s);
  }
  std::sort(w.begin(), w.end());
  return w;
}

}  // namespace

TEST_CASE("tent cylinders") {
  auto sys = tent<R>();
  auto z1 = enumerate_cylinders(sys, 1);
  REQUIRE(z1.size() == 2);
  CHECK(z1[0].u == 0);
  CHECK(z1[0].v == R(1) / 2);
  CHECK(z1[1].u == R(1) / 2);
  CHECK(z1[1].v == 1);
  auto z2 = enumerate_cylinders(sys, 2);
  REQUIRE(z2.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(z2[k].u == R(static_cast<long>(k)) / 4);
    CHECK(z2[k].v == R(static_cast<long>(k + 1)) / 4);
  }
}

TEST_CASE("cylinder words match sampled itineraries") {
  for (std::size_t n = 1; n <= 6; ++n) {
    auto c = extended_tent<R>(R(5));
    CHECK(words(enumerate_cylinders(c, n)) == oracle::sampled_words<R>(c, n, 3 << 9));
    auto g = golden_mean<R>();
    CHECK(words(enumerate_cylinders(g, n)) == oracle::sampled_words<R>(g, n, 1 << 10));
    auto d = discontinuous_32<R>();
    CHECK(words(enumerate_cylinders(d, n)) == oracle::sampled_words<R>(d, n, 1 << 12));
  }
  // Every branch image is [0,2], which meets I_0 and I_1 only.
  CHECK(enumerate_cylinders(extended_tent<R>(R(5)), 2).size() == 6);
}

TEST_CASE("partition property") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 10; ++it) {
    auto sys = random_affine<R>(rng, 1 + it % 3);
    for (std::size_t n = 1; n <= 5; ++n) {
      auto z = enumerate_cylinders(sys, n);
      R total = 0;
      for (std::size_t k = 0; k < z.size(); ++k) {
        CHECK(z[k].u < z[k].v);
        if (k + 1 < z.size()) CHECK(z[k].v <= z[k + 1].u);
        total += z[k].v - z[k].u;
        // f^j(alpha) stays inside I_{i_j}: check the midpoint's itinerary.
        R x = (z[k].u + z[k].v) / 2;
        for (auto i : z[k].word) {
          CHECK(sys.cut(i) < x);
          CHECK(x < sys.cut(i + 1));
          x = sys.apply(i, x);
        }
      }
      CHECK(total <= sys.b() - sys.a());
    }
  }
}

TEST_CASE("norms") {
  auto t = norms(tent<R>(), 20);
  CHECK(t[19].l1 == R(1 << 20));
  CHECK(t[19].linf == 1);
  auto c = norms(extended_tent<R>(R(100)), 1);
  CHECK(c[0].l1 == 102);
  CHECK(c[0].linf == 100);
  auto rho = rho_estimates(tent<double>(), 20);
  CHECK(rho[19].rho1 == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("fixed point weights") {
  auto sys = tent<R>();
  auto z1 = enumerate_cylinders(sys, 1);
  CHECK(pi_weight(sys, z1[0]) == 0);
  CHECK(pi_weight(sys, z1[1]) == 1);
  CHECK(omega(sys, z1[1]) == 1);

  std::vector<WeightedSystem<R>> systems = {tent<R>(), extended_tent<R>(R(5)), golden_mean<R>(),
                                            discontinuous_32<R>()};
  std::mt19937_64 rng(32);
  for (int it = 0; it < 6; ++it) systems.push_back(random_affine<R>(rng, 2));
  std::size_t seen = 0;
  for (const auto& s : systems) {
    for_each_cylinder<R>(s, 8, [&](const Cylinder<R>& c) {
      CHECK(pi_weight(s, c) == oracle::chord_pi(c.u, c.image_u.base, c.v, c.image_v.base));
      ++seen;
    });
  }
  CHECK(seen >= 500);
}

TEST_CASE("fixed point counts") {
  auto t = fixed_point_counts(tent<R>(), 12);
  for (std::size_t n = 1; n <= 12; ++n) CHECK(t[n - 1] == R((1 << n) - 1));
  // Expanding fixtures never produce negative weights.
  // On [0,2] extended tent is a full tent map; its fixed point 0 sits on the boundary.
  auto c = fixed_point_counts(extended_tent<R>(R(5)), 12);
  for (std::size_t n = 1; n <= 12; ++n) CHECK(c[n - 1] == R((1 << n) - 1));
  for (const auto& v : fixed_point_counts(golden_mean<R>(), 12)) CHECK(v >= 0);
  for (const auto& v : fixed_point_counts(discontinuous_32<R>(), 12)) CHECK(v >= 0);
}

TEST_CASE("zeta identity") {
  auto check_exact = [](const WeightedSystem<R>& sys, std::size_t N) {
    auto z = zeta_residual(sys, N);
    CHECK(max_abs(z.product_residual) == 0);
    CHECK(max_abs(z.log_residual) == 0);
  };
  check_exact(tent<R>(), 16);
  check_exact(extended_tent<R>(R(5)), 14);
  check_exact(golden_mean<R>(), 16);
  check_exact(discontinuous_32<R>(), 14);
  auto tz = zeta_residual(tent<R>(), 12);
  // Z = (1 - t) / (1 - 2t): coefficients 1, 1, 2, 4, ...
  CHECK(tz.zeta[0] == 1);
  for (std::size_t n = 1; n <= 12; ++n) CHECK(tz.zeta[n] == R(1 << (n - 1)));
  std::mt19937_64 rng(33);
  for (int it = 0; it < 6; ++it) check_exact(random_affine<R>(rng, 2, 0.0, 2.0), 8);
  auto f = zeta_residual(extended_tent<double>(5.0), 20);
  CHECK(max_abs(f.product_residual) < 1e-9);
}

TEST_CASE("expansiveness probe") {
  auto p = expansiveness_probe(tent<R>(), 10);
  for (std::size_t n = 1; n <= 10; ++n) CHECK(p.sup_diam[n - 1] == std::ldexp(1.0, -int(n)));
  CHECK(p.contracting);
  CHECK(p.label == "heuristic");
  SystemSpec<R> s;
  s.a = 0;
  s.b = 1;
  s.cuts = {R(1) / 2};
  s.branches = {Branch<R>::linear(1, 0), Branch<R>::linear(-1, R(3) / 2)};
  auto flat = expansiveness_probe(WeightedSystem<R>(s), 8);
  CHECK_FALSE(flat.contracting);
}

TEST_CASE("caps") {
  CylinderCaps caps;
  caps.max_depth = 4;
  CHECK_THROWS_AS(enumerate_cylinders(tent<R>(), 5, caps), CapExceeded);
  caps.max_depth = 24;
  caps.max_cylinders = 10;
  CHECK_THROWS_AS(enumerate_cylinders(tent<R>(), 5, caps), CapExceeded);
}
