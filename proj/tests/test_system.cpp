#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fixtures.hpp"

using namespace knead;
using namespace knead::testing;
using R = Rational;

TEST_CASE("validation accepts the reference systems") {
  auto t = tent<R>();
  CHECK(t.ell() == 1);
  CHECK(t.sign(0) == 1);
  CHECK(t.sign(1) == -1);
  auto c = extended_tent<R>(R(100));
  CHECK(c.sign(0) == 1);
  CHECK(c.sign(1) == -1);
  CHECK(c.sign(2) == 1);
  CHECK(c.weight(2) == 100);
  CHECK(c.continuous());
  CHECK_FALSE(discontinuous_32<R>().continuous());
}

TEST_CASE("validation errors name the branch") {
  SystemSpec<R> s;
  s.a = 0;
  s.b = 1;
  s.cuts = {R(1) / 2};
  s.branches = {Branch<R>::linear(0, R(1) / 2), Branch<R>::linear(-2, 2)};
  try {
    WeightedSystem<R> sys(s);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("non-monotone branch") != std::string::npos);
    CHECK(e.branch() == 0u);
  }

  s.branches = {Branch<R>::linear(3, 0), Branch<R>::linear(-2, 2)};
  CHECK_THROWS_WITH_AS(WeightedSystem<R>{s}, doctest::Contains("image escapes [a,b]"),
                       ValidationError);

  s.branches = {Branch<R>::linear(2, 0), Branch<R>::linear(-2, 2)};
  s.cuts = {R(3) / 4, R(1) / 4};
  s.branches.push_back(Branch<R>::linear(1, 0));
  CHECK_THROWS_WITH_AS(WeightedSystem<R>{s}, doctest::Contains("unsorted cuts"), ValidationError);

  s.cuts = {R(1) / 2, R(1) / 2};
  CHECK_THROWS_WITH_AS(WeightedSystem<R>{s}, doctest::Contains("zero-length interval"),
                       ValidationError);
}

TEST_CASE("germ steps of the tent map") {
  auto t = tent<R>();
  const R h = R(1) / 2;
  CHECK(germ_step(t, Germ<R>{h, -1}) == Germ<R>{R(1), -1});
  CHECK(germ_step(t, Germ<R>{R(1), -1}) == Germ<R>{R(0), 1});
  CHECK(germ_step(t, Germ<R>{R(0), 1}) == Germ<R>{R(0), 1});
}

TEST_CASE("germ orbits and cocycles") {
  auto t = tent<R>();
  auto orbit = germ_orbit(t, Germ<R>{R(1) / 2, 1}, 2);
  REQUIRE(orbit.size() == 3);
  CHECK(orbit[0].germ == Germ<R>{R(1) / 2, 1});
  CHECK(orbit[1].germ == Germ<R>{R(1), -1});
  CHECK(orbit[2].germ == Germ<R>{R(0), 1});
  CHECK(orbit[0].sg == 1);
  CHECK(orbit[1].sg == -1);
  CHECK(orbit[2].sg == 1);
  CHECK(germ_orbit(t, Germ<R>{R(0), 1}, 0)[0].sg == 1);

  auto c = extended_tent<R>(R(7));
  auto oc = germ_orbit(c, Germ<R>{R(2), 1}, 1);
  CHECK(oc[1].germ == Germ<R>{R(0), 1});
  CHECK(oc[1].sg == 7);
}

TEST_CASE("half-sign follows the germ order") {
  CHECK(sigma(Germ<R>{R(1) / 2, 1}, R(1) / 2) == R(1) / 2);
  CHECK(sigma(Germ<R>{R(1) / 2, -1}, R(1) / 2) == R(-1) / 2);
  CHECK(sigma(Germ<R>{R(0), 1}, R(0)) == R(1) / 2);
}

TEST_CASE("germ order is a total order consistent with points") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pt(0, 8), dir(0, 1);
  for (int it = 0; it < 2000; ++it) {
    Germ<R> x{R(pt(rng)) / 8, dir(rng) ? 1 : -1};
    Germ<R> y{R(pt(rng)) / 8, dir(rng) ? 1 : -1};
    Germ<R> z{R(pt(rng)) / 8, dir(rng) ? 1 : -1};
    CHECK(((x < y) + (y < x) + (x == y)) == 1);
    if (x < y && y < z) CHECK(x < z);
    if (x.base < y.base) {
      CHECK(compare(x, y.base) < 0);
    }
    CHECK(compare(x, x.base) == x.dir);
  }
}

TEST_CASE("preimage sets") {
  auto t = tent<R>();
  auto g = preimages(t, R(1) / 2, 1);
  REQUIRE(g.level(1).size() == 2);
  CHECK(g.level(1)[0].x == R(1) / 4);
  CHECK(g.level(1)[1].x == R(3) / 4);
  CHECK(g.level(1)[0].weight == 1);
  CHECK(preimages(t, R(0), 1).level(1).empty());
  CHECK(preimages(extended_tent<R>(R(5)), R(3), 1).level(1).empty());

  // Round trip f(x) = y on random systems.
  std::mt19937_64 rng(11);
  for (int it = 0; it < 20; ++it) {
    auto sys = random_affine<R>(rng, 3);
    const R y = R(static_cast<long>(rng() % 63 + 1)) / 64;
    auto p = preimages(sys, y, 1);
    for (const auto& pre : p.level(1)) {
      auto i = sys.branch_of(Germ<R>{pre.x, 1});
      CHECK(sys.apply(i, pre.x) == y);
      CHECK(pre.weight == sys.weight(i));
    }
  }
}

TEST_CASE("cocycle identity on random orbits") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    auto sys = random_affine<R>(rng, 2);
    Germ<R> x{R(static_cast<long>(rng() % 63 + 1)) / 64, 1};
    auto orbit = germ_orbit(sys, x, 20);
    for (std::size_t m = 0; m <= 20; m += 5) {
      auto tail = germ_orbit(sys, orbit[m].germ, 20 - m);
      for (std::size_t k = 0; m + k <= 20; ++k) {
        CHECK(orbit[m + k].sg == orbit[m].sg * tail[k].sg);
        CHECK(orbit[m + k].germ == tail[k].germ);
      }
    }
  }
}

TEST_CASE("forward invariance on cutting-point germs") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 10; ++it) {
    auto sys = random_affine<R>(rng, 3);
    for (std::size_t k = 0; k <= sys.ell() + 1; ++k) {
      for (int d : {-1, 1}) {
        Germ<R> g{sys.cut(k), d};
        if (!sys.is_germ(g)) continue;
        for (const auto& p : germ_orbit(sys, g, 50)) CHECK(sys.is_germ(p.germ));
      }
    }
  }
}

TEST_CASE("float mode reports germ ambiguity near a cut") {
  SystemSpec<double> s;
  s.a = 0;
  s.b = 1;
  s.cuts = {0.5};
  s.branches = {Branch<double>::linear(2, 0), Branch<double>::linear(-2, 2)};
  WeightedSystem<double> t(s);
  CHECK_THROWS_AS(t.step(Germ<double>{0.25 + 1e-14, 1}), GermAmbiguity);
  CHECK(t.step(Germ<double>{0.25, 1}) == Germ<double>{0.5, 1});
}
