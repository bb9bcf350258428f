#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fixtures.hpp"

#include "knead/analytic.hpp"
#include "knead/kneading.hpp"
#include "knead/pressure.hpp"

#include <cmath>

using namespace knead;
using namespace knead::testing;
using R = Rational;

namespace {
const double golden_log = std::log((1 + std::sqrt(5.0)) / 2);
}

TEST_CASE("analytic theta matches long truncations") {
  std::vector<WeightedSystem<double>> systems = {tent<double>(), extended_tent<double>(5.0),
                                                 golden_mean<double>(), discontinuous_32<double>()};
  for (const auto& sys : systems) {
    const double t = 0.15;
    for (std::size_t j = 0; j <= sys.ell(); ++j) {
      for (const auto& [g, eps] : row_germs(sys, j)) {
        (void)eps;
        const auto series = theta_all(sys, g, 200);
        const auto at = theta_at(sys, g, t);
        for (std::size_t k = 0; k <= sys.ell(); ++k) {
          CHECK(at[k] == doctest::Approx(eval_double(series[k], t)).epsilon(1e-13));
        }
      }
    }
    const auto d = kneading_det(sys, 200);
    CHECK(kneading_det_at(sys, t) == doctest::Approx(eval_double(d, t)).epsilon(1e-12));
  }
  // (1 - 2t) / (1 - t) for the tent map.
  CHECK(kneading_det_at(tent<R>(), 0.3) == doctest::Approx(0.4 / 0.7).epsilon(1e-14));
}

TEST_CASE("tent pressure") {
  PressureOptions opt;
  opt.N = 32;
  auto res = pressure(tent<R>(), opt);
  REQUIRE(res.found);
  CHECK(std::fabs(res.pressure - std::log(2.0)) < 1e-10);
  CHECK(std::fabs(res.t_star - 0.5) < 1e-11);
  CHECK(res.refined);
  CHECK_FALSE(res.unstable);
  // The raw truncated root of 1 - 2t + t^33 sits about 5.8e-11 away.
  CHECK(std::fabs(res.t_truncated - 0.5) > 1e-11);
  auto resf = pressure(tent<double>(), opt);
  CHECK(std::fabs(resf.pressure - std::log(2.0)) < 1e-10);
}

TEST_CASE("extended tent pressure and spurious zero") {
  for (double M : {5.0, 100.0}) {
    auto sys = extended_tent<double>(M);
    auto res = pressure(sys);
    REQUIRE(res.found);
    CHECK(std::fabs(res.pressure - std::log(2.0)) < 1e-10);
    auto demo = spurious_zero_demo(sys);
    REQUIRE(demo.det_b.found);
    CHECK(std::fabs(demo.det_b.t - 2 / (1 + M)) < 1e-9);
    CHECK(std::fabs(demo.det_r.t - 0.5) < 1e-10);
    CHECK(demo.differ);
  }
  auto demo2 = spurious_zero_demo(extended_tent<double>(2.0));
  CHECK(std::fabs(demo2.det_b.t - 0.5) < 1e-10);
  CHECK(std::fabs(demo2.det_r.t - 0.5) < 1e-10);
  CHECK_FALSE(demo2.differ);
  CHECK_FALSE(spurious_zero_demo(tent<double>()).differ);
  CHECK_FALSE(spurious_zero_demo(golden_mean<double>()).differ);
}

TEST_CASE("golden mean pressure") {
  auto res = pressure(golden_mean<R>());
  REQUIRE(res.found);
  CHECK(std::fabs(res.pressure - golden_log) < 1e-8);
  auto bf = brute_force_pressure(golden_mean<double>(), 24);
  CHECK(std::fabs(bf[23] - golden_log) < 0.02);
}

TEST_CASE("brute force oracle") {
  auto bf = brute_force_pressure(tent<double>(), 20);
  CHECK(bf[19] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("preconditions and outcomes") {
  SystemSpec<double> s;
  s.a = 0;
  s.b = 1;
  s.cuts = {0.5};
  s.branches = {Branch<double>::linear(2, 0, -1), Branch<double>::linear(-2, 2)};
  CHECK_THROWS_AS(pressure(WeightedSystem<double>(s)), PreconditionError);

  // Weights small enough that the pressure is negative: no zero below t_max = 1.
  s.branches = {Branch<double>::linear(2, 0, 0.2), Branch<double>::linear(-2, 2, 0.2)};
  PressureOptions opt;
  opt.search_bound = 1.0;
  auto res = pressure(WeightedSystem<double>(s), opt);
  CHECK_FALSE(res.found);
  CHECK_FALSE(res.warnings.empty());

  // A tangential zero: D(t) = (1 - 2t)^2 is flagged, not refined.
  PressureOptions o;
  auto z = first_zero([](double t) { return (1 - 2 * t) * (1 - 2 * t); }, 0.9, o);
  CHECK_FALSE(z.found);
  REQUIRE(z.dip.has_value());
  CHECK(*z.dip == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("discontinuous 3:2 fixture has a pressure") {
  auto res = pressure(discontinuous_32<R>());
  REQUIRE(res.found);
  auto bf = brute_force_pressure(discontinuous_32<double>(), 18);
  CHECK(std::fabs(res.pressure - bf.back()) < 0.15);
}
