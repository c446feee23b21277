#include <cmath>

#include "doctest.h"
#include "sensorplace/oracle.hpp"
#include "support.hpp"

using namespace sensorplace;
using testing::rect;

TEST_CASE("ray visibility") {
  const Environment free = testing::free_env(1.0, 0.05);
  CHECK(ray_visible(free, {0.1, 0.1}, {0.9, 0.8}));

  const Environment env(testing::square_domain(1.0, 0.05), {rect(0.4, 0.4, 0.6, 0.6)});
  CHECK_FALSE(ray_visible(env, {0.1, 0.5}, {0.5, 0.5}));  // ends inside
  CHECK_FALSE(ray_visible(env, {0.1, 0.5}, {0.9, 0.5}));  // crosses
  CHECK(ray_visible(env, {0.2, 0.2}, {0.8, 0.2}));
  CHECK(ray_visible(env, {0.3, 0.5}, {0.5, 0.7}));   // grazes the corner (0.4, 0.6)
  CHECK(ray_visible(env, {0.2, 0.4}, {0.9, 0.4}));   // slides along the bottom edge
  CHECK(ray_visible(env, {0.4, 0.2}, {0.4, 0.9}));   // slides along the left edge
  CHECK_FALSE(ray_visible(env, {0.3, 0.45}, {0.7, 0.65}));
}

TEST_CASE("oracle agreement") {
  SUBCASE("free space") {
    const Environment env = testing::free_env(1.0, 0.01);
    const Sensor s = Sensor::fixed({0.4, 0.45}, 0.35, 0.7, 1.3);
    const auto rep = oracle_coverage_check(env, s, compute_coverage(env, s));
    CHECK(rep.disagree == 0);
    CHECK(rep.agree > 0);
    CHECK(rep.agree + rep.disagree + rep.excluded == rep.free_nodes);
  }
  SUBCASE("square obstacle, full circle") {
    const Environment env(testing::square_domain(1.0, 0.01), {rect(0.45, 0.45, 0.6, 0.6)});
    const Sensor s = Sensor::fixed({0.25, 0.3}, 0.9, 0.0, kTwoPi);
    const auto rep = oracle_coverage_check(env, s, compute_coverage(env, s));
    CHECK(rep.agreement() >= 0.99);
  }
  SUBCASE("sliver sector") {
    const Environment env = testing::free_env(1.0, 0.01);
    const Sensor s = Sensor::fixed({0.3, 0.3}, 0.5, 0.6, 1e-3);
    const auto phi = compute_coverage(env, s);
    const auto rep = oracle_coverage_check(env, s, phi);
    CHECK(rep.disagree == 0);
    CHECK(oracle_area(env, std::vector<Sensor>{s}, 1) < 1e-3);
  }
}

TEST_CASE("oracle areas") {
  const Environment env = testing::free_env(2.0, 0.02);
  const Sensor s = Sensor::fixed({1.0, 1.0}, 0.5, 0.3, kPi / 2.0);
  const double exact = kPi / 16.0;
  const double a4 = oracle_area(env, std::vector<Sensor>{s}, 4);
  const double a1 = oracle_area(env, std::vector<Sensor>{s}, 1);
  CHECK(a4 == doctest::Approx(exact).epsilon(0.01));
  CHECK(std::abs(a4 - exact) <= std::abs(a1 - exact));

  const Sensor t = Sensor::fixed({0.5, 0.5}, 0.3, 1.0, kPi / 3.0);
  const double both = oracle_area(env, std::vector<Sensor>{s, t}, 4);
  const double sum = a4 + oracle_area(env, std::vector<Sensor>{t}, 4);
  CHECK(both == doctest::Approx(sum).epsilon(0.01));
}
