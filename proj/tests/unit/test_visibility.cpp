#include <cmath>

#include "doctest.h"
#include "sensorplace/errors.hpp"
#include "sensorplace/oracle.hpp"
#include "support.hpp"

using namespace sensorplace;
using testing::rect;

TEST_CASE("sector indicator") {
  const Sensor s = Sensor::fixed({0.5, 0.5}, 0.3, 0.0, kPi / 2.0);
  const Vec3 x{0.5, 0.5};
  CHECK(sector_indicator(s, 2, x, {0.6, 0.6}) == 1);
  CHECK(sector_indicator(s, 2, x, {0.4, 0.5}) == -1);
  const Sensor wrap = Sensor::fixed({0.5, 0.5}, 0.3, 7.0 * kPi / 4.0, kPi / 2.0);
  CHECK(sector_indicator(wrap, 2, x, {0.6, 0.5}) == 1);
  CHECK(sector_indicator(wrap, 2, x, {0.5, 0.6}) == -1);
  const Sensor full = Sensor::fixed({0.5, 0.5}, 0.3, 1.0, kTwoPi);
  CHECK(sector_indicator(full, 2, x, {0.4, 0.45}) == 1);
}

TEST_CASE("cone indicator") {
  Sensor s = Sensor::fixed({0.5, 0.5, 0.25}, 0.3, 0.0, kPi / 6.0);
  s.polar = kPi / 2.0;  // axis +x
  const Vec3 x{0.5, 0.5, 0.25};
  CHECK(sector_indicator(s, 3, x, {0.7, 0.52, 0.25}) == 1);
  CHECK(sector_indicator(s, 3, x, {0.5, 0.7, 0.25}) == -1);
  CHECK(sector_indicator(s, 3, x, {0.3, 0.5, 0.25}) == -1);
}

TEST_CASE("coverage in free space") {
  const Environment env = testing::free_env(1.0, 0.01);
  const Sensor s = Sensor::fixed({0.5, 0.5}, 0.3, 0.0, kPi / 2.0);
  const ScalarField phi = compute_coverage(env, s);
  const Grid& g = env.grid();
  CHECK(std::abs(phi[g.nearest({0.6, 0.6})] - (0.3 - 0.1 * std::sqrt(2.0))) <= 2.0 * g.h);
  CHECK(phi[g.nearest({0.4, 0.5})] == -1.0);
  CHECK(phi[g.nearest({0.95, 0.5})] == -1.0);
}

TEST_CASE("coverage is occluded behind an obstacle") {
  const Environment env(testing::square_domain(1.0, 0.01), {rect(0.45, 0.4, 0.55, 0.6)});
  const Sensor s = Sensor::fixed({0.2, 0.5}, 0.7, 0.0, kTwoPi);
  const ScalarField phi = compute_coverage(env, s);
  const Grid& g = env.grid();
  CHECK(phi[g.nearest({0.8, 0.5})] < 0.0);   // directly behind
  CHECK(phi[g.nearest({0.35, 0.5})] > 0.0);  // in front
  CHECK(phi[g.nearest({0.7, 0.85})] > 0.0);  // clear line of sight

  const OracleReport rep = oracle_coverage_check(env, s, phi);
  CHECK(rep.agreement() >= 0.99);
}

TEST_CASE("union coverage") {
  const Environment env = testing::free_env(1.0, 0.05);
  ScalarField a(env.grid(), FieldRole::Coverage, -1.0);
  ScalarField b(env.grid(), FieldRole::Coverage, -1.0);
  a[3] = 0.2;
  const std::vector<ScalarField> ab{a, b};
  CHECK(union_coverage(ab)[3] == 0.2);
  const std::vector<ScalarField> bb{b, b};
  for (double v : union_coverage(bb).values) CHECK(v == -1.0);
  const std::vector<ScalarField> aa{a, a};
  CHECK(union_coverage(aa).values == a.values);

  const Environment other = testing::free_env(1.0, 0.025);
  const std::vector<ScalarField> mixed{a, ScalarField(other.grid(), FieldRole::Coverage, -1.0)};
  CHECK_THROWS_AS(union_coverage(mixed), GridMismatchError);
}

TEST_CASE("infeasible sensors") {
  const Environment env(testing::square_domain(1.0, 0.01), {rect(0.4, 0.4, 0.6, 0.6)});
  CHECK_THROWS_AS(check_sensor(env, Sensor::fixed({0.5, 0.5}, 0.3, 0.0, 1.0)), InfeasibleError);
  CHECK_THROWS_AS(check_sensor(env, Sensor::fixed({1.5, 0.5}, 0.3, 0.0, 1.0)), InfeasibleError);
  CHECK_THROWS_AS(check_sensor(env, Sensor::fixed({0.2, 0.2}, -0.3, 0.0, 1.0)), ConfigError);
  CHECK_THROWS_AS(check_sensor(env, Sensor::fixed({0.2, 0.2}, 0.3, 0.0, 1.0, 1.0)), ConfigError);
  CHECK(is_feasible(env, Sensor::fixed({0.2, 0.2}, 0.3, 0.0, 1.0)));
}

TEST_CASE("boundary sensors sit just off the boundary") {
  const Environment env(testing::square_domain(1.0, 0.01), {rect(0.4, 0.4, 0.6, 0.6)});
  const Sensor s = Sensor::on_boundary({{BoundaryKind::Obstacle, 0, 0}, 0.1, 0.0}, 0.3, 0.0, kPi);
  const Vec3 x = sensor_position(env, s);
  CHECK(x.x == doctest::Approx(0.5));
  CHECK(x.y == doctest::Approx(0.4 - env.standoff()));
  CHECK(is_feasible(env, s));
}

TEST_CASE("spatial coverage") {
  const Domain d{3, {}, {1.0, 1.0, 1.0}, 0.025};
  SUBCASE("full sphere in free space") {
    const Environment env(d, std::vector<Box>{});
    const Sensor s = Sensor::fixed({0.5, 0.5, 0.5}, 0.3, 0.0, kPi);
    const ScalarField phi = compute_coverage_3d(env, s);
    const Grid& g = env.grid();
    const Vec3 y{0.6, 0.55, 0.45};
    CHECK(std::abs(phi[g.nearest(y)] - (0.3 - distance(g.node(g.nearest(y)), s.point))) <= 2.0 * d.h);
    CHECK(phi[g.nearest({0.95, 0.5, 0.5})] == -1.0);
  }
  SUBCASE("box occludes") {
    const Environment env(d, {Box{{0.45, 0.3, 0.0}, {0.55, 0.7, 1.0}}});
    const Sensor s = Sensor::fixed({0.25, 0.5, 0.5}, 0.6, 0.0, kPi);
    const ScalarField phi = compute_coverage_3d(env, s);
    const Grid& g = env.grid();
    CHECK(phi[g.nearest({0.75, 0.5, 0.5})] < 0.0);
    CHECK(phi[g.nearest({0.35, 0.5, 0.5})] > 0.0);
    CHECK_FALSE(ray_visible(env, {0.25, 0.5, 0.5}, {0.75, 0.5, 0.5}));
  }
}
