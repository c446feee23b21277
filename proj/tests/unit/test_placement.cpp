#include <cmath>

#include "doctest.h"
#include "sensorplace/errors.hpp"
#include "sensorplace/placement.hpp"
#include "support.hpp"

using namespace sensorplace;
using testing::rect;

namespace {

double edge_ratio(const Environment& env, const Sensor& s, const Vec3& a, const Vec3& b) {
  const Vec3 p = env.boundary_point(s.boundary).point;
  return distance(a, p) / distance(a, b);
}

}  // namespace

TEST_CASE("identity placement coordinates") {
  const Environment env(testing::square_domain(1.0, 0.02), {rect(0.4, 0.4, 0.6, 0.6)});
  Sensor fixed_dir = Sensor::fixed({0.1, 0.1}, 0.3, 0.0, 1.0);
  fixed_dir.direction_adjustable = false;
  const Placement p = Placement::identity(
      env, {fixed_dir, Sensor::fixed({0.9, 0.1}, 0.3, 0.5, 1.0),
            Sensor::on_boundary({{BoundaryKind::Obstacle, 0, 0}, 0.1, 0.0}, 0.3, 0.0, 1.0, 0.0, true)});
  REQUIRE(p.dimension() == 3);
  CHECK(p.params()[0].kind == ParamKind::Direction);
  CHECK(p.params()[0].sensor == 1);
  CHECK(p.params()[2].kind == ParamKind::Arc);
  CHECK(p.params()[2].periodic);
  auto params = p.initial();
  params[2] += 0.8;  // wraps past the perimeter
  p.normalize(params);
  CHECK(params[2] == doctest::Approx(0.1));
  CHECK(p.expand(params)[2].boundary.s == doctest::Approx(0.1));
  CHECK(p.affected(0).size() == 1);
  CHECK(p.affected(0)[0] == 1);
  CHECK(p.affected(2)[0] == 2);
}

TEST_CASE("identity placement rejects infeasible sensors") {
  const Environment env(testing::square_domain(1.0, 0.02), {rect(0.4, 0.4, 0.6, 0.6)});
  CHECK_THROWS_AS(Placement::identity(env, {Sensor::fixed({0.5, 0.5}, 0.3, 0.0, 1.0)}), InfeasibleError);
}

TEST_CASE("symmetric placement") {
  const Polygon pent = testing::regular(1.0, 1.0, 0.3, 5, 90.0);
  const Environment env(testing::square_domain(2.0, 0.01), {pent});
  const double edge = distance(pent.vertices[0], pent.vertices[1]);

  SUBCASE("zero offset collapses each triple") {
    const Placement p = Placement::symmetric(env, {0, 0.5, kPi / 2.0, 0.5, 0.0, 0.2});
    const auto s = p.expand(p.initial());
    REQUIRE(s.size() == 15);
    CHECK(p.dimension() == 2);
    for (int e = 0; e < 5; ++e) {
      const Vec3 l = sensor_position(env, s[3 * e]);
      const Vec3 c = sensor_position(env, s[3 * e + 1]);
      const Vec3 r = sensor_position(env, s[3 * e + 2]);
      CHECK(distance(l, c) < 1e-12);
      CHECK(distance(r, c) < 1e-12);
    }
  }
  SUBCASE("division ratio") {
    const Placement p = Placement::symmetric(env, {0, 0.5, kPi / 2.0, 0.5, 0.21 * edge, 0.0});
    const auto s = p.expand(p.initial());
    for (int e = 0; e < 5; ++e) {
      const Vec3& a = pent.vertices[e];
      const Vec3& b = pent.vertices[(e + 1) % 5];
      CHECK(edge_ratio(env, s[3 * e], a, b) == doctest::Approx(0.29));
      CHECK(edge_ratio(env, s[3 * e + 1], a, b) == doctest::Approx(0.5));
      CHECK(edge_ratio(env, s[3 * e + 2], a, b) == doctest::Approx(0.71));
    }
  }
  SUBCASE("mirror identity") {
    const Placement p = Placement::symmetric(env, {0, 0.5, kPi / 2.0, 0.5, 0.05, 0.37});
    const auto s = p.expand(p.initial());
    for (int e = 0; e < 5; ++e) {
      // Compare the sector bisectors: start angle + half width.
      const double half = s[3 * e].width / 2.0;
      const double left = s[3 * e].direction + half;
      const double right = s[3 * e + 2].direction + half;
      const double normal = s[3 * e + 1].direction + half;
      CHECK(wrap_angle(left + right - 2.0 * normal + kPi) - kPi == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(std::abs(wrap_angle(left - normal + kPi) - kPi) == doctest::Approx(0.37));
      CHECK_FALSE(s[3 * e + 1].direction_adjustable);
    }
    auto params = p.initial();
    params[0] = 10.0;
    p.normalize(params);
    CHECK(params[0] == doctest::Approx(edge / 2.0));
  }
  SUBCASE("offsets past half an edge are rejected") {
    CHECK_THROWS_AS(Placement::symmetric(env, {0, 0.5, kPi / 2.0, 0.5, edge, 0.0}), ConfigError);
  }
}
