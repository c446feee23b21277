#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sensorplace/errors.hpp"
#include "sensorplace/optimizer.hpp"
#include "support.hpp"

using namespace sensorplace;
using testing::rect;

namespace {

IdConfig config_for(const Evaluator& eval, int iterations = 0) {
  IdConfig c;
  c.iterations = iterations;
  c.seed = 7;
  return c.resolved(eval.environment().grid().h, eval.free_measure());
}

double scan_best(Evaluator& eval, Sensor s, int samples, double* arg) {
  double best = -1.0;
  for (int i = 0; i < samples; ++i) {
    s.direction = kTwoPi * i / samples;
    const double v = eval.value(std::vector<Sensor>{s});
    if (v > best) {
      best = v;
      *arg = s.direction;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("rng is reproducible and portable") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(1);
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double z = c.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / 20000.0) < 0.03);
  CHECK(sq / 20000.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("config defaults") {
  IdConfig c;
  const IdConfig r = c.resolved(0.02, 2.0);
  CHECK(r.gamma == doctest::Approx(20.0));
  CHECK(r.h_v == doctest::Approx(0.08));
  CHECK(r.h_x == doctest::Approx(0.02));
  CHECK(r.grad_tol == doctest::Approx(2e-6));
  CHECK(r.location_noise == doctest::Approx(0.25));
  c.time_step = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("evaluator caching is transparent") {
  const Environment env(testing::square_domain(1.0, 0.02), {rect(0.4, 0.4, 0.6, 0.6)});
  Evaluator eval(env, {});
  const std::vector<Sensor> s{Sensor::fixed({0.2, 0.5}, 0.5, -0.5, 1.2)};
  const double first = eval.value(s);
  const std::size_t sweeps = eval.sweep_count();
  CHECK(eval.value(s) == first);
  CHECK(eval.sweep_count() == sweeps);
  std::vector<Sensor> rotated = s;
  rotated[0].direction = 0.3;
  eval.value(rotated);
  CHECK(eval.sweep_count() == sweeps);  // rotation reuses the occlusion sweep
  eval.clear_cache();
  CHECK(eval.value(s) == first);
}

TEST_CASE("gradient vanishes under rotational symmetry") {
  const Environment env = testing::free_env(2.0, 0.01);
  Evaluator eval(env, {});
  // Axis-aligned sector at a node: v -/+ h_v are mirror images on the grid,
  // and v - h_v wraps through 2 pi.
  const Placement p = Placement::identity(env, {Sensor::fixed({1.0, 1.0}, 0.5, 0.0, kPi / 2.0)});
  const double V = eval.value(p.expand(p.initial()));
  const auto g = gradient(eval, p, p.initial(), 0.04, 0.01);
  REQUIRE(g.size() == 1);
  CHECK(std::abs(g[0]) <= 1e-3 * V);
  // Generic orientations carry O(h) quadrature noise from the sector cut.
  const Placement q = Placement::identity(env, {Sensor::fixed({1.0, 1.0}, 0.5, 0.3, kPi / 2.0)});
  CHECK(std::abs(gradient(eval, q, q.initial(), 0.04, 0.01)[0]) <= 2e-2 * V);
}

TEST_CASE("gradient turns a sector into the domain") {
  const Environment env = testing::free_env(1.0, 0.01);
  Evaluator eval(env, {});
  // Sector straddling the right wall, facing mostly up-right.
  const Placement p = Placement::identity(env, {Sensor::fixed({0.8, 0.3}, 0.4, -0.3, kPi / 2.0)});
  const auto params = p.initial();
  const auto g = gradient(eval, p, params, 0.04, 0.01);
  const double step = 10.0 * 0.04;
  auto plus = params;
  plus[0] += step;
  auto minus = params;
  minus[0] -= step;
  const double direct = eval.value(p.expand(plus)) - eval.value(p.expand(minus));
  CHECK(g[0] > 0.0);
  CHECK((direct > 0.0) == (g[0] > 0.0));
}

TEST_CASE("ascent from a maximum stays put") {
  const Environment env = testing::free_env(1.0, 0.02);
  Evaluator eval(env, {});
  const Placement p = Placement::identity(env, {Sensor::fixed({0.5, 0.5}, 0.3, 0.0, kTwoPi)});
  const auto r = gradient_ascent(eval, p, p.initial(), config_for(eval));
  CHECK(r.params == p.initial());
  CHECK(r.value == eval.value(p.expand(p.initial())));
}

TEST_CASE("ascent does not lose value") {
  const Environment env(testing::square_domain(1.0, 0.02), {rect(0.45, 0.2, 0.55, 0.8)});
  Evaluator eval(env, {});
  const Placement p = Placement::identity(env, {Sensor::fixed({0.3, 0.5}, 0.5, kPi, kPi / 2.0),
                                                Sensor::on_boundary({{BoundaryKind::Domain, 0, 0}, 0.3, 0.0}, 0.5,
                                                                    0.2, kPi / 3.0)});
  const IdConfig c = config_for(eval);
  const double before = eval.value(p.expand(p.initial()));
  const auto r = gradient_ascent(eval, p, p.initial(), c);
  CHECK(r.value >= before - c.grad_tol);
  CHECK(r.value > before);
  CHECK(r.value == doctest::Approx(eval.value(p.expand(r.params))).epsilon(1e-12));
}

TEST_CASE("angle-only ascent finds the scanned optimum on a half-blocked scene") {
  const Environment env(testing::square_domain(1.0, 0.01), {rect(0.0, 0.0, 0.4, 1.0)});
  Evaluator eval(env, {});
  // Off-node position: sector edges never run exactly through grid nodes.
  const Sensor s = Sensor::fixed({0.6113, 0.4937}, 0.5, 1.2, kPi / 3.0);
  double arg = 0.0;
  const double best = scan_best(eval, s, 720, &arg);
  const Placement p = Placement::identity(env, {s});
  const IdConfig c = config_for(eval);
  const auto r = gradient_ascent(eval, p, p.initial(), c);
  CHECK(r.value >= 0.98 * best);
  // The optimum is a plateau; the final angle must lie within 2 h_v of a
  // scanned angle on it.
  bool on_plateau = false;
  Sensor probe = s;
  for (int i = 0; i < 720 && !on_plateau; ++i) {
    probe.direction = kTwoPi * i / 720;
    if (std::abs(wrap_angle(r.params[0] - probe.direction + kPi) - kPi) > 2.0 * c.h_v) continue;
    on_plateau = eval.value(std::vector<Sensor>{probe}) >= 0.99 * best;
  }
  CHECK(on_plateau);
}

TEST_CASE("sde segments") {
  const Environment env = testing::free_env(1.0, 0.02);
  Evaluator eval(env, {});
  const Placement p = Placement::identity(env, {Sensor::fixed({0.7, 0.3}, 0.4, 1.0, kPi / 3.0)});
  const IdConfig c = config_for(eval);
  Rng r0(3);
  CHECK(sde_segment(eval, p, p.initial(), 0.0, 0.0, c, r0) == p.initial());

  Rng ra(3);
  Rng rb(99);
  const auto flow_a = sde_segment(eval, p, p.initial(), 0.0, 5.0, c, ra);
  const auto flow_b = sde_segment(eval, p, p.initial(), 0.0, 5.0, c, rb);
  CHECK(flow_a == flow_b);

  Rng n1(5);
  Rng n2(5);
  const auto noisy1 = sde_segment(eval, p, p.initial(), 0.5, 5.0, c, n1);
  const auto noisy2 = sde_segment(eval, p, p.initial(), 0.5, 5.0, c, n2);
  CHECK(noisy1 == noisy2);
  CHECK(noisy1 != flow_a);
}

TEST_CASE("intermittent diffusion") {
  const Environment env(testing::square_domain(1.0, 0.02), {rect(0.45, 0.3, 0.55, 0.7)});
  Evaluator eval(env, {});
  const Placement p = Placement::identity(env, {Sensor::fixed({0.25, 0.5}, 0.4, 0.0, kPi / 3.0),
                                                Sensor::fixed({0.75, 0.5}, 0.4, kPi, kPi / 3.0)});

  SUBCASE("no diffusion rounds equals one ascent") {
    const IdConfig c = config_for(eval, 0);
    const auto id = intermittent_diffusion(eval, p, p.initial(), c);
    const auto ga = gradient_ascent(eval, p, p.initial(), c);
    CHECK(id.params == ga.params);
    CHECK(id.value == ga.value);
    REQUIRE(id.trace.records.size() == 2);
    CHECK(id.trace.records[1].best == ga.value);
  }
  SUBCASE("best value never decreases and runs repeat") {
    const IdConfig c = config_for(eval, 6);
    const auto a = intermittent_diffusion(eval, p, p.initial(), c);
    const auto b = intermittent_diffusion(eval, p, p.initial(), c);
    REQUIRE(a.trace.records.size() == 7);
    for (std::size_t i = 1; i < a.trace.records.size(); ++i) {
      CHECK(a.trace.records[i].best >= a.trace.records[i - 1].best);
      CHECK(a.trace.records[i].best == b.trace.records[i].best);
      CHECK(a.trace.records[i].candidate == b.trace.records[i].candidate);
    }
    CHECK(a.value == a.trace.records.back().best);
    CHECK(a.params == b.params);
  }
}

TEST_CASE("two-sensor global search against an exhaustive angle scan") {
  const Environment env(testing::square_domain(1.0, 0.02), {rect(0.45, 0.3, 0.55, 0.7)});
  Evaluator eval(env, {});
  Sensor a = Sensor::fixed({0.3013, 0.4871}, 0.45, 0.0, kPi / 3.0);
  Sensor b = Sensor::fixed({0.6921, 0.5077}, 0.45, 0.0, kPi / 3.0);
  constexpr int kScan = 72;
  double best = 0.0;
  for (int i = 0; i < kScan; ++i) {
    a.direction = kTwoPi * i / kScan;
    for (int j = 0; j < kScan; ++j) {
      b.direction = kTwoPi * j / kScan;
      best = std::max(best, eval.value(std::vector<Sensor>{a, b}));
    }
  }
  a.direction = 0.0;  // both start facing the central wall or each other
  b.direction = kPi;
  const Placement p = Placement::identity(env, {a, b});
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    IdConfig c = config_for(eval, 20);
    c.seed = seed;
    if (intermittent_diffusion(eval, p, p.initial(), c).value >= 0.98 * best) ++hits;
  }
  CHECK(hits >= 8);
}
