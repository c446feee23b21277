#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "sensorplace/environment.hpp"
#include "sensorplace/objective.hpp"
#include "sensorplace/placement.hpp"
#include "sensorplace/visibility.hpp"

namespace sensorplace {

/// Seeded generator with a portable uniform/normal mapping (the standard
/// distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  ///< [0, 1)
  double normal();   ///< standard normal, Box-Muller
 private:
  std::mt19937_64 engine_;
};

/// Intermittent-diffusion settings. Zero-valued fields marked "auto" are
/// filled in by resolved().
struct IdConfig {
  int iterations = 0;               ///< N
  double alpha = kPi / 4.0;         ///< sigma = alpha * d
  double gamma = 0.0;               ///< T = gamma * t; auto: 20 k
  double time_step = 1.0;           ///< k
  double h_v = 0.0;                 ///< auto: 4 h
  double h_x = 0.0;                 ///< auto: h
  double grad_tol = 0.0;            ///< auto: 1e-6 * weighted free measure
  int grad_max_iters = 500;
  double location_noise = 0.0;      ///< noise multiplier for location coordinates; auto: h_x / h_v
  std::uint64_t seed = 0;

  void validate() const;
  IdConfig resolved(double h, double free_measure) const;
};

struct TraceRecord {
  int iteration = 0;
  double candidate = 0.0;
  double best = 0.0;
  double seconds = 0.0;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  std::vector<std::vector<double>> ascent_values;  ///< objective after every ascent step, one list per ascent
};

/// Coverage field of one sensor plus its smoothed membership (expected mode only).
struct SensorField {
  ScalarField phi;
  std::vector<double> membership;
};

/// Objective evaluation with per-sensor field caching. A field is keyed by
/// the sensor's evaluation point and shape parameters; the occlusion sweep
/// is keyed by (evaluation point, range) so pure rotations skip it.
class Evaluator {
 public:
  Evaluator(const Environment& env, ObjectiveSpec spec);

  const Environment& environment() const { return *env_; }
  const ObjectiveSpec& spec() const { return spec_; }
  const std::vector<double>& weights() const { return weights_; }
  double free_measure() const { return free_measure_; }

  /// Throws InfeasibleError for an infeasible sensor. Uncached lookups still
  /// reuse a cached occlusion sweep.
  std::shared_ptr<const SensorField> field(const Sensor& sensor, bool cache = true);
  /// Objective value only; throws InfeasibleError for an infeasible sensor.
  double value(std::span<const Sensor> sensors);
  /// Full report (hard value, coverage degree, overlap).
  ObjectiveValue evaluate(std::span<const Sensor> sensors);

  /// Objective of a combined per-node array: the union field in
  /// deterministic mode, the product of non-detection probabilities in
  /// expected mode.
  double reduce(std::span<const double> combined);

  std::size_t sweep_count() const { return sweeps_; }
  void clear_cache();

 private:
  using FieldKey = std::array<double, 7>;
  using VisKey = std::array<double, 4>;

  std::shared_ptr<const VisibilityField> visibility(const Vec3& x, double range, bool cache);

  const Environment* env_;
  ObjectiveSpec spec_;
  std::vector<double> weights_;
  double free_measure_ = 0.0;
  std::size_t field_capacity_ = 64;
  std::size_t vis_capacity_ = 64;
  std::map<FieldKey, std::shared_ptr<const SensorField>> fields_;
  std::deque<FieldKey> field_order_;
  std::map<VisKey, std::shared_ptr<const VisibilityField>> vis_;
  std::deque<VisKey> vis_order_;
  std::size_t sweeps_ = 0;
  std::vector<double> scratch_eps_;
};

/// Central differences of the objective in the free coordinates: h_v for
/// angles, h_x for locations. A clamped coordinate uses the actual
/// perturbation; an infeasible side falls back to a one-sided difference.
/// Throws InfeasibleError if both sides of some coordinate are infeasible.
std::vector<double> gradient(Evaluator& eval, const Placement& placement, std::span<const double> params, double h_v,
                             double h_x);

struct AscentResult {
  std::vector<double> params;
  double value = 0.0;
  bool converged = false;
  int steps = 0;
  std::vector<double> history;
};

/// Euler ascent theta <- theta + k g with per-coordinate step caps (h_v for
/// angles, h_x for locations) that halve whenever that gradient component
/// flips sign. Stops after 3 consecutive steps with |dF| < grad_tol or at
/// grad_max_iters, and returns the best placement visited.
AscentResult gradient_ascent(Evaluator& eval, const Placement& placement, std::vector<double> params,
                             const IdConfig& config);

/// Euler-Maruyama: theta <- theta + k g + sigma sqrt(k) xi for ceil(T / k) steps.
std::vector<double> sde_segment(Evaluator& eval, const Placement& placement, std::vector<double> params, double sigma,
                                double horizon, const IdConfig& config, Rng& rng);

struct IdResult {
  std::vector<double> params;
  std::vector<Sensor> sensors;
  double initial_value = 0.0;
  double value = 0.0;
  RunTrace trace;
};

/// N rounds of (diffuse from the incumbent, ascend, keep if strictly
/// better). N = 0 runs a single ascent from the initial placement.
IdResult intermittent_diffusion(Evaluator& eval, const Placement& placement, std::vector<double> initial,
                                const IdConfig& config);

}  // namespace sensorplace
