#include "sensorplace/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "sensorplace/errors.hpp"

namespace sensorplace {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

void IdConfig::validate() const {
  if (iterations < 0) throw ConfigError("iterations must be >= 0");
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
  if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
  if (!(time_step > 0.0)) throw ConfigError("time_step must be positive");
  if (!(h_v >= 0.0) || !(h_x >= 0.0)) throw ConfigError("finite-difference steps must be positive");
  if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol must be positive");
  if (grad_max_iters < 0) throw ConfigError("grad_max_iters must be >= 0");
  if (!(location_noise >= 0.0)) throw ConfigError("location_noise must be >= 0");
}

IdConfig IdConfig::resolved(double h, double free_measure) const {
  validate();
  IdConfig c = *this;
  if (c.gamma == 0.0) c.gamma = 20.0 * c.time_step;
  if (c.h_v == 0.0) c.h_v = 4.0 * h;
  if (c.h_x == 0.0) c.h_x = h;
  if (c.grad_tol == 0.0) c.grad_tol = 1e-6 * free_measure;
  if (c.location_noise == 0.0) c.location_noise = c.h_x / c.h_v;
  return c;
}

// ---------------------------------------------------------------------------

Evaluator::Evaluator(const Environment& env, ObjectiveSpec spec) : env_(&env), spec_(std::move(spec)) {
  spec_.validate();
  weights_ = objective_weights(env, spec_);
  for (double w : weights_) free_measure_ += w;
  const double bytes = 8.0 * static_cast<double>(env.grid().size()) *
                       (spec_.mode == ObjectiveMode::Expected ? 2.0 : 1.0);
  field_capacity_ = static_cast<std::size_t>(std::clamp(256e6 / bytes, 8.0, 512.0));
  vis_capacity_ = static_cast<std::size_t>(std::clamp(128e6 / (8.0 * env.grid().size()), 8.0, 512.0));
}

void Evaluator::clear_cache() {
  fields_.clear();
  field_order_.clear();
  vis_.clear();
  vis_order_.clear();
}

std::shared_ptr<const VisibilityField> Evaluator::visibility(const Vec3& x, double range, bool cache) {
  const VisKey key{x.x, x.y, x.z, range};
  if (auto it = vis_.find(key); it != vis_.end()) return it->second;
  auto vis = std::make_shared<const VisibilityField>(sweep_visibility(*env_, x, range));
  ++sweeps_;
  if (cache) {
    vis_.emplace(key, vis);
    vis_order_.push_back(key);
    while (vis_order_.size() > vis_capacity_) {
      vis_.erase(vis_order_.front());
      vis_order_.pop_front();
    }
  }
  return vis;
}

std::shared_ptr<const SensorField> Evaluator::field(const Sensor& sensor, bool cache) {
  check_sensor(*env_, sensor);
  Sensor s = sensor;
  s.direction = wrap_angle(s.direction);
  if (env_->dim() == 3) {
    s.polar = std::clamp(s.polar, kPolarClamp, kPi - kPolarClamp);
  } else {
    s.polar = 0.0;
  }
  const Vec3 x = sensor_position(*env_, s);
  const FieldKey key{x.x, x.y, x.z, s.range, s.direction, s.polar, s.width};
  if (auto it = fields_.find(key); it != fields_.end()) return it->second;

  auto vis = visibility(x, s.range, cache);
  auto out = std::make_shared<SensorField>();
  out->phi = apply_sensor_cuts(*vis, s);
  if (spec_.mode == ObjectiveMode::Expected) out->membership = smoothed_membership(out->phi);
  if (cache) {
    fields_.emplace(key, out);
    field_order_.push_back(key);
    while (field_order_.size() > field_capacity_) {
      fields_.erase(field_order_.front());
      field_order_.pop_front();
    }
  }
  return out;
}

double Evaluator::reduce(std::span<const double> combined) {
  double acc = 0.0;
  if (spec_.mode == ObjectiveMode::Expected) {
    for (std::size_t n = 0; n < combined.size(); ++n) acc += weights_[n] * (1.0 - combined[n]);
    return acc;
  }
  epsilon_values(env_->grid(), combined, scratch_eps_);
  for (std::size_t n = 0; n < combined.size(); ++n) acc += weights_[n] * heaviside_reg(combined[n], scratch_eps_[n]);
  return acc;
}

double Evaluator::value(std::span<const Sensor> sensors) {
  if (sensors.empty()) return 0.0;
  const std::size_t n_nodes = env_->grid().size();
  std::vector<double> combined;
  if (spec_.mode == ObjectiveMode::Expected) {
    combined.assign(n_nodes, 1.0);
    for (const auto& s : sensors) {
      const auto f = field(s);
      const double works = 1.0 - s.failure;
      for (std::size_t n = 0; n < n_nodes; ++n) combined[n] *= 1.0 - f->membership[n] * works;
    }
  } else {
    combined = field(sensors.front())->phi.values;
    for (std::size_t k = 1; k < sensors.size(); ++k) {
      const auto f = field(sensors[k]);
      for (std::size_t n = 0; n < n_nodes; ++n) combined[n] = std::max(combined[n], f->phi.values[n]);
    }
  }
  return reduce(combined);
}

ObjectiveValue Evaluator::evaluate(std::span<const Sensor> sensors) {
  if (sensors.empty()) {
    ObjectiveValue out;
    out.mode = spec_.mode;
    out.coverage_degree = ScalarField(env_->grid(), FieldRole::Other);
    out.overlap = CountField{env_->grid(), std::vector<int>(env_->grid().size(), 0)};
    return out;
  }
  std::vector<ScalarField> phis;
  phis.reserve(sensors.size());
  for (const auto& s : sensors) phis.push_back(field(s)->phi);
  if (spec_.mode == ObjectiveMode::Expected) return expected_coverage(*env_, phis, sensors, spec_);
  ObjectiveValue out = coverage_area(*env_, union_coverage(phis), spec_);
  out.overlap = overlap_count(phis);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool feasible_all(const Environment& env, std::span<const Sensor> sensors, std::span<const int> which) {
  for (int k : which) {
    if (!is_feasible(env, sensors[static_cast<std::size_t>(k)])) return false;
  }
  return true;
}

/// Objective probes around one base placement. Single-sensor perturbations
/// reuse the other sensors' combined contribution.
class ProbeContext {
 public:
  ProbeContext(Evaluator& eval, const Placement& placement, std::span<const double> params)
      : eval_(eval), placement_(placement), base_params_(params.begin(), params.end()) {
    sensors_ = placement.expand(base_params_);
    fields_.reserve(sensors_.size());
    for (const auto& s : sensors_) fields_.push_back(eval.field(s));
  }

  /// nullopt when the perturbed placement is infeasible.
  std::optional<double> probe(std::size_t param, double shifted) {
    std::vector<double> p = base_params_;
    p[param] = shifted;
    const auto sensors = placement_.expand(p);
    const auto affected = placement_.affected(param);
    const auto& env = eval_.environment();
    if (!feasible_all(env, sensors, affected)) return std::nullopt;
    if (affected.size() != 1) return eval_.value(sensors);

    const auto k = static_cast<std::size_t>(affected.front());
    prepare_others(k);
    const auto f = eval_.field(sensors[k], false);
    const std::size_t n_nodes = env.grid().size();
    combined_.resize(n_nodes);
    if (eval_.spec().mode == ObjectiveMode::Expected) {
      const double works = 1.0 - sensors[k].failure;
      for (std::size_t n = 0; n < n_nodes; ++n) combined_[n] = others_[n] * (1.0 - f->membership[n] * works);
    } else if (sensors_.size() == 1) {
      combined_ = f->phi.values;
    } else {
      for (std::size_t n = 0; n < n_nodes; ++n) combined_[n] = std::max(others_[n], f->phi.values[n]);
    }
    return eval_.reduce(combined_);
  }

 private:
  void prepare_others(std::size_t k) {
    if (others_for_ == k) return;
    others_for_ = k;
    const std::size_t n_nodes = eval_.environment().grid().size();
    const bool expected = eval_.spec().mode == ObjectiveMode::Expected;
    others_.assign(n_nodes, expected ? 1.0 : -std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < sensors_.size(); ++j) {
      if (j == k) continue;
      const auto& f = *fields_[j];
      if (expected) {
        const double works = 1.0 - sensors_[j].failure;
        for (std::size_t n = 0; n < n_nodes; ++n) others_[n] *= 1.0 - f.membership[n] * works;
      } else {
        for (std::size_t n = 0; n < n_nodes; ++n) others_[n] = std::max(others_[n], f.phi.values[n]);
      }
    }
  }

  Evaluator& eval_;
  const Placement& placement_;
  std::vector<double> base_params_;
  std::vector<Sensor> sensors_;
  std::vector<std::shared_ptr<const SensorField>> fields_;
  std::size_t others_for_ = std::numeric_limits<std::size_t>::max();
  std::vector<double> others_;
  std::vector<double> combined_;
};

std::vector<double> gradient_impl(Evaluator& eval, const Placement& placement, std::span<const double> params,
                                  double h_v, double h_x, bool strict) {
  ProbeContext ctx(eval, placement, params);
  const auto info = placement.params();
  std::vector<double> g(params.size(), 0.0);
  std::optional<double> center;
  for (std::size_t l = 0; l < params.size(); ++l) {
    const double h = info[l].angular() ? h_v : h_x;
    std::array<double, 2> shifted{params[l] + h, params[l] - h};
    std::array<double, 2> delta{h, -h};
    if (!info[l].periodic) {
      for (int s = 0; s < 2; ++s) {
        shifted[s] = std::clamp(shifted[s], info[l].lower, info[l].upper);
        delta[s] = shifted[s] - params[l];
      }
    }
    std::array<double, 2> value{};
    for (int s = 0; s < 2; ++s) {
      std::optional<double> v;
      if (delta[s] != 0.0) v = ctx.probe(l, shifted[s]);
      if (!v) {
        if (!center) center = eval.value(placement.expand(params));
        v = *center;
        delta[s] = 0.0;
      }
      value[s] = *v;
    }
    if (delta[0] == delta[1]) {
      if (strict && info[l].upper > info[l].lower) {
        throw InfeasibleError("both perturbations of coordinate " + std::to_string(l) + " are infeasible");
      }
      continue;
    }
    g[l] = (value[0] - value[1]) / (delta[0] - delta[1]);
  }
  return g;
}

double step_cap(const ParamInfo& info, const IdConfig& c) { return info.angular() ? c.h_v : c.h_x; }

/// Applies delta coordinate by coordinate, dropping updates that make an
/// affected sensor infeasible.
std::vector<double> apply_update(const Environment& env, const Placement& placement, std::vector<double> params,
                                 std::span<const double> delta) {
  for (std::size_t l = 0; l < params.size(); ++l) {
    if (delta[l] == 0.0) continue;
    std::vector<double> trial = params;
    trial[l] += delta[l];
    placement.normalize(trial);
    if (trial[l] == params[l]) continue;
    const auto sensors = placement.expand(trial);
    if (feasible_all(env, sensors, placement.affected(l))) params = std::move(trial);
  }
  return params;
}

}  // namespace

std::vector<double> gradient(Evaluator& eval, const Placement& placement, std::span<const double> params, double h_v,
                             double h_x) {
  if (!(h_v > 0.0) || !(h_x > 0.0)) throw ConfigError("finite-difference steps must be positive");
  return gradient_impl(eval, placement, params, h_v, h_x, true);
}

AscentResult gradient_ascent(Evaluator& eval, const Placement& placement, std::vector<double> params,
                             const IdConfig& config) {
  const auto& env = eval.environment();
  placement.normalize(params);
  AscentResult out;
  double current = eval.value(placement.expand(params));
  out.params = params;
  out.value = current;
  out.history.push_back(current);
  const auto info = placement.params();
  std::vector<double> cap(params.size());
  for (std::size_t l = 0; l < params.size(); ++l) cap[l] = step_cap(info[l], config);
  std::vector<double> previous_g(params.size(), 0.0);
  int quiet = 0;
  for (int it = 0; it < config.grad_max_iters; ++it) {
    const auto g = gradient_impl(eval, placement, params, config.h_v, config.h_x, false);
    std::vector<double> delta(params.size());
    bool moving = false;
    for (std::size_t l = 0; l < params.size(); ++l) {
      if (g[l] * previous_g[l] < 0.0) cap[l] *= 0.5;
      delta[l] = std::clamp(config.time_step * g[l], -cap[l], cap[l]);
      moving = moving || delta[l] != 0.0;
    }
    previous_g = g;
    if (!moving) {
      out.converged = true;
      break;
    }
    auto next = apply_update(env, placement, params, delta);
    if (next == params) {
      out.converged = true;
      break;
    }
    const double value = eval.value(placement.expand(next));
    ++out.steps;
    out.history.push_back(value);
    quiet = std::abs(value - current) < config.grad_tol ? quiet + 1 : 0;
    params = std::move(next);
    current = value;
    if (value > out.value) {
      out.value = value;
      out.params = params;
    }
    if (quiet >= 3) {
      out.converged = true;
      break;
    }
  }
  return out;
}

std::vector<double> sde_segment(Evaluator& eval, const Placement& placement, std::vector<double> params, double sigma,
                                double horizon, const IdConfig& config, Rng& rng) {
  if (!(sigma >= 0.0) || !(horizon >= 0.0)) throw ConfigError("sigma and T must be >= 0");
  const auto& env = eval.environment();
  placement.normalize(params);
  const auto steps = static_cast<long>(std::ceil(horizon / config.time_step - 1e-12));
  const auto info = placement.params();
  const double root_k = std::sqrt(config.time_step);
  for (long it = 0; it < steps; ++it) {
    const auto g = gradient_impl(eval, placement, params, config.h_v, config.h_x, false);
    std::vector<double> delta(params.size());
    for (std::size_t l = 0; l < params.size(); ++l) {
      const double cap = step_cap(info[l], config);
      const double scale = info[l].angular() ? 1.0 : config.location_noise;
      delta[l] = std::clamp(config.time_step * g[l], -cap, cap) + sigma * scale * root_k * rng.normal();
    }
    params = apply_update(env, placement, std::move(params), delta);
  }
  return params;
}

IdResult intermittent_diffusion(Evaluator& eval, const Placement& placement, std::vector<double> initial,
                                const IdConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  placement.normalize(initial);
  IdResult out;
  out.initial_value = eval.value(placement.expand(initial));
  out.trace.records.push_back({0, out.initial_value, out.initial_value, elapsed()});

  if (config.iterations == 0) {
    auto r = gradient_ascent(eval, placement, initial, config);
    out.trace.ascent_values.push_back(r.history);
    out.params = r.params;
    out.value = r.value;
    out.trace.records.push_back({1, r.value, r.value, elapsed()});
  } else {
    Rng rng(config.seed);
    out.params = initial;
    out.value = out.initial_value;
    for (int j = 1; j <= config.iterations; ++j) {
      const double d = rng.uniform();
      const double t = rng.uniform();
      const auto diffused = sde_segment(eval, placement, out.params, config.alpha * d, config.gamma * t, config, rng);
      auto r = gradient_ascent(eval, placement, diffused, config);
      out.trace.ascent_values.push_back(r.history);
      if (r.value > out.value) {
        out.value = r.value;
        out.params = r.params;
      }
      out.trace.records.push_back({j, r.value, out.value, elapsed()});
    }
  }
  out.sensors = placement.expand(out.params);
  return out;
}

}  // namespace sensorplace
