#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sensorplace/environment.hpp"
#include "sensorplace/grid.hpp"
#include "sensorplace/visibility.hpp"

namespace sensorplace {

enum class ObjectiveMode : std::uint8_t { Deterministic, Expected };

std::string_view to_string(ObjectiveMode mode);

/// What is being maximised: plain coverage area V or the failure-aware
/// expectation E[V], optionally weighted by an importance field.
struct ObjectiveSpec {
  ObjectiveMode mode = ObjectiveMode::Deterministic;
  std::optional<ScalarField> weight;  ///< absent means w == 1
  bool band = false;                  ///< weight is a 0/1 band indicator

  void validate() const;
};

struct ObjectiveValue {
  double value = 0.0;
  double hard_value = 0.0;  ///< same functional with a sharp Heaviside
  ObjectiveMode mode = ObjectiveMode::Deterministic;
  std::string epsilon_policy = "eps=(h/2)|grad phi|_l1";
  ScalarField coverage_degree;  ///< per-node covered fraction (diagnostic)
  CountField overlap;           ///< per-node count of covering sensors (diagnostic)
};

/// Piecewise-linear regularised Heaviside; eps == 0 gives the sharp step (1 iff phi > 0).
inline double heaviside_reg(double phi, double eps) {
  if (eps <= 0.0) return phi > 0.0 ? 1.0 : 0.0;
  if (phi >= eps) return 1.0;
  if (phi <= -eps) return 0.0;
  return 0.5 * (1.0 + phi / eps);
}

/// Pointwise smoothing width (h/2) * |grad phi|_1, central differences in
/// the interior and one-sided at the lattice ends.
ScalarField epsilon_field(const ScalarField& phi);
void epsilon_values(const ScalarField& phi, std::vector<double>& out);
void epsilon_values(const Grid& grid, std::span<const double> phi, std::vector<double>& out);

/// H_eps(phi) per node, with eps from epsilon_field.
std::vector<double> smoothed_membership(const ScalarField& phi);

/// Per-node quadrature weight combined with the importance weight; zero
/// strictly inside obstacles.
std::vector<double> objective_weights(const Environment& env, const ObjectiveSpec& spec);
/// Upper bound of every objective value: the weighted measure of D minus the obstacle interiors.
double weighted_free_measure(const Environment& env, const ObjectiveSpec& spec);

/// V: trapezoidal integral of w * H_eps(phi) over the union field.
ObjectiveValue coverage_area(const Environment& env, const ScalarField& union_phi, const ObjectiveSpec& spec);

/// E[V]: integral of w * (1 - prod_k p~_k), p~_k = 1 - H_eps(phi_k) (1 - p_k).
ObjectiveValue expected_coverage(const Environment& env, std::span<const ScalarField> fields,
                                 std::span<const Sensor> sensors, const ObjectiveSpec& spec);

/// Number of sensors with phi_k > 0 at each node.
CountField overlap_count(std::span<const ScalarField> fields);

/// Importance weight: 1 on free nodes the anchor cannot see, 1 inside the
/// optional box [box_lower, box_upper], 0 elsewhere.
ScalarField blind_spot_weight(const Environment& env, const Sensor& anchor, std::optional<Box> box);

/// Band indicator: 1 on nodes inside `outer` and not strictly inside `inner`.
ScalarField band_weight(const Environment& env, const Polygon& outer, const Polygon& inner);
/// Band indicator: 1 on free nodes within `width` of obstacle `obstacle`.
ScalarField band_weight(const Environment& env, int obstacle, double width);

}  // namespace sensorplace
