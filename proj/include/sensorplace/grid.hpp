#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sensorplace/geometry.hpp"

namespace sensorplace {

/// Uniform node lattice. Planar grids keep a single node along z.
/// Linear node index is i + nx * (j + ny * k), i.e. x varies fastest.
struct Grid {
  int dim = 2;
  Vec3 origin;
  double h = 1.0;
  std::array<int, 3> nodes{1, 1, 1};

  std::size_t size() const {
    return static_cast<std::size_t>(nodes[0]) * static_cast<std::size_t>(nodes[1]) *
           static_cast<std::size_t>(nodes[2]);
  }
  std::size_t index(int i, int j, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nodes[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(nodes[1]) * static_cast<std::size_t>(k));
  }
  std::array<int, 3> coords(std::size_t idx) const {
    const auto nx = static_cast<std::size_t>(nodes[0]);
    const auto ny = static_cast<std::size_t>(nodes[1]);
    return {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny), static_cast<int>(idx / (nx * ny))};
  }
  Vec3 node(int i, int j, int k = 0) const {
    return {origin.x + i * h, origin.y + j * h, dim == 3 ? origin.z + k * h : origin.z};
  }
  Vec3 node(std::size_t idx) const {
    const auto c = coords(idx);
    return node(c[0], c[1], c[2]);
  }
  /// Index of the grid node nearest to p (clamped to the lattice).
  std::size_t nearest(const Vec3& p) const;

  /// Same lattice metadata (exact comparison; grids are built from the same inputs).
  bool matches(const Grid& o) const {
    return dim == o.dim && origin == o.origin && h == o.h && nodes == o.nodes;
  }
};

/// Trapezoidal quadrature weights: h^dim times a factor 1/2 per axis on
/// which the node sits at the end of the lattice.
std::vector<double> trapezoid_weights(const Grid& grid);

enum class FieldRole : std::uint8_t { Environment, Coverage, Weight, Other };

std::string_view to_string(FieldRole role);

/// Grid-sampled scalar function.
struct ScalarField {
  Grid grid;
  FieldRole role = FieldRole::Other;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(Grid g, FieldRole r, double fill = 0.0) : grid(g), role(r), values(g.size(), fill) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double at(int i, int j, int k = 0) const { return values[grid.index(i, j, k)]; }

  /// Multilinear interpolation, clamped to the lattice.
  double sample(const Vec3& p) const;
};

/// Integer-valued companion of ScalarField (overlap counts, masks).
struct CountField {
  Grid grid;
  std::vector<int> values;
};

/// Nearest-node resampling of `field` onto `target`.
ScalarField resample_nearest(const ScalarField& field, const Grid& target);

}  // namespace sensorplace
