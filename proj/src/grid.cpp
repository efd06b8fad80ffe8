// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include "lidarvis/grid.hpp"

#include <limits>
#include <sstream>

namespace lidarvis {
namespace {

constexpr double kSpanTolerance = 1e-9;

int axis_cells(double lo, double hi, double voxel_size, const char* axis) {
  if (!(std::isfinite(lo) && std::isfinite(hi))) {
    throw ConfigError(std::string("non-finite extent on axis ") + axis);
  }
  if (!(lo < hi)) {
    throw ConfigError(std::string("empty extent on axis ") + axis);
  }
  const double ratio = (hi - lo) / voxel_size;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > kSpanTolerance * ratio || rounded < 1.0) {
    std::ostringstream msg;
    msg << "span on axis " << axis << " (" << hi - lo
        << ") is not an integer multiple of voxel_size " << voxel_size;
    throw ConfigError(msg.str());
  }
  if (rounded > static_cast<double>(std::numeric_limits<int>::max() / 4)) {
    throw ConfigError(std::string("too many cells on axis ") + axis);
  }
  return static_cast<int>(rounded);
}

}  // namespace

void validate(const GridConfig& config) { (void)grid_dims(config); }

GridDims grid_dims(const GridConfig& config) {
  if (!(std::isfinite(config.voxel_size) && config.voxel_size > 0.0)) {
    throw ConfigError("voxel_size must be positive");
  }
  return {axis_cells(config.x_min, config.x_max, config.voxel_size, "x"),
          axis_cells(config.y_min, config.y_max, config.voxel_size, "y"),
          axis_cells(config.z_min, config.z_max, config.voxel_size, "z")};
}

Eigen::Vector3d voxel_center(const VoxelIndex& v, const GridConfig& config) {
  if (!in_range(v, grid_dims(config))) {
    throw ArgumentError("voxel index out of range: " + to_string(v));
  }
  const Eigen::Vector3d idx(v.i, v.j, v.k);
  return config.min_corner() + (idx.array() + 0.5).matrix() * config.voxel_size;
}

std::string to_string(const VoxelIndex& v) {
  std::ostringstream out;
  out << '(' << v.i << ',' << v.j << ',' << v.k << ')';
  return out.str();
}

}  // namespace lidarvis
