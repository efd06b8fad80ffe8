// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace lidarvis {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct VoxelIndex {
  int i = 0;
  int j = 0;
  int k = 0;

  friend bool operator==(const VoxelIndex&, const VoxelIndex&) = default;
  friend auto operator<=>(const VoxelIndex&, const VoxelIndex&) = default;
};

struct GridDims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  std::size_t cells() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// Axis-aligned box discretized into cubic voxels of edge `voxel_size`.
///
/// Voxel (i, j, k) owns the half-open interval [min + i*s, min + (i+1)*s) on
/// each axis, so every point of the half-open box maps to exactly one voxel.
/// Linear layout is idx = (i*ny + j)*nz + k, which keeps a BEV pixel's
/// vertical column contiguous.
struct GridConfig {
  double x_min = -50.0;
  double x_max = 50.0;
  double y_min = -50.0;
  double y_max = 50.0;
  double z_min = -5.0;
  double z_max = 3.0;
  double voxel_size = 0.25;

  Eigen::Vector3d min_corner() const { return {x_min, y_min, z_min}; }
  Eigen::Vector3d max_corner() const { return {x_max, y_max, z_max}; }

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

/// Throws ConfigError if the extents are empty, the voxel size is not
/// positive, or a span is not an integer multiple of the voxel size.
void validate(const GridConfig& config);

/// Cell counts per axis. Throws ConfigError on an invalid config.
GridDims grid_dims(const GridConfig& config);

inline std::size_t linear_index(const VoxelIndex& v, const GridDims& dims) {
  return (static_cast<std::size_t>(v.i) * static_cast<std::size_t>(dims.ny) +
          static_cast<std::size_t>(v.j)) *
             static_cast<std::size_t>(dims.nz) +
         static_cast<std::size_t>(v.k);
}

inline VoxelIndex from_linear_index(std::size_t idx, const GridDims& dims) {
  const auto nz = static_cast<std::size_t>(dims.nz);
  const auto ny = static_cast<std::size_t>(dims.ny);
  VoxelIndex v;
  v.k = static_cast<int>(idx % nz);
  idx /= nz;
  v.j = static_cast<int>(idx % ny);
  v.i = static_cast<int>(idx / ny);
  return v;
}

inline bool in_range(const VoxelIndex& v, const GridDims& dims) {
  return v.i >= 0 && v.i < dims.nx && v.j >= 0 && v.j < dims.ny && v.k >= 0 &&
         v.k < dims.nz;
}

/// Continuous grid coordinates: (p - min) / voxel_size. Voxel boundaries sit
/// on integers. Both world_to_voxel and the ray walker go through this so
/// that they agree on which cell owns a point.
template <typename Derived>
Eigen::Vector3d to_grid_units(const Eigen::MatrixBase<Derived>& p,
                              const GridConfig& config) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  const Eigen::Vector3d q = p.template cast<double>();
  return (q - config.min_corner()) / config.voxel_size;
}

/// Voxel containing `p`, or nullopt when p lies outside [min, max) on any
/// axis. Assumes `dims == grid_dims(config)`.
template <typename Derived>
std::optional<VoxelIndex> world_to_voxel(const Eigen::MatrixBase<Derived>& p,
                                         const GridConfig& config,
                                         const GridDims& dims) {
  const Eigen::Vector3d u = to_grid_units(p, config);
  if (!u.allFinite()) return std::nullopt;
  const Eigen::Vector3d f = u.array().floor();
  if ((f.array() < 0.0).any()) return std::nullopt;
  if (f.x() >= dims.nx || f.y() >= dims.ny || f.z() >= dims.nz) return std::nullopt;
  return VoxelIndex{static_cast<int>(f.x()), static_cast<int>(f.y()),
                    static_cast<int>(f.z())};
}

template <typename Derived>
std::optional<VoxelIndex> world_to_voxel(const Eigen::MatrixBase<Derived>& p,
                                         const GridConfig& config) {
  return world_to_voxel(p, config, grid_dims(config));
}

/// Center of voxel `v`. Throws ArgumentError if `v` is out of range.
Eigen::Vector3d voxel_center(const VoxelIndex& v, const GridConfig& config);

std::string to_string(const VoxelIndex& v);

}  // namespace lidarvis
