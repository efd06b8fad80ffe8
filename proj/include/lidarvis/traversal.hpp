// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

// Amanatides-Woo voxel traversal.
//
// The walker visits, in travel order, every voxel whose interior the segment
// origin -> endpoint crosses, clipped to the grid box. Consecutive voxels
// always share a face: when two or three boundaries are crossed at the same
// parameter the walker steps x, then y, then z.
//
// The number of steps per axis is fixed up front from integer cell indices:
// the distance to the endpoint voxel when the endpoint is inside the grid,
// the distance to the grid edge otherwise. Floating point only decides the
// order of the steps, so the walk always ends on the endpoint voxel (or at
// the box boundary) however the boundary parameters round.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lidarvis/grid.hpp"

namespace lidarvis {

enum class TraceStop : std::uint8_t {
  kReachedEndpoint,  // walked into the endpoint voxel
  kBlocked,          // entered a pre-occupied voxel before the endpoint voxel
  kLeftGrid,         // endpoint is outside the grid; walked to the box boundary
  kMissedGrid,       // segment never intersects the grid box
};

struct RayTrace {
  std::vector<VoxelIndex> visited;
  bool reached_endpoint = false;
  std::optional<VoxelIndex> endpoint_voxel;
  TraceStop stop = TraceStop::kMissedGrid;
};

/// One visited voxel as seen by a walker callback.
struct VoxelStep {
  VoxelIndex voxel;
  std::size_t linear = 0;
  bool first = false;     // first voxel of the clipped segment
  bool endpoint = false;  // the endpoint's own voxel (in-grid endpoints only)
};

/// Segments shorter than this are degenerate.
inline constexpr double kMinRayLength = 1e-12;

namespace detail {

struct SegmentClip {
  double t_enter = 0.0;
  double t_exit = 1.0;
  bool hit = false;
};

// Slab clip of u0 + t*du, t in [0,1], against the half-open box [0, n).
inline SegmentClip clip_to_box(const Eigen::Vector3d& u0, const Eigen::Vector3d& du,
                               const GridDims& dims) {
  const double extent[3] = {static_cast<double>(dims.nx), static_cast<double>(dims.ny),
                            static_cast<double>(dims.nz)};
  SegmentClip clip;
  for (int a = 0; a < 3; ++a) {
    if (du[a] == 0.0) {
      if (u0[a] < 0.0 || u0[a] >= extent[a]) return clip;
      continue;
    }
    double t0 = (0.0 - u0[a]) / du[a];
    double t1 = (extent[a] - u0[a]) / du[a];
    if (t0 > t1) std::swap(t0, t1);
    clip.t_enter = std::max(clip.t_enter, t0);
    clip.t_exit = std::min(clip.t_exit, t1);
  }
  clip.hit = clip.t_enter <= clip.t_exit;
  return clip;
}

inline int clamp_cell(double u, int n) {
  const double f = std::floor(u);
  if (f < 0.0) return 0;
  if (f >= n) return n - 1;
  return static_cast<int>(f);
}

}  // namespace detail

/// Walks the voxels of origin -> endpoint, calling `visit(const VoxelStep&)`
/// for each. The callback returns false to stop the walk early (the stop is
/// then reported as kBlocked). The caller guarantees `dims ==
/// grid_dims(config)`, finite inputs and a non-degenerate segment.
template <typename Visit>
TraceStop walk_voxels(const Eigen::Vector3d& origin, const Eigen::Vector3d& endpoint,
                      const GridConfig& config, const GridDims& dims, Visit&& visit) {
  const Eigen::Vector3d u0 = to_grid_units(origin, config);
  const Eigen::Vector3d u1 = to_grid_units(endpoint, config);
  const Eigen::Vector3d du = u1 - u0;
  const int n[3] = {dims.nx, dims.ny, dims.nz};

  const std::optional<VoxelIndex> end_voxel = world_to_voxel(endpoint, config, dims);
  const std::optional<VoxelIndex> start_voxel = world_to_voxel(origin, config, dims);

  int cell[3];
  if (start_voxel) {
    cell[0] = start_voxel->i;
    cell[1] = start_voxel->j;
    cell[2] = start_voxel->k;
  } else {
    const detail::SegmentClip clip = detail::clip_to_box(u0, du, dims);
    if (!clip.hit || clip.t_enter > 1.0 || clip.t_exit < 0.0) return TraceStop::kMissedGrid;
    const Eigen::Vector3d entry = u0 + clip.t_enter * du;
    for (int a = 0; a < 3; ++a) cell[a] = detail::clamp_cell(entry[a], n[a]);
  }

  int step[3];
  int offset[3];  // 1 when the next boundary is cell + 1
  double t_max[3];
  int remaining[3];
  const std::ptrdiff_t stride[3] = {static_cast<std::ptrdiff_t>(dims.ny) * dims.nz,
                                    static_cast<std::ptrdiff_t>(dims.nz), 1};
  std::ptrdiff_t advance[3];
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Each crossing is one correctly rounded division, so crossings that are
  // equal in exact arithmetic compare equal and the tie rule applies.
  const auto crossing = [&](int a) {
    return (static_cast<double>(cell[a] + offset[a]) - u0[a]) / du[a];
  };

  for (int a = 0; a < 3; ++a) {
    step[a] = du[a] > 0.0 ? 1 : (du[a] < 0.0 ? -1 : 0);
    offset[a] = step[a] > 0 ? 1 : 0;
    advance[a] = step[a] * stride[a];
    t_max[a] = step[a] == 0 ? kInf : crossing(a);
    if (end_voxel) {
      const int end_cell = a == 0 ? end_voxel->i : (a == 1 ? end_voxel->j : end_voxel->k);
      remaining[a] = std::max(0, (end_cell - cell[a]) * step[a]);
    } else {
      remaining[a] = step[a] > 0 ? n[a] - 1 - cell[a] : (step[a] < 0 ? cell[a] : 0);
    }
  }

  // Smallest crossing parameter; ties go to the lower axis.
  const auto next_axis = [&t_max] {
    return t_max[0] <= t_max[1] ? (t_max[0] <= t_max[2] ? 0 : 2)
                                : (t_max[1] <= t_max[2] ? 1 : 2);
  };

  std::size_t linear = linear_index({cell[0], cell[1], cell[2]}, dims);

  if (end_voxel) {
    // Exactly sum(remaining) steps lead to the endpoint voxel. An axis with
    // no steps left is never chosen again.
    int left = remaining[0] + remaining[1] + remaining[2];
    for (int a = 0; a < 3; ++a) {
      if (remaining[a] == 0) t_max[a] = kInf;
    }
    // If the clipped entry cell already lies past the endpoint cell on some
    // axis (rounding at the box face), the walk cannot arrive.
    const bool arrives = cell[0] + remaining[0] * step[0] == end_voxel->i &&
                         cell[1] + remaining[1] * step[1] == end_voxel->j &&
                         cell[2] + remaining[2] * step[2] == end_voxel->k;
    if (!visit(VoxelStep{{cell[0], cell[1], cell[2]}, linear, true, left == 0 && arrives})) {
      return TraceStop::kBlocked;
    }
    while (left > 0) {
      const int a = next_axis();
      cell[a] += step[a];
      linear = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(linear) + advance[a]);
      --left;
      t_max[a] = --remaining[a] == 0
                     ? kInf
                     : crossing(a);
      if (!visit(VoxelStep{{cell[0], cell[1], cell[2]}, linear, false, left == 0 && arrives})) {
        return TraceStop::kBlocked;
      }
    }
    return arrives ? TraceStop::kReachedEndpoint : TraceStop::kLeftGrid;
  }

  // Endpoint outside the grid: walk until the next step would leave it.
  if (!visit(VoxelStep{{cell[0], cell[1], cell[2]}, linear, true, false})) {
    return TraceStop::kBlocked;
  }
  for (;;) {
    const int a = next_axis();
    if (remaining[a] == 0) return TraceStop::kLeftGrid;
    --remaining[a];
    cell[a] += step[a];
    linear = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(linear) + advance[a]);
    t_max[a] = crossing(a);
    if (!visit(VoxelStep{{cell[0], cell[1], cell[2]}, linear, false, false})) {
      return TraceStop::kBlocked;
    }
  }
}

/// Voxels crossed by origin -> endpoint, clipped to the grid. Throws
/// ArgumentError for a degenerate (zero-length) or non-finite segment.
RayTrace traverse_ray(const Eigen::Vector3d& origin, const Eigen::Vector3d& endpoint,
                      const GridConfig& config);

/// Dense per-voxel blocker flags in the grid's linear layout.
struct VoxelMask {
  GridDims dims;
  std::vector<std::uint8_t> bits;

  VoxelMask() = default;
  explicit VoxelMask(const GridDims& d) : dims(d), bits(d.cells(), 0) {}

  bool test(std::size_t linear) const { return bits[linear] != 0; }
  void set(std::size_t linear) { bits[linear] = 1; }
  void set(const VoxelIndex& v) { bits[linear_index(v, dims)] = 1; }
  std::size_t count() const;
};

/// Like traverse_ray, but stops on entering any masked voxel before the
/// endpoint voxel. The endpoint's own voxel never blocks, and neither does the
/// voxel holding an in-grid origin (the sensor's own cell). Throws
/// ArgumentError if the mask dims differ from the grid.
RayTrace traverse_until_preoccupied(const Eigen::Vector3d& origin,
                                    const Eigen::Vector3d& endpoint, const VoxelMask& blocked,
                                    const GridConfig& config);

/// Fast occlusion test with the same blocking rule as
/// traverse_until_preoccupied. Degenerate segments are never occluded.
bool is_occluded(const Eigen::Vector3d& origin, const Eigen::Vector3d& endpoint,
                 const VoxelMask& blocked, const GridConfig& config, const GridDims& dims);

}  // namespace lidarvis
