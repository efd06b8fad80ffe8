// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include "lidarvis/traversal.hpp"

#include <algorithm>

namespace lidarvis {
namespace {

void check_segment(const Eigen::Vector3d& origin, const Eigen::Vector3d& endpoint) {
  if (!origin.allFinite() || !endpoint.allFinite()) {
    throw ArgumentError("ray has non-finite origin or endpoint");
  }
  if ((endpoint - origin).norm() < kMinRayLength) {
    throw ArgumentError("degenerate ray: origin and endpoint coincide");
  }
}

}  // namespace

RayTrace traverse_ray(const Eigen::Vector3d& origin, const Eigen::Vector3d& endpoint,
                      const GridConfig& config) {
  check_segment(origin, endpoint);
  const GridDims dims = grid_dims(config);
  RayTrace trace;
  trace.endpoint_voxel = world_to_voxel(endpoint, config, dims);
  trace.stop = walk_voxels(origin, endpoint, config, dims, [&](const VoxelStep& s) {
    trace.visited.push_back(s.voxel);
    return true;
  });
  trace.reached_endpoint = trace.stop == TraceStop::kReachedEndpoint;
  return trace;
}

std::size_t VoxelMask::count() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

RayTrace traverse_until_preoccupied(const Eigen::Vector3d& origin,
                                    const Eigen::Vector3d& endpoint, const VoxelMask& blocked,
                                    const GridConfig& config) {
  check_segment(origin, endpoint);
  const GridDims dims = grid_dims(config);
  if (!(blocked.dims == dims) || blocked.bits.size() != dims.cells()) {
    throw ArgumentError("blocker mask dims do not match the grid");
  }
  const bool origin_in_grid = world_to_voxel(origin, config, dims).has_value();
  RayTrace trace;
  trace.endpoint_voxel = world_to_voxel(endpoint, config, dims);
  trace.stop = walk_voxels(origin, endpoint, config, dims, [&](const VoxelStep& s) {
    trace.visited.push_back(s.voxel);
    if (s.endpoint || (s.first && origin_in_grid)) return true;
    return !blocked.test(s.linear);
  });
  trace.reached_endpoint = trace.stop == TraceStop::kReachedEndpoint;
  return trace;
}

bool is_occluded(const Eigen::Vector3d& origin, const Eigen::Vector3d& endpoint,
                 const VoxelMask& blocked, const GridConfig& config, const GridDims& dims) {
  if ((endpoint - origin).norm() < kMinRayLength) return false;
  const bool origin_in_grid = world_to_voxel(origin, config, dims).has_value();
  const TraceStop stop = walk_voxels(origin, endpoint, config, dims, [&](const VoxelStep& s) {
    if (s.endpoint || (s.first && origin_in_grid)) return true;
    return !blocked.test(s.linear);
  });
  return stop == TraceStop::kBlocked;
}

}  // namespace lidarvis
