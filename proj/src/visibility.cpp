// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include "lidarvis/visibility.hpp"

#include <atomic>

#include "lidarvis/parallel.hpp"
#include "lidarvis/traversal.hpp"

namespace lidarvis {
namespace {

constexpr std::size_t kRayGrain = 512;
constexpr std::size_t kNoVoxel = static_cast<std::size_t>(-1);

}  // namespace

VisibilityVolume::VisibilityVolume(const GridConfig& config)
    : config_(config), dims_(grid_dims(config)), states_(dims_.cells(), VoxelState::kUnknown) {}

VisibilityCensus census(const VisibilityVolume& vis) {
  VisibilityCensus c;
  for (const VoxelState s : vis.states()) {
    switch (s) {
      case VoxelState::kUnknown: ++c.unknown; break;
      case VoxelState::kFree: ++c.free; break;
      case VoxelState::kOccupied: ++c.occupied; break;
    }
  }
  return c;
}

// Two passes. The first marks every in-grid endpoint voxel OCCUPIED. The
// second walks all rays concurrently and writes FREE into any visited voxel
// that is still UNKNOWN. OCCUPIED cells are read-only during the second pass
// and every writer stores the same FREE value, so the result does not depend
// on scheduling, worker count or point order.
VisibilityVolume compute_visibility(const Sweep& sweep, const GridConfig& config, int workers,
                                    VisibilityStats* stats) {
  if (!sweep.sensor_origin.allFinite()) throw ArgumentError("sensor origin is not finite");
  if (workers < 1) throw ArgumentError("workers must be positive");

  VisibilityVolume vis(config);
  const GridDims dims = vis.dims();
  const Eigen::Vector3d origin = sweep.sensor_origin;
  const std::size_t count = sweep.size();

  std::vector<std::size_t> endpoint_voxel(count, kNoVoxel);
  std::vector<std::uint8_t> degenerate(count, 0);
  parallel_for_chunks(count, workers, 4096, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      const Eigen::Vector3d p = sweep.xyz(static_cast<Eigen::Index>(n));
      if ((p - origin).norm() < kMinRayLength) {
        degenerate[n] = 1;
        continue;
      }
      if (const auto v = world_to_voxel(p, config, dims)) endpoint_voxel[n] = linear_index(*v, dims);
    }
  });

  auto states = vis.states();
  for (const std::size_t idx : endpoint_voxel) {
    if (idx != kNoVoxel) states[idx] = VoxelState::kOccupied;
  }

  auto* cells = reinterpret_cast<std::uint8_t*>(states.data());
  constexpr auto kFree = static_cast<std::uint8_t>(VoxelState::kFree);
  constexpr auto kUnknown = static_cast<std::uint8_t>(VoxelState::kUnknown);
  parallel_for_chunks(count, workers, kRayGrain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      if (degenerate[n]) continue;
      const Eigen::Vector3d p = sweep.xyz(static_cast<Eigen::Index>(n));
      walk_voxels(origin, p, config, dims, [cells](const VoxelStep& s) {
        if (!s.endpoint) {
          std::atomic_ref<std::uint8_t> cell(cells[s.linear]);
          if (cell.load(std::memory_order_relaxed) == kUnknown) {
            cell.store(kFree, std::memory_order_relaxed);
          }
        }
        return true;
      });
    }
  });

  if (stats) {
    *stats = {};
    stats->rays = count;
    for (std::size_t n = 0; n < count; ++n) {
      if (degenerate[n]) {
        ++stats->degenerate_rays;
      } else if (endpoint_voxel[n] == kNoVoxel) {
        ++stats->out_of_grid_endpoints;
      }
    }
    stats->rays -= stats->degenerate_rays;
  }
  return vis;
}

}  // namespace lidarvis
