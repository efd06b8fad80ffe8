// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

// Scenes shared by the unit and acceptance suites.

#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Core>

#include "lidarvis/augment.hpp"
#include "lidarvis/sweep.hpp"
#include "lidarvis/traversal.hpp"

namespace lidarvis::testing {

inline Sweep make_sweep(const std::vector<Eigen::Vector3d>& pts,
                        const Eigen::Vector3d& origin = Eigen::Vector3d::Zero(),
                        double timestamp = 0.0) {
  Sweep s;
  s.sensor_origin = origin;
  s.timestamp = timestamp;
  s.points.resize(4, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t n = 0; n < pts.size(); ++n) {
    s.points.col(static_cast<Eigen::Index>(n)) << pts[n], 0.0;
  }
  return s;
}

/// Dense planar wall at x = `x`, spanning y in [-half_width, half_width] and
/// z in [z_lo, z_hi], sampled every `spacing` meters.
inline Sweep wall_scene(double x = 5.0, double half_width = 3.0, double z_lo = -1.5,
                        double z_hi = 1.5, double spacing = 0.05) {
  std::vector<Eigen::Vector3d> pts;
  for (double y = -half_width; y <= half_width + 1e-9; y += spacing) {
    for (double z = z_lo; z <= z_hi + 1e-9; z += spacing) pts.emplace_back(x, y, z);
  }
  return make_sweep(pts);
}

/// Solid box of points on a regular lattice, labeled `label`.
inline VirtualObject box_object(const Eigen::Vector3d& center, const Eigen::Vector3d& size,
                                const std::string& label = "truck", double spacing = 0.1) {
  VirtualObject obj;
  obj.label = label;
  obj.box.center = center;
  obj.box.size = size;
  std::vector<Eigen::Vector3d> pts;
  const Eigen::Vector3d lo = center - 0.5 * size;
  for (double x = lo.x(); x <= lo.x() + size.x() + 1e-9; x += spacing) {
    for (double y = lo.y(); y <= lo.y() + size.y() + 1e-9; y += spacing) {
      for (double z = lo.z(); z <= lo.z() + size.z() + 1e-9; z += spacing) {
        pts.emplace_back(x, y, z);
      }
    }
  }
  obj.points.resize(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t n = 0; n < pts.size(); ++n) obj.points.col(static_cast<Eigen::Index>(n)) = pts[n];
  return obj;
}

/// Uniform random points in the grid box (slightly beyond it when `spill` > 0).
inline Sweep random_sweep(std::mt19937_64& rng, std::size_t count, const GridConfig& config,
                          double spill = 0.0) {
  std::uniform_real_distribution<double> ux(config.x_min - spill, config.x_max + spill);
  std::uniform_real_distribution<double> uy(config.y_min - spill, config.y_max + spill);
  std::uniform_real_distribution<double> uz(config.z_min - spill, config.z_max + spill);
  std::uniform_real_distribution<double> uo(-2.0, 2.0);
  Sweep s;
  s.sensor_origin = Eigen::Vector3d(uo(rng), uo(rng), 0.5 * uo(rng));
  s.points.resize(4, static_cast<Eigen::Index>(count));
  for (std::size_t n = 0; n < count; ++n) {
    s.points.col(static_cast<Eigen::Index>(n)) << ux(rng), uy(rng), uz(rng), 0.0;
  }
  return s;
}

/// Voxels a set of rays passes through before reaching their own voxel,
/// excluding the sensor's cell. Built from traverse_ray, independent of the
/// drilling code path.
inline std::set<VoxelIndex> sightline_voxels(const Eigen::Vector3d& origin,
                                             const Eigen::Matrix3Xd& targets,
                                             const GridConfig& config) {
  std::set<VoxelIndex> out;
  const auto origin_voxel = world_to_voxel(origin, config);
  for (Eigen::Index n = 0; n < targets.cols(); ++n) {
    const RayTrace trace = traverse_ray(origin, targets.col(n), config);
    for (std::size_t v = 0; v < trace.visited.size(); ++v) {
      const bool is_end = trace.reached_endpoint && v + 1 == trace.visited.size();
      if (is_end || (origin_voxel && trace.visited[v] == *origin_voxel)) continue;
      out.insert(trace.visited[v]);
    }
  }
  return out;
}

}  // namespace lidarvis::testing
