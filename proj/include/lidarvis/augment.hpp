// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

// Visibility-consistent insertion of virtual objects into a scene sweep.
//
//   naive     scene + all virtual points, occlusion ignored
//   culling   virtual points hidden behind scene voxels are dropped; an object
//             whose occluded fraction exceeds drop_fraction is dropped whole
//   drilling  scene points are removed so that every virtual point is visible
//             and nothing the virtual objects hide remains

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lidarvis/grid.hpp"
#include "lidarvis/sweep.hpp"
#include "lidarvis/traversal.hpp"

namespace lidarvis {

struct OrientedBox {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d size = Eigen::Vector3d::Ones();  // length (x), width (y), height (z)
  double yaw = 0.0;                                // about +z, radians

  /// True when p lies inside the box grown by `margin` on every side.
  bool contains(const Eigen::Vector3d& p, double margin = 0.0) const;
};

struct VirtualObject {
  std::string label;
  Eigen::Matrix3Xd points;  // scene frame
  OrientedBox box;

  /// Throws ArgumentError if there are no points, a coordinate is not finite,
  /// or a point lies outside the box inflated by 0.5 m.
  void validate() const;
};

enum class AugmentMode { kNaive, kCulling, kDrilling };

std::string_view to_string(AugmentMode mode);
/// Accepts "naive", "culling" and "drilling"; throws ArgumentError otherwise.
AugmentMode parse_augment_mode(std::string_view text);

struct AugmentReport {
  AugmentMode mode = AugmentMode::kNaive;
  std::vector<std::size_t> kept_points;      // per object, in input order
  std::vector<std::size_t> occluded_points;  // per object (culling only)
  std::vector<std::size_t> objects_dropped;  // object indices
  std::size_t scene_points_removed = 0;
};

struct AugmentResult {
  Sweep sweep;
  AugmentReport report;
};

/// Scene points followed by every object's points (t = 0).
Sweep insert_naive(const Sweep& scene, const std::vector<VirtualObject>& objects);

/// Culls virtual points whose ray from the sensor enters a scene-occupied
/// voxel before the point's own voxel.
AugmentResult cull(const Sweep& scene, const std::vector<VirtualObject>& objects,
                   const GridConfig& config, double drop_fraction = 0.5, int workers = 1);

/// Removes scene points whose ray enters a virtual-occupied voxel before
/// reaching them, and scene points lying in any voxel a virtual point's ray
/// passes through before its own voxel.
AugmentResult drill(const Sweep& scene, const std::vector<VirtualObject>& objects,
                    const GridConfig& config, int workers = 1);

AugmentResult augment(const Sweep& scene, const std::vector<VirtualObject>& objects,
                      AugmentMode mode, const GridConfig& config, double drop_fraction = 0.5,
                      int workers = 1);

/// Voxels holding at least one of `points` (columns, xyz in the first rows).
template <typename Derived>
VoxelMask occupied_mask(const Eigen::MatrixBase<Derived>& points, const GridConfig& config) {
  const GridDims dims = grid_dims(config);
  VoxelMask mask(dims);
  for (Eigen::Index n = 0; n < points.cols(); ++n) {
    if (const auto v = world_to_voxel(points.col(n).template head<3>(), config, dims)) {
      mask.set(*v);
    }
  }
  return mask;
}

// Object files: points in a sweep file plus a sidecar "<path>.box" of
// key=value lines: label, center (3 numbers), size (3 numbers), yaw.
VirtualObject read_object(const std::filesystem::path& path);
void write_object(const std::filesystem::path& path, const VirtualObject& object);

/// Text form of a report: one key=value per line.
std::string format_report(const AugmentReport& report,
                          const std::vector<VirtualObject>& objects);

}  // namespace lidarvis
