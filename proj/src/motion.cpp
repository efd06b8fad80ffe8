// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "lidarvis/sweep.hpp"

namespace lidarvis {

void Pose::validate() const {
  if (!translation.allFinite() || !rotation.coeffs().allFinite()) {
    throw ArgumentError("pose has non-finite components");
  }
  if (std::abs(rotation.norm() - 1.0) > 1e-6) {
    throw ArgumentError("pose rotation is not a unit quaternion (norm " +
                        std::to_string(rotation.norm()) + ")");
  }
}

Eigen::Isometry3d Pose::isometry() const {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = rotation.toRotationMatrix();
  t.translation() = translation;
  return t;
}

Sweep motion_compensate(const Sweep& sweep, const Pose& pose_sweep, const Pose& pose_ref,
                        double t_ref) {
  pose_sweep.validate();
  pose_ref.validate();
  const Eigen::Isometry3d to_ref = pose_ref.isometry().inverse() * pose_sweep.isometry();

  Sweep out;
  out.timestamp = sweep.timestamp;
  out.sensor_origin = to_ref * sweep.sensor_origin;
  out.points.resize(4, sweep.points.cols());
  out.points.topRows<3>() = (to_ref.linear() * sweep.points.topRows<3>()).colwise() +
                            to_ref.translation();
  out.points.row(3).setConstant(sweep.timestamp - t_ref);
  return out;
}

Sweep aggregate_sweeps(std::span<const Sweep> sweeps) {
  if (sweeps.empty()) throw ArgumentError("aggregate_sweeps: empty sweep list");
  Eigen::Index total = 0;
  for (const auto& s : sweeps) total += s.points.cols();

  Sweep out;
  out.sensor_origin = sweeps.back().sensor_origin;
  out.timestamp = sweeps.back().timestamp;
  out.points.resize(4, total);
  Eigen::Index at = 0;
  for (const auto& s : sweeps) {
    out.points.middleCols(at, s.points.cols()) = s.points;
    at += s.points.cols();
  }
  return out;
}

}  // namespace lidarvis
