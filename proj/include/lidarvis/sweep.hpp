// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "lidarvis/grid.hpp"

namespace lidarvis {

/// Columns are points (x, y, z, t); t is seconds relative to the owning
/// sweep's reference time.
using PointMatrix = Eigen::Matrix<double, 4, Eigen::Dynamic>;

/// One LiDAR capture.
struct Sweep {
  Eigen::Vector3d sensor_origin = Eigen::Vector3d::Zero();
  double timestamp = 0.0;
  PointMatrix points = PointMatrix(4, 0);

  std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
  bool empty() const { return points.cols() == 0; }
  auto xyz(Eigen::Index n) const { return points.col(n).head<3>(); }
};

/// Sensor-to-world rigid transform.
struct Pose {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();

  /// Throws ArgumentError unless |rotation| = 1 within 1e-6.
  void validate() const;
  Eigen::Isometry3d isometry() const;
};

struct TimedPose {
  double timestamp = 0.0;
  Pose pose;
};

/// Malformed input file. `offset()` is the byte offset (binary files) or line
/// number (text files) where parsing failed; `record()` is the point index
/// when the failure is tied to one record, -1 otherwise.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::uint64_t offset, std::int64_t record = -1)
      : std::runtime_error(what), offset_(offset), record_(record) {}
  std::uint64_t offset() const { return offset_; }
  std::int64_t record() const { return record_; }

 private:
  std::uint64_t offset_;
  std::int64_t record_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint16_t kSweepFormatVersion = 1;

// Binary "VSWP" layout (little-endian):
//   char[4] "VSWP", u16 version, f64 origin x/y/z, f64 timestamp, u64 count,
//   count * { f32 x, f32 y, f32 z, f32 t }
//
// Text layout (selected by a ".txt" extension): optional "# origin x y z" and
// "# timestamp t" header lines, then one "x y z [t]" point per line.

Sweep read_sweep(const std::filesystem::path& path);
void write_sweep(const std::filesystem::path& path, const Sweep& sweep);

std::vector<char> encode_sweep(const Sweep& sweep);
Sweep decode_sweep(std::span<const char> bytes);

/// Pose file: one "timestamp tx ty tz qw qx qy qz" line per sweep.
std::vector<TimedPose> read_poses(const std::filesystem::path& path);

/// Maps points and sensor origin through pose_ref^-1 * pose_sweep and
/// rewrites every point's t as sweep.timestamp - t_ref.
Sweep motion_compensate(const Sweep& sweep, const Pose& pose_sweep,
                        const Pose& pose_ref, double t_ref);

/// Concatenates sweeps already expressed in the reference frame. The last
/// sweep is the reference: its origin and timestamp are kept.
Sweep aggregate_sweeps(std::span<const Sweep> sweeps);

}  // namespace lidarvis
