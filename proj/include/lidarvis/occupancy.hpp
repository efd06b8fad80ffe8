// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

// Clamped log-odds occupancy fusion over a dense voxel grid.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lidarvis/grid.hpp"
#include "lidarvis/sweep.hpp"
#include "lidarvis/visibility.hpp"

namespace lidarvis {

inline double logit(double p) { return std::log(p / (1.0 - p)); }

template <typename Scalar>
Scalar logistic(Scalar logodds) {
  return Scalar(1) / (Scalar(1) + std::exp(-logodds));
}

/// Sensor model and clamping bounds. Defaults are the OctoMap ones:
/// p_hit 0.7, p_miss 0.4, clamping thresholds 0.12 / 0.97 in probability.
struct OccupancyParams {
  double p_hit = 0.7;
  double p_miss = 0.4;
  double clamp_min = logit(0.12);
  double clamp_max = logit(0.97);

  double hit_logodds() const { return logit(p_hit); }
  double miss_logodds() const { return logit(p_miss); }

  /// Throws ConfigError unless p_hit > 0.5 > p_miss (both in (0,1)) and
  /// clamp_min < 0 < clamp_max.
  void validate() const;

  friend bool operator==(const OccupancyParams&, const OccupancyParams&) = default;
};

template <typename Scalar>
class BasicOccupancyGrid {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  BasicOccupancyGrid(const GridConfig& config, const OccupancyParams& params = {})
      : config_(config), dims_(grid_dims(config)), params_(params) {
    params_.validate();
    logodds_ = Array::Zero(static_cast<Eigen::Index>(dims_.cells()));
  }

  const GridConfig& config() const { return config_; }
  const GridDims& dims() const { return dims_; }
  const OccupancyParams& params() const { return params_; }
  const Array& logodds() const { return logodds_; }

  Scalar at(const VoxelIndex& v) const {
    return logodds_[static_cast<Eigen::Index>(linear_index(v, dims_))];
  }

  /// Stores a log-odds value, clamped to the configured bounds.
  void set(std::size_t linear, Scalar value) {
    logodds_[static_cast<Eigen::Index>(linear)] =
        std::clamp(value, Scalar(params_.clamp_min), Scalar(params_.clamp_max));
  }

  /// One Bayes step: OCCUPIED cells add logit(p_hit), FREE cells add
  /// logit(p_miss), UNKNOWN cells are untouched. Results are clamped.
  void update(const VisibilityVolume& vis) {
    if (!(vis.config() == config_)) {
      throw ArgumentError("visibility volume grid does not match the occupancy grid");
    }
    const auto states = vis.states();
    const auto n = static_cast<Eigen::Index>(states.size());
    const Eigen::Map<const Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>> codes(
        reinterpret_cast<const std::uint8_t*>(states.data()), n);
    const Scalar hit = static_cast<Scalar>(params_.hit_logodds());
    const Scalar miss = static_cast<Scalar>(params_.miss_logodds());
    const Array delta =
        (codes == static_cast<std::uint8_t>(VoxelState::kOccupied))
            .select(Array::Constant(n, hit),
                    (codes == static_cast<std::uint8_t>(VoxelState::kFree))
                        .select(Array::Constant(n, miss), Array::Zero(n)));
    logodds_ = (logodds_ + delta)
                   .max(static_cast<Scalar>(params_.clamp_min))
                   .min(static_cast<Scalar>(params_.clamp_max));
  }

 private:
  GridConfig config_;
  GridDims dims_;
  OccupancyParams params_;
  Array logodds_;
};

using OccupancyGrid = BasicOccupancyGrid<double>;

template <typename Scalar>
void update_with_sweep(BasicOccupancyGrid<Scalar>& grid, const VisibilityVolume& vis) {
  grid.update(vis);
}

/// Per-voxel occupancy probability 1 / (1 + exp(-logodds)).
template <typename Scalar>
typename BasicOccupancyGrid<Scalar>::Array posterior(const BasicOccupancyGrid<Scalar>& grid) {
  return (Scalar(1) + (-grid.logodds()).exp()).inverse();
}

/// Fuses sweeps (sensor frames, ordered by timestamp) into the frame of the
/// last sweep. Each sweep is motion compensated, raycast from its own
/// transformed sensor origin and folded in with one Bayes step; only one
/// visibility volume is alive at a time. Throws ArgumentError on empty input,
/// a length mismatch, or decreasing timestamps.
OccupancyGrid build_temporal_occupancy(std::span<const Sweep> sweeps,
                                       std::span<const Pose> poses, const GridConfig& config,
                                       const OccupancyParams& params = {}, int workers = 1);

// "OVOL" layout: the VVOL header with magic "OVOL", then nx*ny*nz f32
// little-endian log-odds in linear order.
void write_occupancy(const std::filesystem::path& path, const OccupancyGrid& grid);
std::vector<char> encode_occupancy(const OccupancyGrid& grid);

struct OccupancyVolume {
  GridConfig config;
  GridDims dims;
  std::vector<float> logodds;
};

OccupancyVolume read_occupancy(const std::filesystem::path& path);
OccupancyVolume decode_occupancy(std::span<const char> bytes);

}  // namespace lidarvis
