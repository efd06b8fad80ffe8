// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include "lidarvis/occupancy.hpp"

namespace lidarvis {

void OccupancyParams::validate() const {
  if (!(p_hit > 0.5 && p_hit < 1.0)) throw ConfigError("p_hit must lie in (0.5, 1)");
  if (!(p_miss > 0.0 && p_miss < 0.5)) throw ConfigError("p_miss must lie in (0, 0.5)");
  if (!(std::isfinite(clamp_min) && clamp_min < 0.0)) {
    throw ConfigError("clamp_min must be a negative log-odds value");
  }
  if (!(std::isfinite(clamp_max) && clamp_max > 0.0)) {
    throw ConfigError("clamp_max must be a positive log-odds value");
  }
}

OccupancyGrid build_temporal_occupancy(std::span<const Sweep> sweeps,
                                       std::span<const Pose> poses, const GridConfig& config,
                                       const OccupancyParams& params, int workers) {
  if (sweeps.empty()) throw ArgumentError("build_temporal_occupancy: no sweeps");
  if (sweeps.size() != poses.size()) {
    throw ArgumentError("build_temporal_occupancy: " + std::to_string(sweeps.size()) +
                        " sweeps but " + std::to_string(poses.size()) + " poses");
  }
  for (std::size_t n = 1; n < sweeps.size(); ++n) {
    if (sweeps[n].timestamp < sweeps[n - 1].timestamp) {
      throw ArgumentError("build_temporal_occupancy: sweep " + std::to_string(n) +
                          " is older than its predecessor");
    }
  }

  OccupancyGrid grid(config, params);
  const Pose& reference = poses.back();
  const double t_ref = sweeps.back().timestamp;
  for (std::size_t n = 0; n < sweeps.size(); ++n) {
    const Sweep local = motion_compensate(sweeps[n], poses[n], reference, t_ref);
    update_with_sweep(grid, compute_visibility(local, config, workers));
  }
  return grid;
}

}  // namespace lidarvis
