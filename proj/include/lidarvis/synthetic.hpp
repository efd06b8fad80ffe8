// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "lidarvis/grid.hpp"
#include "lidarvis/sweep.hpp"

namespace lidarvis {

/// Beam pattern of the synthetic spinning LiDAR used by the benchmark.
struct BeamPattern {
  int beams = 32;
  double elevation_min_deg = -30.0;
  double elevation_max_deg = 10.0;
  double range_min = 2.0;
  double range_max = 70.0;
};

/// `points` returns on `beams` evenly spaced elevation rings around
/// `origin`, uniform azimuth within each ring, ranges uniform in
/// [range_min, range_max]. Deterministic for a given seed.
Sweep synthetic_sweep(std::size_t points, std::uint64_t seed, const BeamPattern& pattern = {},
                      const Eigen::Vector3d& origin = Eigen::Vector3d::Zero());

struct BenchResult {
  double mean_ms = 0.0;
  double std_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
};

/// Times compute_visibility on `sweep` `iters` times.
BenchResult benchmark_visibility(const Sweep& sweep, const GridConfig& config, int iters,
                                 int workers);

}  // namespace lidarvis
