// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include "lidarvis/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lidarvis/visibility.hpp"

namespace lidarvis {

Sweep synthetic_sweep(std::size_t points, std::uint64_t seed, const BeamPattern& pattern,
                      const Eigen::Vector3d& origin) {
  if (pattern.beams < 1) throw ArgumentError("beam pattern needs at least one beam");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> range(pattern.range_min, pattern.range_max);

  Sweep sweep;
  sweep.sensor_origin = origin;
  sweep.points.resize(4, static_cast<Eigen::Index>(points));
  const auto beams = static_cast<std::size_t>(pattern.beams);
  constexpr double kDeg = std::numbers::pi / 180.0;
  Eigen::Index col = 0;
  for (std::size_t b = 0; b < beams; ++b) {
    const std::size_t on_ring = points / beams + (b < points % beams ? 1 : 0);
    if (on_ring == 0) continue;
    const double elevation =
        beams == 1 ? pattern.elevation_min_deg
                   : pattern.elevation_min_deg + (pattern.elevation_max_deg -
                                                  pattern.elevation_min_deg) *
                                                     static_cast<double>(b) /
                                                     static_cast<double>(beams - 1);
    const double el = elevation * kDeg;
    const double azimuth_step = 2.0 * std::numbers::pi / static_cast<double>(on_ring);
    for (std::size_t a = 0; a < on_ring; ++a) {
      const double az = azimuth_step * static_cast<double>(a);
      const double r = range(rng);
      const Eigen::Vector3d dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                                std::sin(el));
      sweep.points.col(col).head<3>() = origin + r * dir;
      sweep.points(3, col) = 0.0;
      ++col;
    }
  }
  return sweep;
}

BenchResult benchmark_visibility(const Sweep& sweep, const GridConfig& config, int iters,
                                 int workers) {
  if (iters < 1) throw ArgumentError("iters must be positive");
  std::vector<double> ms;
  ms.reserve(static_cast<std::size_t>(iters));
  for (int it = 0; it < iters; ++it) {
    const auto start = std::chrono::steady_clock::now();
    (void)compute_visibility(sweep, config, workers);
    const auto stop = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  BenchResult result;
  double sum = 0.0;
  for (const double m : ms) sum += m;
  result.mean_ms = sum / static_cast<double>(ms.size());
  double var = 0.0;
  for (const double m : ms) var += (m - result.mean_ms) * (m - result.mean_ms);
  result.std_ms = std::sqrt(var / static_cast<double>(ms.size()));
  result.min_ms = *std::min_element(ms.begin(), ms.end());
  result.max_ms = *std::max_element(ms.begin(), ms.end());
  return result;
}

}  // namespace lidarvis
