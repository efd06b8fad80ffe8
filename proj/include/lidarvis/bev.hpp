// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

// Bird's-eye-view export: the vertical axis of a volume becomes channels.

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lidarvis/occupancy.hpp"
#include "lidarvis/visibility.hpp"

namespace lidarvis {

/// Dense (width=nx, height=ny, channels=nz) float map. Values are stored in
/// (i, j, channel) order, which matches the voxel linear layout.
struct BevMap {
  int width = 0;
  int height = 0;
  int channels = 0;
  Eigen::ArrayXf values;

  float operator()(int i, int j, int channel) const {
    return values[(static_cast<Eigen::Index>(i) * height + j) * channels + channel];
  }
};

inline constexpr float kBevFree = 0.0f;
inline constexpr float kBevUnknown = 0.5f;
inline constexpr float kBevOccupied = 1.0f;

/// FREE -> 0, UNKNOWN -> 0.5, OCCUPIED -> 1.
BevMap visibility_to_bev(const VisibilityVolume& vis);

/// Inverse of visibility_to_bev. Throws ArgumentError on any value other than
/// 0, 0.5 or 1, or if the map shape does not match the config.
VisibilityVolume bev_to_visibility(const BevMap& map, const GridConfig& config);

/// Posterior occupancy probability per voxel.
BevMap occupancy_to_bev(const OccupancyGrid& grid);
BevMap occupancy_to_bev(const OccupancyVolume& volume);

// "BEVF" layout: char[4] magic, u32 width/height/channels, then f32
// little-endian values in (i, j, channel) order.
std::vector<char> encode_bev(const BevMap& map);
BevMap decode_bev(std::span<const char> bytes);
void write_bev(const std::filesystem::path& path, const BevMap& map);
BevMap read_bev(const std::filesystem::path& path);

/// 8-bit grayscale image of one channel, round-half-up(255 * value) per
/// pixel. Row r holds j = height - 1 - r and column c holds i, so +y points
/// up and +x to the right.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

/// Throws ArgumentError if `channel` is out of range.
GrayImage bev_slice(const BevMap& map, int channel);
/// Writes bev_slice(map, channel) as a binary PGM (P5).
void bev_slice_render(const BevMap& map, int channel, const std::filesystem::path& out);

}  // namespace lidarvis
