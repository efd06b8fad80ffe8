// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lidarvis/grid.hpp"
#include "lidarvis/sweep.hpp"

namespace lidarvis {

/// Ordered so that max() is the per-sweep join: OCCUPIED beats FREE beats
/// UNKNOWN.
enum class VoxelState : std::uint8_t { kUnknown = 0, kFree = 1, kOccupied = 2 };

/// Dense ternary visibility for one sweep.
class VisibilityVolume {
 public:
  VisibilityVolume() = default;
  /// All-UNKNOWN volume. Throws ConfigError on an invalid config.
  explicit VisibilityVolume(const GridConfig& config);

  const GridConfig& config() const { return config_; }
  const GridDims& dims() const { return dims_; }
  std::size_t size() const { return states_.size(); }

  VoxelState operator[](std::size_t linear) const { return states_[linear]; }
  VoxelState at(const VoxelIndex& v) const { return states_[linear_index(v, dims_)]; }
  void set(const VoxelIndex& v, VoxelState s) { states_[linear_index(v, dims_)] = s; }
  void set(std::size_t linear, VoxelState s) { states_[linear] = s; }

  std::span<const VoxelState> states() const { return states_; }
  std::span<VoxelState> states() { return states_; }

  friend bool operator==(const VisibilityVolume&, const VisibilityVolume&) = default;

 private:
  GridConfig config_;
  GridDims dims_;
  std::vector<VoxelState> states_;
};

struct VisibilityCensus {
  std::size_t unknown = 0;
  std::size_t free = 0;
  std::size_t occupied = 0;
};

VisibilityCensus census(const VisibilityVolume& vis);

struct VisibilityStats {
  std::size_t rays = 0;
  std::size_t degenerate_rays = 0;       // skipped: point within 1e-12 m of the origin
  std::size_t out_of_grid_endpoints = 0; // still cast; contribute free space only
};

/// Casts a ray from the sweep's sensor origin to every point. The voxel
/// holding an in-grid point becomes OCCUPIED; every other voxel a ray passes
/// through becomes FREE unless some point occupies it. Output is identical for
/// any worker count and any point order.
VisibilityVolume compute_visibility(const Sweep& sweep, const GridConfig& config,
                                    int workers = 1, VisibilityStats* stats = nullptr);

// "VVOL" layout (little-endian): char[4] magic, u16 version, u32 nx/ny/nz,
// f64 x_min/y_min/z_min/voxel_size, then nx*ny*nz state bytes in linear order.
inline constexpr std::uint16_t kVolumeFormatVersion = 1;

void write_visibility(const std::filesystem::path& path, const VisibilityVolume& vis);
VisibilityVolume read_visibility(const std::filesystem::path& path);
std::vector<char> encode_visibility(const VisibilityVolume& vis);
VisibilityVolume decode_visibility(std::span<const char> bytes);

}  // namespace lidarvis
