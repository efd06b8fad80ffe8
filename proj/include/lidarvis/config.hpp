// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string_view>

#include "lidarvis/grid.hpp"
#include "lidarvis/occupancy.hpp"

namespace lidarvis {

/// Everything a config file can set. Keys that are absent keep these
/// defaults: the 100 m x 100 m x 8 m grid at 0.25 m and the OctoMap sensor
/// model.
struct EngineConfig {
  GridConfig grid;
  OccupancyParams occupancy;
  double cull_drop_fraction = 0.5;

  /// Throws ConfigError if any part is invalid.
  void validate() const;
};

/// Parses "key=value" lines. Blank lines and lines starting with '#' are
/// skipped. Unknown or repeated keys and malformed numbers throw ConfigError
/// naming the line.
EngineConfig parse_config(std::string_view text);
EngineConfig load_config(const std::filesystem::path& path);

}  // namespace lidarvis
