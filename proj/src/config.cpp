// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include "lidarvis/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace lidarvis {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view text, std::string_view key, int line) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("line " + std::to_string(line) + ": bad number for " + std::string(key) +
                      ": \"" + std::string(text) + "\"");
  }
  return value;
}

}  // namespace

void EngineConfig::validate() const {
  lidarvis::validate(grid);
  occupancy.validate();
  if (!(cull_drop_fraction >= 0.0 && cull_drop_fraction <= 1.0)) {
    throw ConfigError("cull_drop_fraction must lie in [0, 1]");
  }
}

EngineConfig parse_config(std::string_view text) {
  EngineConfig cfg;
  const std::map<std::string_view, double*> slots = {
      {"x_min", &cfg.grid.x_min},
      {"x_max", &cfg.grid.x_max},
      {"y_min", &cfg.grid.y_min},
      {"y_max", &cfg.grid.y_max},
      {"z_min", &cfg.grid.z_min},
      {"z_max", &cfg.grid.z_max},
      {"voxel_size", &cfg.grid.voxel_size},
      {"p_hit", &cfg.occupancy.p_hit},
      {"p_miss", &cfg.occupancy.p_miss},
      {"clamp_min", &cfg.occupancy.clamp_min},
      {"clamp_max", &cfg.occupancy.clamp_max},
      {"cull_drop_fraction", &cfg.cull_drop_fraction},
  };

  std::set<std::string_view> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const auto slot = slots.find(key);
    if (slot == slots.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key \"" +
                        std::string(key) + "\"");
    }
    if (!seen.insert(slot->first).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key \"" +
                        std::string(key) + "\"");
    }
    *slot->second = parse_number(trim(line.substr(eq + 1)), key, line_no);
  }
  cfg.validate();
  return cfg;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace lidarvis
