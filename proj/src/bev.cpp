// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include "lidarvis/bev.hpp"

#include <cmath>
#include <fstream>

#include "binary_io.hpp"

namespace lidarvis {
namespace {

constexpr std::string_view kBevMagic = "BEVF";

BevMap empty_map(const GridDims& dims) {
  BevMap map;
  map.width = dims.nx;
  map.height = dims.ny;
  map.channels = dims.nz;
  map.values.resize(static_cast<Eigen::Index>(dims.cells()));
  return map;
}

}  // namespace

BevMap visibility_to_bev(const VisibilityVolume& vis) {
  BevMap map = empty_map(vis.dims());
  constexpr float kCode[3] = {kBevUnknown, kBevFree, kBevOccupied};
  const auto states = vis.states();
  for (std::size_t n = 0; n < states.size(); ++n) {
    map.values[static_cast<Eigen::Index>(n)] = kCode[static_cast<std::uint8_t>(states[n])];
  }
  return map;
}

VisibilityVolume bev_to_visibility(const BevMap& map, const GridConfig& config) {
  VisibilityVolume vis(config);
  const GridDims dims = vis.dims();
  if (map.width != dims.nx || map.height != dims.ny || map.channels != dims.nz ||
      static_cast<std::size_t>(map.values.size()) != dims.cells()) {
    throw ArgumentError("BEV map shape does not match the grid");
  }
  for (Eigen::Index n = 0; n < map.values.size(); ++n) {
    const float v = map.values[n];
    VoxelState s;
    if (v == kBevFree) {
      s = VoxelState::kFree;
    } else if (v == kBevUnknown) {
      s = VoxelState::kUnknown;
    } else if (v == kBevOccupied) {
      s = VoxelState::kOccupied;
    } else {
      throw ArgumentError("BEV value " + std::to_string(v) + " is not a visibility code");
    }
    vis.set(static_cast<std::size_t>(n), s);
  }
  return vis;
}

BevMap occupancy_to_bev(const OccupancyGrid& grid) {
  BevMap map = empty_map(grid.dims());
  map.values = posterior(grid).cast<float>();
  return map;
}

BevMap occupancy_to_bev(const OccupancyVolume& volume) {
  BevMap map = empty_map(volume.dims);
  const Eigen::Map<const Eigen::ArrayXf> logodds(volume.logodds.data(),
                                                 static_cast<Eigen::Index>(volume.logodds.size()));
  map.values = (1.0f + (-logodds).exp()).inverse();
  return map;
}

std::vector<char> encode_bev(const BevMap& map) {
  detail::ByteWriter w;
  w.reserve(16 + static_cast<std::size_t>(map.values.size()) * sizeof(float));
  w.magic(kBevMagic);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(map.width));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(map.height));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(map.channels));
  for (const float v : map.values) w.put<float>(v);
  return std::move(w.buffer());
}

BevMap decode_bev(std::span<const char> bytes) {
  detail::ByteReader r(bytes);
  r.expect_magic(kBevMagic);
  BevMap map;
  map.width = static_cast<int>(r.get<std::uint32_t>("width"));
  map.height = static_cast<int>(r.get<std::uint32_t>("height"));
  map.channels = static_cast<int>(r.get<std::uint32_t>("channels"));
  const std::size_t n = static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height) *
                        static_cast<std::size_t>(map.channels);
  r.require(n * sizeof(float), "values");
  map.values.resize(static_cast<Eigen::Index>(n));
  for (auto& v : map.values) v = r.get<float>("value");
  if (r.remaining() != 0) throw ParseError("trailing bytes after BEV map", r.offset());
  return map;
}

void write_bev(const std::filesystem::path& path, const BevMap& map) {
  detail::write_file(path, encode_bev(map));
}

BevMap read_bev(const std::filesystem::path& path) { return decode_bev(detail::read_file(path)); }

GrayImage bev_slice(const BevMap& map, int channel) {
  if (channel < 0 || channel >= map.channels) {
    throw ArgumentError("channel " + std::to_string(channel) + " out of range [0, " +
                        std::to_string(map.channels) + ")");
  }
  GrayImage img{map.width, map.height, {}};
  img.pixels.resize(static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height));
  for (int row = 0; row < map.height; ++row) {
    const int j = map.height - 1 - row;
    for (int i = 0; i < map.width; ++i) {
      const float v = std::clamp(map(i, j, channel), 0.0f, 1.0f);
      const auto level = static_cast<std::uint8_t>(std::floor(255.0 * v + 0.5));
      img.pixels[static_cast<std::size_t>(row) * static_cast<std::size_t>(map.width) +
                 static_cast<std::size_t>(i)] = level;
    }
  }
  return img;
}

void bev_slice_render(const BevMap& map, int channel, const std::filesystem::path& out) {
  const GrayImage img = bev_slice(map, channel);
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + out.string() + " for writing");
  file << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  file.write(reinterpret_cast<const char*>(img.pixels.data()),
             static_cast<std::streamsize>(img.pixels.size()));
  if (!file) throw IoError("write failed: " + out.string());
}

}  // namespace lidarvis
