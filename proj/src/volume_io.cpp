// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include "binary_io.hpp"
#include "lidarvis/occupancy.hpp"
#include "lidarvis/visibility.hpp"

namespace lidarvis {
namespace {

constexpr std::string_view kVisibilityMagic = "VVOL";
constexpr std::string_view kOccupancyMagic = "OVOL";

void put_header(detail::ByteWriter& w, std::string_view magic, const GridConfig& config,
                const GridDims& dims) {
  w.magic(magic);
  w.put<std::uint16_t>(kVolumeFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(dims.nx));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(dims.ny));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(dims.nz));
  w.put<double>(config.x_min);
  w.put<double>(config.y_min);
  w.put<double>(config.z_min);
  w.put<double>(config.voxel_size);
}

struct Header {
  GridConfig config;
  GridDims dims;
};

Header get_header(detail::ByteReader& r, std::string_view magic) {
  r.expect_magic(magic);
  const std::size_t version_at = r.offset();
  const auto version = r.get<std::uint16_t>("version");
  if (version != kVolumeFormatVersion) {
    throw ParseError("unsupported volume version " + std::to_string(version), version_at);
  }
  const std::size_t dims_at = r.offset();
  const auto nx = r.get<std::uint32_t>("nx");
  const auto ny = r.get<std::uint32_t>("ny");
  const auto nz = r.get<std::uint32_t>("nz");
  Header h;
  h.config.x_min = r.get<double>("x_min");
  h.config.y_min = r.get<double>("y_min");
  h.config.z_min = r.get<double>("z_min");
  h.config.voxel_size = r.get<double>("voxel_size");
  h.config.x_max = h.config.x_min + nx * h.config.voxel_size;
  h.config.y_max = h.config.y_min + ny * h.config.voxel_size;
  h.config.z_max = h.config.z_min + nz * h.config.voxel_size;
  try {
    h.dims = grid_dims(h.config);
  } catch (const ConfigError& e) {
    throw ParseError(std::string("bad grid header: ") + e.what(), dims_at);
  }
  if (h.dims.nx != static_cast<int>(nx) || h.dims.ny != static_cast<int>(ny) ||
      h.dims.nz != static_cast<int>(nz)) {
    throw ParseError("grid header dims are inconsistent with the extents", dims_at);
  }
  return h;
}

}  // namespace

std::vector<char> encode_visibility(const VisibilityVolume& vis) {
  detail::ByteWriter w;
  w.reserve(50 + vis.size());
  put_header(w, kVisibilityMagic, vis.config(), vis.dims());
  const auto states = vis.states();
  w.bytes({reinterpret_cast<const char*>(states.data()), states.size()});
  return std::move(w.buffer());
}

VisibilityVolume decode_visibility(std::span<const char> bytes) {
  detail::ByteReader r(bytes);
  const Header h = get_header(r, kVisibilityMagic);
  VisibilityVolume vis(h.config);
  const std::size_t payload_at = r.offset();
  const auto payload = r.take(h.dims.cells(), "voxel states");
  auto states = vis.states();
  for (std::size_t n = 0; n < payload.size(); ++n) {
    const auto code = static_cast<std::uint8_t>(payload[n]);
    if (code > static_cast<std::uint8_t>(VoxelState::kOccupied)) {
      throw ParseError("invalid voxel state " + std::to_string(code), payload_at + n);
    }
    states[n] = static_cast<VoxelState>(code);
  }
  if (r.remaining() != 0) throw ParseError("trailing bytes after volume", r.offset());
  return vis;
}

void write_visibility(const std::filesystem::path& path, const VisibilityVolume& vis) {
  detail::write_file(path, encode_visibility(vis));
}

VisibilityVolume read_visibility(const std::filesystem::path& path) {
  return decode_visibility(detail::read_file(path));
}

std::vector<char> encode_occupancy(const OccupancyGrid& grid) {
  detail::ByteWriter w;
  w.reserve(50 + grid.dims().cells() * sizeof(float));
  put_header(w, kOccupancyMagic, grid.config(), grid.dims());
  for (const double l : grid.logodds()) w.put<float>(static_cast<float>(l));
  return std::move(w.buffer());
}

OccupancyVolume decode_occupancy(std::span<const char> bytes) {
  detail::ByteReader r(bytes);
  const Header h = get_header(r, kOccupancyMagic);
  OccupancyVolume out{h.config, h.dims, {}};
  r.require(h.dims.cells() * sizeof(float), "log-odds payload");
  out.logodds.resize(h.dims.cells());
  for (auto& l : out.logodds) l = r.get<float>("log-odds");
  if (r.remaining() != 0) throw ParseError("trailing bytes after volume", r.offset());
  return out;
}

void write_occupancy(const std::filesystem::path& path, const OccupancyGrid& grid) {
  detail::write_file(path, encode_occupancy(grid));
}

OccupancyVolume read_occupancy(const std::filesystem::path& path) {
  return decode_occupancy(detail::read_file(path));
}

}  // namespace lidarvis
