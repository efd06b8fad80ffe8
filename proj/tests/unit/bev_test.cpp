// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lidarvis/bev.hpp"

namespace lidarvis {
namespace {

const GridConfig kSmall{0, 3, 0, 2, 0, 1, 0.5};  // 6 x 4 x 2

VisibilityVolume random_volume(const GridConfig& config, std::uint64_t seed) {
  VisibilityVolume vis(config);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> code(0, 2);
  for (std::size_t n = 0; n < vis.size(); ++n) vis.set(n, static_cast<VoxelState>(code(rng)));
  return vis;
}

TEST(VisibilityToBev, ShapeAndCodes) {
  VisibilityVolume vis(kSmall);
  vis.set({5, 3, 1}, VoxelState::kOccupied);
  vis.set({0, 1, 0}, VoxelState::kFree);
  const BevMap m = visibility_to_bev(vis);
  EXPECT_EQ(m.width, 6);
  EXPECT_EQ(m.height, 4);
  EXPECT_EQ(m.channels, 2);
  EXPECT_EQ(m(5, 3, 1), kBevOccupied);
  EXPECT_EQ(m(0, 1, 0), kBevFree);
  EXPECT_EQ(m(2, 2, 0), kBevUnknown);
}

TEST(VisibilityToBev, DefaultGridHas32Channels) {
  const BevMap m = visibility_to_bev(VisibilityVolume(GridConfig{}));
  EXPECT_EQ(m.width, 400);
  EXPECT_EQ(m.height, 400);
  EXPECT_EQ(m.channels, 32);
  EXPECT_EQ(m.values.size(), 400 * 400 * 32);
}

TEST(BevToVisibility, InvertsExactly) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const VisibilityVolume vis = random_volume(kSmall, seed);
    EXPECT_EQ(bev_to_visibility(decode_bev(encode_bev(visibility_to_bev(vis))), kSmall), vis);
  }
}

TEST(BevToVisibility, RejectsForeignValuesAndShapes) {
  BevMap m = visibility_to_bev(VisibilityVolume(kSmall));
  EXPECT_THROW(bev_to_visibility(m, GridConfig{}), ArgumentError);
  m.values[3] = 0.25f;
  EXPECT_THROW(bev_to_visibility(m, kSmall), ArgumentError);
}

TEST(OccupancyToBev, PosteriorPerVoxel) {
  OccupancyGrid g(kSmall);
  VisibilityVolume vis(kSmall);
  vis.set({1, 1, 1}, VoxelState::kOccupied);
  vis.set({2, 1, 1}, VoxelState::kFree);
  g.update(vis);
  const BevMap m = occupancy_to_bev(g);
  EXPECT_NEAR(m(1, 1, 1), 0.7f, 1e-6f);
  EXPECT_NEAR(m(2, 1, 1), 0.4f, 1e-6f);
  EXPECT_EQ(m(0, 0, 0), 0.5f);

  const OccupancyVolume vol = decode_occupancy(encode_occupancy(g));
  const BevMap from_file = occupancy_to_bev(vol);
  EXPECT_TRUE(from_file.values.isApprox(m.values, 1e-6f));
}

TEST(BevIo, FileRoundTripAndCorruption) {
  const BevMap m = visibility_to_bev(random_volume(kSmall, 9));
  const auto path = std::filesystem::temp_directory_path() / "lidarvis_bev_test.bev";
  write_bev(path, m);
  const BevMap back = read_bev(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.width, m.width);
  EXPECT_EQ(back.height, m.height);
  EXPECT_EQ(back.channels, m.channels);
  EXPECT_TRUE((back.values == m.values).all());

  auto bytes = encode_bev(m);
  bytes.resize(bytes.size() - 2);
  EXPECT_THROW(decode_bev(bytes), ParseError);
  bytes = encode_bev(m);
  bytes[1] = 'Z';
  EXPECT_THROW(decode_bev(bytes), ParseError);
}

TEST(BevSlice, OrientationAndRounding) {
  BevMap m;
  m.width = 3;
  m.height = 2;
  m.channels = 1;
  m.values = Eigen::ArrayXf::Zero(6);
  m.values[(2 * 2 + 1) * 1] = 1.0f;    // i = 2, j = 1: top right
  m.values[(0 * 2 + 0) * 1] = 0.5f;    // i = 0, j = 0: bottom left
  m.values[(1 * 2 + 0) * 1] = 0.002f;  // rounds to 1
  const GrayImage img = bev_slice(m, 0);
  ASSERT_EQ(img.width, 3);
  ASSERT_EQ(img.height, 2);
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{0, 0, 255, 128, 1, 0}));
  EXPECT_THROW(bev_slice(m, 1), ArgumentError);
  EXPECT_THROW(bev_slice(m, -1), ArgumentError);
}

TEST(BevSlice, WritesBinaryPgm) {
  const BevMap m = visibility_to_bev(random_volume(kSmall, 4));
  const auto path = std::filesystem::temp_directory_path() / "lidarvis_bev_test.pgm";
  bev_slice_render(m, 1, path);
  std::ifstream in(path, std::ios::binary);
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::filesystem::remove(path);
  const std::string header = "P5\n6 4\n255\n";
  ASSERT_EQ(data.size(), header.size() + 24);
  EXPECT_EQ(data.substr(0, header.size()), header);
  const GrayImage img = bev_slice(m, 1);
  EXPECT_EQ(data.substr(header.size()), std::string(img.pixels.begin(), img.pixels.end()));
}

}  // namespace
}  // namespace lidarvis
