// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "lidarvis/sweep.hpp"

namespace lidarvis {
namespace {

constexpr std::string_view kSweepMagic = "VSWP";
constexpr std::size_t kRecordBytes = 4 * sizeof(float);

bool is_text_path(const std::filesystem::path& path) { return path.extension() == ".txt"; }

Sweep read_text_sweep(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  Sweep sweep;
  std::vector<Eigen::Vector4d> points;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first[0] == '#') {
      std::string key;
      fields >> key;
      if (key == "origin") {
        if (!(fields >> sweep.sensor_origin.x() >> sweep.sensor_origin.y() >>
              sweep.sensor_origin.z()) ||
            !sweep.sensor_origin.allFinite()) {
          throw ParseError("bad origin header", line_no);
        }
      } else if (key == "timestamp") {
        if (!(fields >> sweep.timestamp) || !std::isfinite(sweep.timestamp)) {
          throw ParseError("bad timestamp header", line_no);
        }
      }
      continue;
    }
    Eigen::Vector4d p = Eigen::Vector4d::Zero();
    std::istringstream row(line);
    if (!(row >> p[0] >> p[1] >> p[2])) {
      throw ParseError("point " + std::to_string(points.size()) + ": expected \"x y z [t]\"",
                       line_no,
                       static_cast<std::int64_t>(points.size()));
    }
    if (!(row >> p[3])) p[3] = 0.0;
    if (!p.allFinite()) {
      throw ParseError("non-finite value in point " + std::to_string(points.size()), line_no,
                       static_cast<std::int64_t>(points.size()));
    }
    points.push_back(p);
  }

  sweep.points.resize(4, static_cast<Eigen::Index>(points.size()));
  for (std::size_t n = 0; n < points.size(); ++n) {
    sweep.points.col(static_cast<Eigen::Index>(n)) = points[n];
  }
  return sweep;
}

void write_text_sweep(const std::filesystem::path& path, const Sweep& sweep) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "# origin " << sweep.sensor_origin.x() << ' ' << sweep.sensor_origin.y() << ' '
      << sweep.sensor_origin.z() << '\n';
  out << "# timestamp " << sweep.timestamp << '\n';
  out.precision(9);
  for (Eigen::Index n = 0; n < sweep.points.cols(); ++n) {
    const auto p = sweep.points.col(n);
    out << static_cast<float>(p[0]) << ' ' << static_cast<float>(p[1]) << ' '
        << static_cast<float>(p[2]) << ' ' << static_cast<float>(p[3]) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::vector<char> encode_sweep(const Sweep& sweep) {
  detail::ByteWriter w;
  w.reserve(46 + sweep.size() * kRecordBytes);
  w.magic(kSweepMagic);
  w.put<std::uint16_t>(kSweepFormatVersion);
  w.put<double>(sweep.sensor_origin.x());
  w.put<double>(sweep.sensor_origin.y());
  w.put<double>(sweep.sensor_origin.z());
  w.put<double>(sweep.timestamp);
  w.put<std::uint64_t>(sweep.size());
  for (Eigen::Index n = 0; n < sweep.points.cols(); ++n) {
    for (int c = 0; c < 4; ++c) w.put<float>(static_cast<float>(sweep.points(c, n)));
  }
  return std::move(w.buffer());
}

Sweep decode_sweep(std::span<const char> bytes) {
  detail::ByteReader r(bytes);
  r.expect_magic(kSweepMagic);
  const std::size_t version_at = r.offset();
  const auto version = r.get<std::uint16_t>("version");
  if (version != kSweepFormatVersion) {
    throw ParseError("unsupported VSWP version " + std::to_string(version), version_at);
  }
  Sweep sweep;
  const std::size_t header_at = r.offset();
  sweep.sensor_origin.x() = r.get<double>("origin");
  sweep.sensor_origin.y() = r.get<double>("origin");
  sweep.sensor_origin.z() = r.get<double>("origin");
  sweep.timestamp = r.get<double>("timestamp");
  if (!sweep.sensor_origin.allFinite() || !std::isfinite(sweep.timestamp)) {
    throw ParseError("non-finite sweep header", header_at);
  }
  const auto count = r.get<std::uint64_t>("count");
  if (count > r.remaining() / kRecordBytes) {
    throw ParseError("truncated payload: header declares " + std::to_string(count) +
                         " records",
                     r.offset());
  }
  sweep.points.resize(4, static_cast<Eigen::Index>(count));
  for (std::uint64_t n = 0; n < count; ++n) {
    const std::size_t at = r.offset();
    for (int c = 0; c < 4; ++c) {
      const float v = r.get<float>("record");
      if (!std::isfinite(v)) {
        throw ParseError("non-finite value in record " + std::to_string(n), at,
                         static_cast<std::int64_t>(n));
      }
      sweep.points(c, static_cast<Eigen::Index>(n)) = v;
    }
  }
  if (r.remaining() != 0) {
    throw ParseError("trailing bytes after last record", r.offset());
  }
  return sweep;
}

Sweep read_sweep(const std::filesystem::path& path) {
  if (is_text_path(path)) return read_text_sweep(path);
  const auto data = detail::read_file(path);
  return decode_sweep(data);
}

void write_sweep(const std::filesystem::path& path, const Sweep& sweep) {
  if (is_text_path(path)) {
    write_text_sweep(path, sweep);
    return;
  }
  const auto data = encode_sweep(sweep);
  detail::write_file(path, data);
}

std::vector<TimedPose> read_poses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<TimedPose> poses;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    TimedPose tp;
    double qw, qx, qy, qz;
    if (!(fields >> tp.timestamp >> tp.pose.translation.x() >> tp.pose.translation.y() >>
          tp.pose.translation.z() >> qw >> qx >> qy >> qz)) {
      throw ParseError("expected \"timestamp tx ty tz qw qx qy qz\"", line_no);
    }
    tp.pose.rotation = Eigen::Quaterniond(qw, qx, qy, qz);
    try {
      tp.pose.validate();
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), line_no);
    }
    poses.push_back(tp);
  }
  return poses;
}

}  // namespace lidarvis
