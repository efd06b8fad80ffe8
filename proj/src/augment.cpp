// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#include "lidarvis/augment.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Geometry>

#include "lidarvis/parallel.hpp"

namespace lidarvis {
namespace {

constexpr double kBoxMargin = 0.5;
constexpr std::size_t kPointGrain = 256;

// All virtual points side by side, with the owning object of each column.
struct VirtualCloud {
  Eigen::Matrix3Xd points;
  std::vector<std::size_t> owner;
};

VirtualCloud flatten(const std::vector<VirtualObject>& objects) {
  Eigen::Index total = 0;
  for (const auto& o : objects) total += o.points.cols();
  VirtualCloud cloud;
  cloud.points.resize(3, total);
  cloud.owner.reserve(static_cast<std::size_t>(total));
  Eigen::Index at = 0;
  for (std::size_t id = 0; id < objects.size(); ++id) {
    const auto& pts = objects[id].points;
    cloud.points.middleCols(at, pts.cols()) = pts;
    cloud.owner.insert(cloud.owner.end(), static_cast<std::size_t>(pts.cols()), id);
    at += pts.cols();
  }
  return cloud;
}

void validate_all(const std::vector<VirtualObject>& objects) {
  for (std::size_t id = 0; id < objects.size(); ++id) {
    try {
      objects[id].validate();
    } catch (const ArgumentError& e) {
      throw ArgumentError("object " + std::to_string(id) + ": " + e.what());
    }
  }
}

// Copies the selected columns of `points` (xyz) into `out` starting at
// column `at`, with t = 0.
Eigen::Index append_points(PointMatrix& out, Eigen::Index at, const Eigen::Matrix3Xd& points,
                           const std::vector<std::uint8_t>* keep) {
  for (Eigen::Index n = 0; n < points.cols(); ++n) {
    if (keep && !(*keep)[static_cast<std::size_t>(n)]) continue;
    out.col(at).head<3>() = points.col(n);
    out(3, at) = 0.0;
    ++at;
  }
  return at;
}

std::vector<std::string> split_lines(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

bool OrientedBox::contains(const Eigen::Vector3d& p, double margin) const {
  const Eigen::Vector3d local = Eigen::AngleAxisd(-yaw, Eigen::Vector3d::UnitZ()) * (p - center);
  const Eigen::Vector3d half = 0.5 * size.array() + margin;
  return (local.array().abs() <= half.array()).all();
}

void VirtualObject::validate() const {
  if (points.cols() == 0) throw ArgumentError("virtual object \"" + label + "\" has no points");
  if (!points.allFinite()) {
    throw ArgumentError("virtual object \"" + label + "\" has non-finite points");
  }
  if (!box.center.allFinite() || !box.size.allFinite() || !std::isfinite(box.yaw) ||
      (box.size.array() < 0.0).any()) {
    throw ArgumentError("virtual object \"" + label + "\" has an invalid box");
  }
  for (Eigen::Index n = 0; n < points.cols(); ++n) {
    if (!box.contains(points.col(n), kBoxMargin)) {
      throw ArgumentError("virtual object \"" + label + "\": point " + std::to_string(n) +
                          " lies outside its box");
    }
  }
}

std::string_view to_string(AugmentMode mode) {
  switch (mode) {
    case AugmentMode::kNaive: return "naive";
    case AugmentMode::kCulling: return "culling";
    case AugmentMode::kDrilling: return "drilling";
  }
  return "unknown";
}

AugmentMode parse_augment_mode(std::string_view text) {
  if (text == "naive") return AugmentMode::kNaive;
  if (text == "culling") return AugmentMode::kCulling;
  if (text == "drilling") return AugmentMode::kDrilling;
  throw ArgumentError("unknown augmentation mode \"" + std::string(text) + "\"");
}

Sweep insert_naive(const Sweep& scene, const std::vector<VirtualObject>& objects) {
  validate_all(objects);
  const VirtualCloud cloud = flatten(objects);
  Sweep out;
  out.sensor_origin = scene.sensor_origin;
  out.timestamp = scene.timestamp;
  out.points.resize(4, scene.points.cols() + cloud.points.cols());
  out.points.leftCols(scene.points.cols()) = scene.points;
  append_points(out.points, scene.points.cols(), cloud.points, nullptr);
  return out;
}

AugmentResult cull(const Sweep& scene, const std::vector<VirtualObject>& objects,
                   const GridConfig& config, double drop_fraction, int workers) {
  if (!(drop_fraction >= 0.0 && drop_fraction <= 1.0)) {
    throw ArgumentError("drop_fraction must lie in [0, 1]");
  }
  validate_all(objects);
  const GridDims dims = grid_dims(config);
  const VirtualCloud cloud = flatten(objects);
  const VoxelMask scene_voxels = occupied_mask(scene.points.topRows<3>(), config);
  const Eigen::Vector3d origin = scene.sensor_origin;

  const auto count = static_cast<std::size_t>(cloud.points.cols());
  std::vector<std::uint8_t> visible(count, 1);
  parallel_for_chunks(count, workers, kPointGrain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      const Eigen::Vector3d p = cloud.points.col(static_cast<Eigen::Index>(n));
      if (is_occluded(origin, p, scene_voxels, config, dims)) visible[n] = 0;
    }
  });

  AugmentResult result;
  AugmentReport& report = result.report;
  report.mode = AugmentMode::kCulling;
  report.kept_points.assign(objects.size(), 0);
  report.occluded_points.assign(objects.size(), 0);
  for (std::size_t n = 0; n < count; ++n) {
    if (!visible[n]) ++report.occluded_points[cloud.owner[n]];
  }
  std::vector<std::uint8_t> dropped(objects.size(), 0);
  for (std::size_t id = 0; id < objects.size(); ++id) {
    const auto total = static_cast<double>(objects[id].points.cols());
    if (static_cast<double>(report.occluded_points[id]) / total > drop_fraction) {
      report.objects_dropped.push_back(id);
      dropped[id] = 1;
    } else {
      report.kept_points[id] =
          static_cast<std::size_t>(objects[id].points.cols()) - report.occluded_points[id];
    }
  }
  std::vector<std::uint8_t> keep = visible;
  for (std::size_t n = 0; n < count; ++n) {
    if (dropped[cloud.owner[n]]) keep[n] = 0;
  }

  std::size_t kept_total = 0;
  for (const auto k : report.kept_points) kept_total += k;
  Sweep& out = result.sweep;
  out.sensor_origin = scene.sensor_origin;
  out.timestamp = scene.timestamp;
  out.points.resize(4, scene.points.cols() + static_cast<Eigen::Index>(kept_total));
  out.points.leftCols(scene.points.cols()) = scene.points;
  append_points(out.points, scene.points.cols(), cloud.points, &keep);
  return result;
}

AugmentResult drill(const Sweep& scene, const std::vector<VirtualObject>& objects,
                    const GridConfig& config, int workers) {
  validate_all(objects);
  const GridDims dims = grid_dims(config);
  const VirtualCloud cloud = flatten(objects);
  const VoxelMask virtual_voxels = occupied_mask(cloud.points, config);
  const Eigen::Vector3d origin = scene.sensor_origin;
  const bool origin_in_grid = world_to_voxel(origin, config, dims).has_value();

  // Voxels that must be empty for every virtual point to be seen: everything a
  // virtual ray crosses before its own voxel, except the sensor's cell.
  VoxelMask sightline(dims);
  auto* lanes = sightline.bits.data();
  const auto virtual_count = static_cast<std::size_t>(cloud.points.cols());
  parallel_for_chunks(virtual_count, workers, kPointGrain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      const Eigen::Vector3d p = cloud.points.col(static_cast<Eigen::Index>(n));
      if ((p - origin).norm() < kMinRayLength) continue;
      walk_voxels(origin, p, config, dims, [&](const VoxelStep& s) {
        if (!s.endpoint && !(s.first && origin_in_grid)) {
          std::atomic_ref<std::uint8_t>(lanes[s.linear]).store(1, std::memory_order_relaxed);
        }
        return true;
      });
    }
  });

  const auto scene_count = scene.size();
  std::vector<std::uint8_t> keep(scene_count, 1);
  parallel_for_chunks(scene_count, workers, kPointGrain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      const Eigen::Vector3d p = scene.xyz(static_cast<Eigen::Index>(n));
      const auto v = world_to_voxel(p, config, dims);
      if ((v && sightline.test(linear_index(*v, dims))) ||
          is_occluded(origin, p, virtual_voxels, config, dims)) {
        keep[n] = 0;
      }
    }
  });

  AugmentResult result;
  AugmentReport& report = result.report;
  report.mode = AugmentMode::kDrilling;
  for (const auto& o : objects) report.kept_points.push_back(static_cast<std::size_t>(o.points.cols()));
  report.occluded_points.assign(objects.size(), 0);

  std::size_t survivors = 0;
  for (const auto k : keep) survivors += k;
  report.scene_points_removed = scene_count - survivors;

  Sweep& out = result.sweep;
  out.sensor_origin = scene.sensor_origin;
  out.timestamp = scene.timestamp;
  out.points.resize(4, static_cast<Eigen::Index>(survivors) + cloud.points.cols());
  Eigen::Index at = 0;
  for (std::size_t n = 0; n < scene_count; ++n) {
    if (keep[n]) out.points.col(at++) = scene.points.col(static_cast<Eigen::Index>(n));
  }
  append_points(out.points, at, cloud.points, nullptr);
  return result;
}

AugmentResult augment(const Sweep& scene, const std::vector<VirtualObject>& objects,
                      AugmentMode mode, const GridConfig& config, double drop_fraction,
                      int workers) {
  switch (mode) {
    case AugmentMode::kCulling: return cull(scene, objects, config, drop_fraction, workers);
    case AugmentMode::kDrilling: return drill(scene, objects, config, workers);
    case AugmentMode::kNaive: break;
  }
  AugmentResult result{insert_naive(scene, objects), {}};
  result.report.mode = AugmentMode::kNaive;
  for (const auto& o : objects) result.report.kept_points.push_back(static_cast<std::size_t>(o.points.cols()));
  result.report.occluded_points.assign(objects.size(), 0);
  return result;
}

VirtualObject read_object(const std::filesystem::path& path) {
  const Sweep sweep = read_sweep(path);
  VirtualObject object;
  object.points = sweep.points.topRows<3>();

  const std::filesystem::path sidecar = path.string() + ".box";
  std::ifstream in(sidecar);
  if (!in) throw IoError("cannot open object header " + sidecar.string());
  bool have_center = false;
  bool have_size = false;
  std::uint64_t line_no = 0;
  for (const auto& line : split_lines(in)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value in " + sidecar.string(), line_no);
    std::string key = line.substr(b, eq - b);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::istringstream value(line.substr(eq + 1));
    bool ok = true;
    if (key == "label") {
      ok = static_cast<bool>(value >> object.label);
    } else if (key == "center") {
      ok = static_cast<bool>(value >> object.box.center.x() >> object.box.center.y() >>
                             object.box.center.z());
      have_center = true;
    } else if (key == "size") {
      ok = static_cast<bool>(value >> object.box.size.x() >> object.box.size.y() >>
                             object.box.size.z());
      have_size = true;
    } else if (key == "yaw") {
      ok = static_cast<bool>(value >> object.box.yaw);
    } else {
      throw ParseError("unknown key \"" + key + "\" in " + sidecar.string(), line_no);
    }
    if (!ok) throw ParseError("bad value for " + key + " in " + sidecar.string(), line_no);
  }
  if (!have_center || !have_size) {
    throw ParseError("object header " + sidecar.string() + " needs center and size", line_no);
  }
  object.validate();
  return object;
}

void write_object(const std::filesystem::path& path, const VirtualObject& object) {
  Sweep sweep;
  sweep.points.resize(4, object.points.cols());
  sweep.points.topRows<3>() = object.points;
  sweep.points.row(3).setZero();
  write_sweep(path, sweep);

  const std::filesystem::path sidecar = path.string() + ".box";
  std::ofstream out(sidecar, std::ios::trunc);
  if (!out) throw IoError("cannot open " + sidecar.string() + " for writing");
  out.precision(17);
  out << "label=" << object.label << '\n'
      << "center=" << object.box.center.x() << ' ' << object.box.center.y() << ' '
      << object.box.center.z() << '\n'
      << "size=" << object.box.size.x() << ' ' << object.box.size.y() << ' '
      << object.box.size.z() << '\n'
      << "yaw=" << object.box.yaw << '\n';
}

std::string format_report(const AugmentReport& report,
                          const std::vector<VirtualObject>& objects) {
  std::ostringstream out;
  out << "mode=" << to_string(report.mode) << '\n';
  out << "objects=" << report.kept_points.size() << '\n';
  for (std::size_t id = 0; id < report.kept_points.size(); ++id) {
    out << "object." << id << ".label=" << (id < objects.size() ? objects[id].label : "") << '\n';
    out << "object." << id << ".points="
        << (id < objects.size() ? objects[id].points.cols() : 0) << '\n';
    out << "object." << id << ".kept=" << report.kept_points[id] << '\n';
    if (id < report.occluded_points.size()) {
      out << "object." << id << ".occluded=" << report.occluded_points[id] << '\n';
    }
  }
  out << "objects_dropped=";
  for (std::size_t n = 0; n < report.objects_dropped.size(); ++n) {
    out << (n ? "," : "") << report.objects_dropped[n];
  }
  out << '\n';
  out << "scene_points_removed=" << report.scene_points_removed << '\n';
  return out.str();
}

}  // namespace lidarvis
