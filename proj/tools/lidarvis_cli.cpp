// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

// lidarvis: command-line front end.
//
//   lidarvis visibility --sweep s.vswp --out v.vvol [--config c.cfg] [--workers n]
//   lidarvis occupancy  --sweeps 'dir/*.vswp' --poses poses.txt --out o.ovol
//   lidarvis augment    --scene s.vswp --objects a.vswp b.vswp --mode culling
//                       --out aug.vswp --report report.txt
//   lidarvis bev        --in v.vvol --out v.bevf [--pgm slice.pgm --channel 16]
//   lidarvis bench      [--points 30000 --iters 50 --workers n --seed 7]
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <glob.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lidarvis/lidarvis.hpp"

namespace {

using namespace lidarvis;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr double kPoseTimeTolerance = 1e-6;

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

EngineConfig config_from(const std::string& path) {
  if (path.empty()) return EngineConfig{};
  return load_config(path);
}

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<std::string> paths;
  for (const auto& pattern : patterns) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t n = 0; n < g.gl_pathc; ++n) paths.emplace_back(g.gl_pathv[n]);
    }
    ::globfree(&g);
    if (rc == GLOB_NOMATCH) throw DataError("no sweep matches " + pattern);
    if (rc != 0) throw DataError("cannot expand " + pattern);
  }
  return paths;
}

const Pose& pose_for(const std::vector<TimedPose>& poses, double timestamp,
                     const std::string& sweep_path) {
  for (const auto& p : poses) {
    if (std::abs(p.timestamp - timestamp) <= kPoseTimeTolerance) return p.pose;
  }
  throw DataError("no pose for sweep " + sweep_path + " (timestamp " +
                  std::to_string(timestamp) + ")");
}

void print_census(const VisibilityVolume& vis) {
  const VisibilityCensus c = census(vis);
  std::cout << "unknown=" << c.unknown << " free=" << c.free << " occupied=" << c.occupied
            << '\n';
}

struct VisibilityArgs {
  std::string sweep, config, out;
  int workers = default_workers();
};

int run_visibility(const VisibilityArgs& a) {
  const EngineConfig cfg = config_from(a.config);
  const Sweep sweep = read_sweep(a.sweep);
  VisibilityStats stats;
  const VisibilityVolume vis = compute_visibility(sweep, cfg.grid, a.workers, &stats);
  write_visibility(a.out, vis);
  print_census(vis);
  if (stats.degenerate_rays > 0) {
    std::cerr << "skipped " << stats.degenerate_rays << " degenerate rays\n";
  }
  return 0;
}

struct OccupancyArgs {
  std::vector<std::string> sweeps;
  std::string poses, config, out;
  int workers = default_workers();
};

// Streams sweeps from disk so that one sweep and one visibility volume are
// alive at a time next to the grid.
int run_occupancy(const OccupancyArgs& a) {
  const EngineConfig cfg = config_from(a.config);
  const std::vector<std::string> paths = expand_globs(a.sweeps);
  if (paths.empty()) throw DataError("no sweeps given");
  const std::vector<TimedPose> poses = read_poses(a.poses);

  const Sweep last = read_sweep(paths.back());
  const Pose& reference = pose_for(poses, last.timestamp, paths.back());
  const double t_ref = last.timestamp;

  OccupancyGrid grid(cfg.grid, cfg.occupancy);
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < paths.size(); ++n) {
    const Sweep sweep = n + 1 == paths.size() ? last : read_sweep(paths[n]);
    if (sweep.timestamp < previous) {
      throw DataError("sweep " + paths[n] + " is older than the sweep before it");
    }
    previous = sweep.timestamp;
    const Pose& pose = pose_for(poses, sweep.timestamp, paths[n]);
    const Sweep local = motion_compensate(sweep, pose, reference, t_ref);
    update_with_sweep(grid, compute_visibility(local, cfg.grid, a.workers));
  }
  write_occupancy(a.out, grid);
  std::cout << "sweeps=" << paths.size() << '\n';
  return 0;
}

struct AugmentArgs {
  std::string scene, mode, config, out, report;
  std::vector<std::string> objects;
  int workers = default_workers();
};

int run_augment(const AugmentArgs& a) {
  const EngineConfig cfg = config_from(a.config);
  const AugmentMode mode = parse_augment_mode(a.mode);
  const Sweep scene = read_sweep(a.scene);
  std::vector<VirtualObject> objects;
  for (const auto& path : a.objects) objects.push_back(read_object(path));

  const AugmentResult result =
      augment(scene, objects, mode, cfg.grid, cfg.cull_drop_fraction, a.workers);
  write_sweep(a.out, result.sweep);
  const std::string report = format_report(result.report, objects);
  if (!a.report.empty()) {
    std::ofstream out(a.report, std::ios::trunc);
    if (!out) throw IoError("cannot open " + a.report + " for writing");
    out << report;
  }
  std::cout << "points=" << result.sweep.size()
            << " objects_dropped=" << result.report.objects_dropped.size()
            << " scene_points_removed=" << result.report.scene_points_removed << '\n';
  return 0;
}

struct BevArgs {
  std::string in, out, pgm;
  std::optional<int> channel;
};

int run_bev(const BevArgs& a) {
  std::ifstream probe(a.in, std::ios::binary);
  if (!probe) throw IoError("cannot open " + a.in);
  char magic[4] = {};
  probe.read(magic, 4);
  probe.close();

  BevMap map;
  const std::string tag(magic, 4);
  if (tag == "VVOL") {
    map = visibility_to_bev(read_visibility(a.in));
  } else if (tag == "OVOL") {
    map = occupancy_to_bev(read_occupancy(a.in));
  } else {
    throw DataError(a.in + " is neither a VVOL nor an OVOL file");
  }
  if (!a.out.empty()) write_bev(a.out, map);
  if (!a.pgm.empty()) bev_slice_render(map, a.channel.value_or(map.channels / 2), a.pgm);
  std::cout << "width=" << map.width << " height=" << map.height
            << " channels=" << map.channels << '\n';
  return 0;
}

struct BenchArgs {
  long long points = 30000;
  int iters = 50;
  int workers = default_workers();
  std::uint64_t seed = 7;
  std::string config;
};

int run_bench(const BenchArgs& a) {
  const EngineConfig cfg = config_from(a.config);
  const Sweep sweep = synthetic_sweep(static_cast<std::size_t>(a.points), a.seed);
  const BenchResult r = benchmark_visibility(sweep, cfg.grid, a.iters, a.workers);
  std::printf("points=%lld\niters=%d\nworkers=%d\nmean_ms=%.3f\nstd_ms=%.3f\nmin_ms=%.3f\nmax_ms=%.3f\n",
              a.points, a.iters, a.workers, r.mean_ms, r.std_ms, r.min_ms, r.max_ms);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LiDAR visibility raycasting, occupancy fusion and augmentation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lidarvis::kVersion));

  VisibilityArgs vis;
  auto* vis_cmd = app.add_subcommand("visibility", "Raycast one sweep into a VVOL volume");
  vis_cmd->add_option("--sweep", vis.sweep, "Sweep file (.vswp or .txt)")->required();
  vis_cmd->add_option("--config", vis.config, "key=value config file");
  vis_cmd->add_option("--out", vis.out, "Output VVOL path")->required();
  vis_cmd->add_option("--workers", vis.workers, "Worker threads")->check(CLI::PositiveNumber);

  OccupancyArgs occ;
  auto* occ_cmd = app.add_subcommand("occupancy", "Fuse timestamped sweeps into an OVOL grid");
  occ_cmd->add_option("--sweeps", occ.sweeps, "Sweep files or glob patterns")->required();
  occ_cmd->add_option("--poses", occ.poses, "Pose file")->required();
  occ_cmd->add_option("--config", occ.config, "key=value config file");
  occ_cmd->add_option("--out", occ.out, "Output OVOL path")->required();
  occ_cmd->add_option("--workers", occ.workers, "Worker threads")->check(CLI::PositiveNumber);

  AugmentArgs aug;
  auto* aug_cmd = app.add_subcommand("augment", "Insert virtual objects into a scene");
  aug_cmd->add_option("--scene", aug.scene, "Scene sweep")->required();
  aug_cmd->add_option("--objects", aug.objects, "Object sweep files (with .box sidecars)")
      ->required();
  aug_cmd->add_option("--mode", aug.mode, "naive | culling | drilling")
      ->required()
      ->check(CLI::IsMember({"naive", "culling", "drilling"}));
  aug_cmd->add_option("--config", aug.config, "key=value config file");
  aug_cmd->add_option("--out", aug.out, "Output sweep path")->required();
  aug_cmd->add_option("--report", aug.report, "Output report path");
  aug_cmd->add_option("--workers", aug.workers, "Worker threads")->check(CLI::PositiveNumber);

  BevArgs bev;
  auto* bev_cmd = app.add_subcommand("bev", "Export a VVOL/OVOL volume as a BEV tensor");
  bev_cmd->add_option("--in", bev.in, "Input VVOL or OVOL file")->required();
  bev_cmd->add_option("--out", bev.out, "Output BEVF path");
  bev_cmd->add_option("--pgm", bev.pgm, "Render one channel as a PGM image");
  bev_cmd->add_option("--channel", bev.channel, "Channel to render (default: middle)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time raycasting on a synthetic 32-beam sweep");
  bench_cmd->add_option("--points", bench.points, "Points per sweep")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--iters", bench.iters, "Iterations")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--config", bench.config, "key=value config file");
  bench_cmd->add_option("--workers", bench.workers, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*vis_cmd) return run_visibility(vis);
    if (*occ_cmd) return run_occupancy(occ);
    if (*aug_cmd) return run_augment(aug);
    if (*bev_cmd) return run_bev(bev);
    if (*bench_cmd) return run_bench(bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
