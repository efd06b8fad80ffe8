// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dense_oracle.hpp"
#include "fixtures.hpp"
#include "lattice_oracle.hpp"
#include "lidarvis/lidarvis.hpp"

namespace {

using namespace lidarvis;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::ostringstream line;
  line.precision(3);
  line << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << std::fixed << secs
       << " s]";
  std::cout << line.str() << std::endl;
}

std::string run_cli(const std::string& args, int* code) {
  const std::string cmd = std::string(LIDARVIS_CLI_PATH) + " " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    *code = -1;
    return out;
  }
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

// 64^3 grid used by the traversal criteria.
const GridConfig kCube64{0.0, 16.0, 0.0, 16.0, 0.0, 16.0, 0.25};

struct RaySet {
  std::vector<Eigen::Vector3d> origins;
  std::vector<Eigen::Vector3d> endpoints;
};

const RaySet& random_rays() {
  static const RaySet rays = [] {
    RaySet r;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 16.0);
    for (int n = 0; n < 10'000; ++n) {
      r.origins.emplace_back(u(rng), u(rng), u(rng));
      r.endpoints.emplace_back(u(rng), u(rng), u(rng));
    }
    return r;
  }();
  return rays;
}

Outcome traversal_oracle() {
  const RaySet& rays = random_rays();
  testing::DenseOracle oracle(kCube64, 1e-3);
  std::size_t mismatched = 0;
  std::size_t voxels = 0;
  for (std::size_t n = 0; n < rays.origins.size(); ++n) {
    const RayTrace t = traverse_ray(rays.origins[n], rays.endpoints[n], kCube64);
    voxels += t.visited.size();
    if (t.visited != oracle.voxels(rays.origins[n], rays.endpoints[n])) ++mismatched;
  }

  // Exact ties: rays between voxel centers, checked against rational arithmetic.
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> c(0, 63);
  std::size_t lattice = 0;
  std::size_t lattice_mismatched = 0;
  while (lattice < 2000) {
    const VoxelIndex a{c(rng), c(rng), c(rng)};
    const VoxelIndex b{c(rng), c(rng), c(rng)};
    if (a == b) continue;
    ++lattice;
    const RayTrace t =
        traverse_ray(voxel_center(a, kCube64), voxel_center(b, kCube64), kCube64);
    if (t.visited != testing::lattice_order(a, b)) ++lattice_mismatched;
  }
  std::ostringstream d;
  d << rays.origins.size() - mismatched << "/" << rays.origins.size()
    << " random rays match the dense-sampling oracle (" << voxels << " voxels); "
    << lattice - lattice_mismatched << "/" << lattice
    << " voxel-center rays match exact x-y-z tie order";
  return {mismatched == 0 && lattice_mismatched == 0, d.str()};
}

Outcome neighbor_and_bound() {
  const RaySet& rays = random_rays();
  const GridDims dims = grid_dims(kCube64);
  const std::size_t bound = static_cast<std::size_t>(dims.nx + dims.ny + dims.nz + 3);
  std::size_t bad_steps = 0;
  std::size_t over_bound = 0;
  std::size_t longest = 0;
  for (std::size_t n = 0; n < rays.origins.size(); ++n) {
    const RayTrace t = traverse_ray(rays.origins[n], rays.endpoints[n], kCube64);
    longest = std::max(longest, t.visited.size());
    if (t.visited.size() > bound) ++over_bound;
    for (std::size_t v = 1; v < t.visited.size(); ++v) {
      const VoxelIndex& p = t.visited[v - 1];
      const VoxelIndex& q = t.visited[v];
      if (std::abs(p.i - q.i) + std::abs(p.j - q.j) + std::abs(p.k - q.k) != 1) ++bad_steps;
    }
  }
  std::ostringstream d;
  d << bad_steps << " non-face steps, " << over_bound << " rays over " << bound
    << " voxels (longest " << longest << ")";
  return {bad_steps == 0 && over_bound == 0, d.str()};
}

Outcome determinism() {
  const GridConfig config;
  const Sweep base = synthetic_sweep(30'000, 7);
  const VisibilityVolume ref = compute_visibility(base, config, 1);
  std::mt19937_64 rng(5);
  int runs = 0;
  int differing = 0;
  for (int perm = 0; perm < 5; ++perm) {
    std::vector<Eigen::Index> order(base.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Sweep s = base;
    for (std::size_t n = 0; n < order.size(); ++n) {
      s.points.col(static_cast<Eigen::Index>(n)) = base.points.col(order[n]);
    }
    for (int workers : {1, 2, 8}) {
      ++runs;
      if (!(compute_visibility(s, config, workers) == ref)) ++differing;
    }
  }
  const VisibilityCensus c = census(ref);
  std::ostringstream d;
  d << runs - differing << "/" << runs
    << " runs (workers 1,2,8 x 5 permutations) cell-identical; census free=" << c.free
    << " occupied=" << c.occupied;
  return {differing == 0, d.str()};
}

Outcome occupied_dominance() {
  const GridConfig config;
  const GridDims dims = grid_dims(config);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> uo(-20.0, 20.0);
  std::size_t checked = 0;
  std::size_t violations = 0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    Sweep s;
    if (sweep % 2 == 0) {
      s = synthetic_sweep(8'000, static_cast<std::uint64_t>(sweep),
                          BeamPattern{}, Eigen::Vector3d(uo(rng), uo(rng), 0.0));
    } else {
      s = testing::random_sweep(rng, 8'000, config, 5.0);
    }
    const VisibilityVolume vis = compute_visibility(s, config, 2);
    for (std::size_t n = 0; n < s.size(); ++n) {
      const auto v = world_to_voxel(s.xyz(static_cast<Eigen::Index>(n)), config, dims);
      if (!v) continue;
      ++checked;
      if (vis.at(*v) != VoxelState::kOccupied) ++violations;
    }
  }
  std::ostringstream d;
  d << violations << " of " << checked << " in-grid points over 100 sweeps lie in non-OCCUPIED voxels";
  return {violations == 0 && checked > 0, d.str()};
}

Outcome bayes_analytics() {
  const GridConfig config{0, 1, 0, 1, 0, 1, 0.25};
  OccupancyGrid grid(config);
  VisibilityVolume hit(config);
  for (std::size_t n = 0; n < hit.size(); ++n) hit.set(n, VoxelState::kOccupied);

  grid.update(hit);
  const double single = posterior(grid)[0];
  double worst_k = 0.0;
  OccupancyGrid k_grid(config);
  for (int k = 1; k <= 10; ++k) {
    k_grid.update(hit);
    const double expected = 1.0 / (1.0 + std::exp(-std::min(k * 0.8473, 3.4761)));
    worst_k = std::max(worst_k, std::abs(posterior(k_grid)[0] - expected));
  }

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> code(0, 2);
  std::uniform_int_distribution<int> length(1, 60);
  const OccupancyParams p;
  std::size_t out_of_bounds = 0;
  for (int seq = 0; seq < 1000; ++seq) {
    OccupancyGrid g(config);
    const int steps = length(rng);
    for (int s = 0; s < steps; ++s) {
      VisibilityVolume vis(config);
      for (std::size_t n = 0; n < vis.size(); ++n) vis.set(n, static_cast<VoxelState>(code(rng)));
      g.update(vis);
      if (g.logodds().minCoeff() < p.clamp_min || g.logodds().maxCoeff() > p.clamp_max) {
        ++out_of_bounds;
      }
    }
  }
  std::ostringstream d;
  d.precision(3);
  d << "single hit |p-0.7|=" << std::abs(single - 0.7) << "; k-hit max error " << worst_k
    << " (k=1..10); " << out_of_bounds << " clamp violations over 1000 sequences";
  return {std::abs(single - 0.7) <= 1e-9 && worst_k <= 1e-6 && out_of_bounds == 0, d.str()};
}

// Grid large enough to hold the wall fixture with margin.
const GridConfig kAugGrid{-20, 20, -20, 20, -5, 3, 0.25};

std::set<VoxelIndex> voxels_of(const Eigen::Matrix3Xd& pts) {
  std::set<VoxelIndex> out;
  for (Eigen::Index n = 0; n < pts.cols(); ++n) {
    if (const auto v = world_to_voxel(pts.col(n), kAugGrid)) out.insert(*v);
  }
  return out;
}

// Voxels crossed by origin -> p before p's own voxel, excluding the sensor cell.
std::vector<VoxelIndex> crossed(const Eigen::Vector3d& origin, const Eigen::Vector3d& p) {
  const auto origin_voxel = world_to_voxel(origin, kAugGrid);
  const RayTrace t = traverse_ray(origin, p, kAugGrid);
  std::vector<VoxelIndex> out;
  for (std::size_t v = 0; v < t.visited.size(); ++v) {
    if (t.reached_endpoint && v + 1 == t.visited.size()) break;
    if (origin_voxel && t.visited[v] == *origin_voxel) continue;
    out.push_back(t.visited[v]);
  }
  return out;
}

Outcome culling_and_drilling() {
  const Sweep wall = testing::wall_scene(5.0);
  const VirtualObject object = testing::box_object({10.0, 0.0, 0.0}, {4.0, 2.0, 1.5});
  const Eigen::Vector3d origin = wall.sensor_origin;
  const auto wall_voxels = voxels_of(wall.points.topRows<3>());
  const auto object_voxels = voxels_of(object.points);

  // Culling: oracle count of object points whose traces cross wall voxels.
  std::size_t crossing_wall = 0;
  for (Eigen::Index n = 0; n < object.points.cols(); ++n) {
    for (const VoxelIndex& v : crossed(origin, object.points.col(n))) {
      if (wall_voxels.count(v)) {
        ++crossing_wall;
        break;
      }
    }
  }
  const AugmentResult culled = cull(wall, {object}, kAugGrid, 0.5);
  const bool cull_ok = culled.report.occluded_points[0] == crossing_wall &&
                       culled.report.objects_dropped == std::vector<std::size_t>{0} &&
                       culled.sweep.size() == wall.size();

  // Drilling: a wall point may go only if an object trace crosses its voxel or
  // its own trace crosses an object voxel.
  std::set<VoxelIndex> object_sightlines;
  for (Eigen::Index n = 0; n < object.points.cols(); ++n) {
    for (const VoxelIndex& v : crossed(origin, object.points.col(n))) object_sightlines.insert(v);
  }
  std::vector<std::uint8_t> must_go(wall.size(), 0);
  std::size_t expected_removed = 0;
  for (std::size_t n = 0; n < wall.size(); ++n) {
    const Eigen::Vector3d p = wall.xyz(static_cast<Eigen::Index>(n));
    const auto v = world_to_voxel(p, kAugGrid);
    bool go = v && object_sightlines.count(*v);
    for (const VoxelIndex& c : crossed(origin, p)) go = go || object_voxels.count(c);
    must_go[n] = go;
    expected_removed += go;
  }
  const AugmentResult drilled = drill(wall, {object}, kAugGrid);
  const auto survivors = static_cast<Eigen::Index>(wall.size() - drilled.report.scene_points_removed);
  bool same_survivors = drilled.report.scene_points_removed == expected_removed;
  Eigen::Index at = 0;
  for (std::size_t n = 0; n < wall.size() && same_survivors; ++n) {
    if (must_go[n]) continue;
    same_survivors = drilled.sweep.points.col(at++) == wall.points.col(static_cast<Eigen::Index>(n));
  }
  const VoxelMask remaining = occupied_mask(drilled.sweep.points.leftCols(survivors), kAugGrid);
  std::size_t unreached = 0;
  for (Eigen::Index n = 0; n < object.points.cols(); ++n) {
    if (!traverse_until_preoccupied(origin, object.points.col(n), remaining, kAugGrid)
             .reached_endpoint) {
      ++unreached;
    }
  }
  Sweep again = wall;
  again.points = drilled.sweep.points.leftCols(survivors);
  const AugmentResult twice = drill(again, {object}, kAugGrid);
  const bool idempotent =
      twice.report.scene_points_removed == 0 && twice.sweep.points == drilled.sweep.points;

  std::ostringstream d;
  d << "culling occluded " << culled.report.occluded_points[0] << "/" << object.points.cols()
    << " (oracle " << crossing_wall << "), dropped objects=" << culled.report.objects_dropped.size()
    << "; drilling removed " << drilled.report.scene_points_removed << "/" << wall.size()
    << " wall points (oracle " << expected_removed << "), " << unreached
    << " virtual rays blocked afterwards, second pass removed "
    << twice.report.scene_points_removed;
  return {cull_ok && crossing_wall == static_cast<std::size_t>(object.points.cols()) &&
              same_survivors && unreached == 0 && idempotent,
          d.str()};
}

Outcome bev_round_trip() {
  const GridConfig config;
  const VisibilityVolume vis = compute_visibility(synthetic_sweep(30'000, 21), config);
  const BevMap map = visibility_to_bev(vis);
  const BevMap decoded = decode_bev(encode_bev(map));
  const bool shape = decoded.width == 400 && decoded.height == 400 && decoded.channels == 32;
  const bool exact = bev_to_visibility(decoded, config) == vis;
  std::ostringstream d;
  d << "shape (" << decoded.width << ", " << decoded.height << ", " << decoded.channels
    << "), reconstruction " << (exact ? "exact" : "differs");
  return {shape && exact, d.str()};
}

Outcome runtime() {
  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  int code = 0;
  const std::string out = run_cli(
      "bench --points 30000 --iters 50 --workers " + std::to_string(cores), &code);
  const auto pos = out.find("mean_ms=");
  const auto std_pos = out.find("std_ms=");
  if (code != 0 || pos == std::string::npos) return {false, "bench failed: " + out};
  const double mean = std::stod(out.substr(pos + 8));
  const double sd = std_pos == std::string::npos ? 0.0 : std::stod(out.substr(std_pos + 7));
  std::ostringstream d;
  d.precision(4);
  d << "mean " << mean << " ms (std " << sd << " ms) over 50 iterations, " << cores
    << " worker(s); limit 100 ms";
  return {mean <= 100.0, d.str()};
}

Outcome occupancy_matches_visibility() {
  const fs::path dir = fs::temp_directory_path() / "lidarvis_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  Sweep s = synthetic_sweep(30'000, 33);
  s.timestamp = 1.5;
  write_sweep(dir / "sweep.vswp", s);
  std::ofstream(dir / "poses.txt") << "1.5 0 0 0 1 0 0 0\n";
  int vis_code = 0;
  int occ_code = 0;
  run_cli("visibility --sweep " + (dir / "sweep.vswp").string() + " --out " +
              (dir / "v.vvol").string(),
          &vis_code);
  run_cli("occupancy --sweeps " + (dir / "sweep.vswp").string() + " --poses " +
              (dir / "poses.txt").string() + " --out " + (dir / "o.ovol").string(),
          &occ_code);
  if (vis_code != 0 || occ_code != 0) {
    fs::remove_all(dir);
    return {false, "CLI exit codes " + std::to_string(vis_code) + ", " + std::to_string(occ_code)};
  }
  const VisibilityVolume vis = read_visibility(dir / "v.vvol");
  const OccupancyVolume occ = read_occupancy(dir / "o.ovol");
  fs::remove_all(dir);
  const auto hit = static_cast<float>(std::log(0.7 / 0.3));
  const auto miss = static_cast<float>(std::log(0.4 / 0.6));
  std::size_t mismatched = 0;
  for (std::size_t n = 0; n < vis.size(); ++n) {
    const float expected = vis[n] == VoxelState::kOccupied ? hit
                           : vis[n] == VoxelState::kFree   ? miss
                                                           : 0.0f;
    if (occ.logodds[n] != expected) ++mismatched;
  }
  std::ostringstream d;
  d << mismatched << " of " << vis.size()
    << " voxels differ between one-sweep occupancy and one analytic Bayes step of visibility";
  return {mismatched == 0 && occ.config == vis.config(), d.str()};
}

}  // namespace

int main() {
  report("traversal matches oracle", traversal_oracle);
  report("traversal face steps and length bound", neighbor_and_bound);
  report("visibility determinism", determinism);
  report("occupied dominance", occupied_dominance);
  report("bayes analytics and clamping", bayes_analytics);
  report("culling and drilling on wall fixture", culling_and_drilling);
  report("bev round trip and shape", bev_round_trip);
  report("raycast runtime", runtime);
  report("occupancy and visibility agree", occupancy_matches_visibility);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
