#include "incrtopo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "incrtopo/scan.hpp"

namespace incrtopo {

namespace {

// Box-Muller over the raw engine stream; std::normal_distribution is
// implementation-defined, this keeps logs reproducible across toolchains.
class GaussianDraw {
 public:
  explicit GaussianDraw(uint64_t seed) : rng_(seed) {}

  double operator()(double mean, double stddev) {
    double u1 = (double(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    double u2 = double(rng_() >> 11) * 0x1.0p-53;          // [0, 1)
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + stddev * z;
  }

 private:
  std::mt19937_64 rng_;
};

Cell cell_at_world(const OccupancyGrid& grid, double wx, double wy,
                   bool* inside) {
  PixelCoord p = world_to_pixel(wx, wy, grid.resolution, grid.origin_x,
                                grid.origin_y);
  if (!grid.in_bounds(p.col, p.row)) {
    *inside = false;
    return Cell::kFree;
  }
  *inside = true;
  return grid.at(p.col, p.row);
}

}  // namespace

ScanFrame raycast(const OccupancyGrid& grid, const Pose2D& pose,
                  const SensorSpec& spec, uint64_t seed, int64_t frame_id) {
  if (spec.beam_count < 1 || spec.range_max <= 0 || spec.noise_std < 0)
    throw std::runtime_error("raycast: invalid sensor spec");
  bool inside = false;
  Cell pose_cell = cell_at_world(grid, pose.x, pose.y, &inside);
  if (!inside) throw std::runtime_error("raycast: pose outside the grid");
  if (pose_cell == Cell::kOccupied)
    throw std::runtime_error("raycast: pose inside an occupied cell");

  ScanFrame f;
  f.frame_id = frame_id;
  f.pose = pose;
  f.pose.theta = normalize_angle(pose.theta);
  f.angle_min = -spec.fov / 2.0;
  f.angle_increment = spec.fov / spec.beam_count;
  f.range_max = spec.range_max;
  f.ranges.resize(spec.beam_count);

  GaussianDraw noise(seed);
  double march = 0.25 * grid.resolution;
  for (int i = 0; i < spec.beam_count; ++i) {
    double a = f.pose.theta + f.angle_min + i * f.angle_increment;
    double dx = std::cos(a), dy = std::sin(a);
    double hit = -1.0;
    for (double t = march; t <= spec.range_max; t += march) {
      bool in = false;
      Cell cell = cell_at_world(grid, pose.x + t * dx, pose.y + t * dy, &in);
      if (!in) break;  // left the grid: nothing further to hit
      if (cell == Cell::kOccupied) {
        hit = t;
        break;
      }
    }
    if (hit < 0) {
      f.ranges[i] = std::numeric_limits<double>::infinity();
    } else {
      double r = hit + noise(spec.noise_mean, spec.noise_std);
      f.ranges[i] = std::clamp(r, 0.0, spec.range_max);
    }
  }
  return f;
}

std::vector<ScanFrame> generate_frames(const OccupancyGrid& grid,
                                       const Trajectory& traj,
                                       const SensorSpec& spec, uint64_t seed) {
  if (traj.waypoints.empty())
    throw std::runtime_error("generate_frames: trajectory needs a waypoint");
  if (traj.step <= 0)
    throw std::runtime_error("generate_frames: step must be positive");

  std::vector<Pose2D> poses;
  if (traj.waypoints.size() == 1) {
    poses.push_back(traj.waypoints[0]);
  } else {
    // cumulative arc length along the polyline
    std::vector<double> cum{0.0};
    for (size_t i = 1; i < traj.waypoints.size(); ++i) {
      double dx = traj.waypoints[i].x - traj.waypoints[i - 1].x;
      double dy = traj.waypoints[i].y - traj.waypoints[i - 1].y;
      cum.push_back(cum.back() + std::hypot(dx, dy));
    }
    double total = cum.back();
    size_t seg = 1;
    for (int k = 0;; ++k) {
      double s = k * traj.step;
      if (s > total + 1e-12) break;
      s = std::min(s, total);
      while (seg + 1 < cum.size() && cum[seg] < s) ++seg;
      const Pose2D& a = traj.waypoints[seg - 1];
      const Pose2D& b = traj.waypoints[seg];
      double len = cum[seg] - cum[seg - 1];
      double u = len > 0 ? (s - cum[seg - 1]) / len : 0.0;
      Pose2D p;
      p.x = a.x + u * (b.x - a.x);
      p.y = a.y + u * (b.y - a.y);
      p.theta = normalize_angle(std::atan2(b.y - a.y, b.x - a.x));
      poses.push_back(p);
    }
  }

  std::vector<ScanFrame> frames;
  frames.reserve(poses.size());
  for (size_t i = 0; i < poses.size(); ++i)
    frames.push_back(raycast(grid, poses[i], spec, seed + i, int64_t(i)));
  return frames;
}

void generate_log(const std::string& path, const OccupancyGrid& grid,
                  const Trajectory& traj, const SensorSpec& spec,
                  uint64_t seed) {
  write_frame_log(path, generate_frames(grid, traj, spec, seed));
}

Trajectory load_trajectory(const std::string& path, double step) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  Trajectory traj;
  traj.step = step;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    Pose2D p;
    if (!(ss >> p.x >> p.y))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'x y [theta]'");
    double theta;
    if (ss >> theta) p.theta = normalize_angle(theta);
    traj.waypoints.push_back(p);
  }
  if (traj.waypoints.empty())
    throw std::runtime_error(path + ": no waypoints");
  return traj;
}

}  // namespace incrtopo
