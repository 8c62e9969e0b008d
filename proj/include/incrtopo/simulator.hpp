#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "incrtopo/occupancy.hpp"
#include "incrtopo/scan.hpp"

namespace incrtopo {

struct SensorSpec {
  int beam_count = 360;
  double fov = 2.0 * M_PI;   // radians, beams at -fov/2 + i * (fov / beam_count)
  double range_max = 8.0;    // meters
  double noise_std = 0.0;    // meters, Gaussian on hit ranges
  double noise_mean = 0.0;   // meters
};

struct Trajectory {
  std::vector<Pose2D> waypoints;
  double step = 0.1;  // meters of travel per frame
};

// March each beam in 0.25-pixel steps until an occupied cell or range_max.
// Hit ranges are perturbed by Gaussian(noise_mean, noise_std) clamped to
// [0, range_max]; misses are encoded as infinity. Deterministic per seed
// (own Box-Muller over a seeded mt19937_64, independent of the platform's
// distribution implementation). Throws if the pose sits in an occupied cell
// or outside the grid.
ScanFrame raycast(const OccupancyGrid& grid, const Pose2D& pose,
                  const SensorSpec& spec, uint64_t seed, int64_t frame_id = 0);

// Poses interpolated along the waypoint polyline every `step` meters,
// heading along the motion direction (a single waypoint keeps its own
// heading). Frame i raycasts with seed + i. Throws if any pose lands in an
// occupied cell.
std::vector<ScanFrame> generate_frames(const OccupancyGrid& grid,
                                       const Trajectory& traj,
                                       const SensorSpec& spec, uint64_t seed);

void generate_log(const std::string& path, const OccupancyGrid& grid,
                  const Trajectory& traj, const SensorSpec& spec,
                  uint64_t seed);

// Waypoint file: one "x y [theta]" line per waypoint, '#' comments allowed.
Trajectory load_trajectory(const std::string& path, double step);

}  // namespace incrtopo
