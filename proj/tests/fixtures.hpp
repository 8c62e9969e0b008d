#pragma once

#include <vector>

#include "incrtopo/config.hpp"
#include "incrtopo/occupancy.hpp"
#include "incrtopo/simulator.hpp"

namespace incrtopo::testutil {

// Corridor-network "house": walled hallways of free width 2*half+1 on a
// square lattice of centerlines, plus a few square rooms with doors. Widths
// stay below 16 px so every passage develops a single ridge line at the
// fixture sigma of 4.
struct HouseFixture {
  OccupancyGrid grid;
  Trajectory trajectory;
  SensorSpec sensor;
  RunConfig config;
  Rect interior;  // region used for graph comparisons
};

inline void paint_rect(OccupancyGrid& g, int x0, int y0, int x1, int y1,
                       Cell value) {
  for (int r = std::max(0, y0); r <= std::min(g.height - 1, y1); ++r)
    for (int c = std::max(0, x0); c <= std::min(g.width - 1, x1); ++c)
      g.at(c, r) = value;
}

inline HouseFixture make_house_fixture(bool full_size) {
  HouseFixture fx;
  const int n = full_size ? 800 : 400;
  const int pitch = full_size ? 200 : 100;
  const int half = 5;   // corridor free half-width -> width 11
  const int wall = 3;
  const double res = 0.1;

  fx.grid = OccupancyGrid(n, n);
  fx.grid.resolution = res;

  std::vector<int> lines;
  for (int v = pitch / 2; v < n; v += pitch) lines.push_back(v);
  int lo = lines.front() - half - wall + 1, hi = lines.back() + half + wall - 1;

  // walls first, then carve every corridor interior so crossings stay open
  for (int y : lines)
    paint_rect(fx.grid, lo, y - half - wall, hi, y + half + wall, Cell::kOccupied);
  for (int x : lines)
    paint_rect(fx.grid, x - half - wall, lo, x + half + wall, hi, Cell::kOccupied);
  for (int y : lines)
    paint_rect(fx.grid, lo + wall, y - half, hi - wall, y + half, Cell::kFree);
  for (int x : lines)
    paint_rect(fx.grid, x - half, lo + wall, x + half, hi - wall, Cell::kFree);

  if (full_size) {
    // 15 px rooms with 7 px doors off the top and bottom corridors
    int top = lines.front(), bottom = lines.back();
    for (int cx : {200, 400, 600}) {
      int ry0 = bottom + half + 1, ry1 = ry0 + wall + 14 + wall - 1;
      paint_rect(fx.grid, cx - 7 - wall, ry0, cx + 7 + wall, ry1, Cell::kOccupied);
      paint_rect(fx.grid, cx - 7, ry0 + wall, cx + 7, ry0 + wall + 14, Cell::kFree);
      paint_rect(fx.grid, cx - 3, bottom + half + 1, cx + 3, ry0 + wall - 1,
                 Cell::kFree);

      int qy1 = top - half - 1, qy0 = qy1 - wall - 14 - wall + 1;
      paint_rect(fx.grid, cx - 7 - wall, qy0, cx + 7 + wall, qy1, Cell::kOccupied);
      paint_rect(fx.grid, cx - 7, qy1 - wall - 14, cx + 7, qy1 - wall, Cell::kFree);
      paint_rect(fx.grid, cx - 3, qy1 - wall + 1, cx + 3, top - half - 1,
                 Cell::kFree);
    }
  }

  // waypoints walk corridor centerlines (pixel centers)
  auto wp = [&](int px, int py) {
    return Pose2D{(px + 0.5) * res, (py + 0.5) * res, 0.0};
  };
  int a = lines.front(), b = lines.back();
  if (full_size) {
    int m1 = lines[1], m2 = lines[2];
    fx.trajectory.waypoints = {wp(a, a),  wp(b, a),  wp(b, b),  wp(a, b),
                               wp(a, m2), wp(b, m2), wp(b, m1), wp(a, m1),
                               wp(a, a)};
    fx.trajectory.step = 0.25;
  } else {
    int m1 = lines[1];
    fx.trajectory.waypoints = {wp(a, a), wp(b, a), wp(b, b), wp(a, b),
                               wp(a, m1), wp(b, m1)};
    fx.trajectory.step = 0.25;
  }

  fx.sensor.beam_count = 360;
  fx.sensor.fov = 2.0 * M_PI;
  fx.sensor.range_max = 8.0;
  fx.sensor.noise_std = 0.05;
  fx.sensor.noise_mean = 0.0;

  fx.config.sigma = 4.0;
  fx.config.laplacian_scale = 255.0;
  fx.config.binarize_threshold = 10.0;
  fx.config.schedule = {1, 20, 80};
  fx.config.protected_layer_width = 3;
  fx.config.connect_radius = 3;
  fx.config.resolution = res;

  int margin = half + wall + 20;
  fx.interior = Rect{{lo - margin, lo - margin}, hi - lo + 2 * margin,
                     hi - lo + 2 * margin};
  return fx;
}

}  // namespace incrtopo::testutil
