#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "incrtopo/geometry.hpp"

namespace incrtopo {

enum class Cell : uint8_t { kFree = 0, kOccupied = 1, kUnknown = 2 };

// Ternary occupancy raster. Pixel (0, 0) sits at world point
// (origin_x, origin_y); row index grows with world y.
struct OccupancyGrid {
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;
  double resolution = 1.0;  // meters per pixel
  double origin_x = 0.0;
  double origin_y = 0.0;

  OccupancyGrid() = default;
  OccupancyGrid(int w, int h, Cell fill = Cell::kFree)
      : width(w), height(h), cells(size_t(w) * h, fill) {}

  Cell& at(int c, int r) { return cells[size_t(r) * width + c]; }
  Cell at(int c, int r) const { return cells[size_t(r) * width + c]; }
  bool in_bounds(int c, int r) const {
    return c >= 0 && c < width && r >= 0 && r < height;
  }

  std::vector<PixelCoord> occupied_pixels() const;
};

// Classify a grayscale raster: gray < occupied_below -> Occupied,
// gray > free_above -> Free, anything between -> Unknown. Resolution and
// origin come from an optional sidecar "<path>.meta" key-value file
// (keys: resolution, origin_x, origin_y), defaulting to 1.0 m/px at (0,0).
OccupancyGrid load_grid(const std::string& path, int occupied_below = 100,
                        int free_above = 200);

// Writes a binary PGM (occupied 0, unknown 128, free 255) plus the
// "<path>.meta" sidecar. Reloading with default thresholds round-trips.
void save_grid(const std::string& path, const OccupancyGrid& grid);

}  // namespace incrtopo
