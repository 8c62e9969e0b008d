#include "incrtopo/occupancy.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "incrtopo/image_io.hpp"

namespace incrtopo {

std::vector<PixelCoord> OccupancyGrid::occupied_pixels() const {
  std::vector<PixelCoord> out;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      if (at(c, r) == Cell::kOccupied) out.push_back({c, r});
  return out;
}

namespace {

void load_sidecar(const std::string& path, OccupancyGrid& grid) {
  std::ifstream in(path + ".meta");
  if (!in) return;
  std::string key;
  double value;
  int line = 0;
  std::string text;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty() || text[0] == '#') continue;
    std::istringstream ss(text);
    if (!(ss >> key >> value))
      throw std::runtime_error(path + ".meta:" + std::to_string(line) +
                               ": expected 'key value'");
    if (key == "resolution") {
      if (value <= 0)
        throw std::runtime_error(path + ".meta: resolution must be positive");
      grid.resolution = value;
    } else if (key == "origin_x") {
      grid.origin_x = value;
    } else if (key == "origin_y") {
      grid.origin_y = value;
    } else {
      throw std::runtime_error(path + ".meta: unknown key '" + key + "'");
    }
  }
}

}  // namespace

OccupancyGrid load_grid(const std::string& path, int occupied_below,
                        int free_above) {
  if (occupied_below >= free_above)
    throw std::runtime_error("load_grid: occupied_below must be < free_above");
  GrayImage img = read_gray_image(path);
  OccupancyGrid grid(img.width, img.height);
  for (size_t i = 0; i < img.pixels.size(); ++i) {
    int g = img.pixels[i];
    grid.cells[i] = g < occupied_below ? Cell::kOccupied
                    : g > free_above   ? Cell::kFree
                                       : Cell::kUnknown;
  }
  load_sidecar(path, grid);
  return grid;
}

void save_grid(const std::string& path, const OccupancyGrid& grid) {
  GrayImage img;
  img.width = grid.width;
  img.height = grid.height;
  img.pixels.resize(grid.cells.size());
  for (size_t i = 0; i < grid.cells.size(); ++i) {
    switch (grid.cells[i]) {
      case Cell::kOccupied: img.pixels[i] = 0; break;
      case Cell::kFree: img.pixels[i] = 255; break;
      case Cell::kUnknown: img.pixels[i] = 128; break;
    }
  }
  write_pgm(path, img);
  std::ofstream meta(path + ".meta");
  if (!meta) throw std::runtime_error(path + ".meta: cannot open for writing");
  meta << "resolution " << grid.resolution << "\n"
       << "origin_x " << grid.origin_x << "\n"
       << "origin_y " << grid.origin_y << "\n";
}

}  // namespace incrtopo
