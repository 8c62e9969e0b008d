#include "incrtopo/distance_map.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace incrtopo {

GaussianKernel GaussianKernel::make(double sigma, int radius) {
  if (sigma <= 0) throw std::runtime_error("kernel sigma must be positive");
  if (radius < 0) radius = int(std::ceil(3.5 * sigma));
  if (radius < int(std::ceil(3.0 * sigma)))
    throw std::runtime_error("kernel radius must be >= ceil(3 * sigma)");
  GaussianKernel k;
  k.sigma = sigma;
  k.radius = radius;
  int side = 2 * radius + 1;
  k.samples.assign(size_t(side) * side, 0.0f);
  double denom = 2.0 * sigma * sigma;
  for (int dr = -radius; dr <= radius; ++dr)
    for (int dc = -radius; dc <= radius; ++dc) {
      int d2 = dc * dc + dr * dr;
      if (d2 > radius * radius) continue;  // circular truncation
      k.samples[size_t(dr + radius) * side + (dc + radius)] =
          float(std::exp(-double(d2) / denom));
    }
  return k;
}

DistanceMap build_distance_map(std::span<const PixelCoord> obstacles,
                               const Rect& bounds, const GaussianKernel& kernel) {
  if (bounds.empty()) throw std::runtime_error("build_distance_map: empty bounds");
  DistanceMap dm(bounds);
  int rad = kernel.radius;
  for (const PixelCoord& p : obstacles) {
    int lc = p.col - bounds.origin.col;
    int lr = p.row - bounds.origin.row;
    int c0 = std::max(lc - rad, 0), c1 = std::min(lc + rad, bounds.width - 1);
    int r0 = std::max(lr - rad, 0), r1 = std::min(lr + rad, bounds.height - 1);
    for (int r = r0; r <= r1; ++r) {
      float* row = dm.data.data() + size_t(r) * dm.width;
      const float* krow =
          kernel.samples.data() + size_t(r - lr + rad) * (2 * rad + 1);
      for (int c = c0; c <= c1; ++c) {
        float kv = krow[c - lc + rad];
        if (kv > row[c]) row[c] = kv;
      }
    }
  }
  return dm;
}

void merge_distance_maps_into(DistanceMap& global, const DistanceMap& local,
                              PixelCoord offset, DirtyMask& changed, int tile) {
  if (local.empty()) return;
  Rect footprint{{local.origin.col + offset.col, local.origin.row + offset.row},
                 local.width, local.height};
  if (!global.rect().contains(footprint)) {
    Rect target = global.rect().union_with(footprint).snapped_to(tile);
    global.grow_to(target);
  }
  changed.grow_to(global.rect());
  for (int r = 0; r < local.height; ++r)
    for (int c = 0; c < local.width; ++c) {
      float v = local.at(c, r);
      if (v <= 0.0f) continue;
      PixelCoord g{footprint.origin.col + c, footprint.origin.row + r};
      float& cur = global[g];
      if (v > cur) {
        cur = v;
        changed[g] = 1;
      }
    }
}

DirtyMask merge_distance_maps(DistanceMap& global, const DistanceMap& local,
                              PixelCoord offset, int tile) {
  DirtyMask changed(global.rect());
  merge_distance_maps_into(global, local, offset, changed, tile);
  return changed;
}

void save_distance_map(const std::string& path, const DistanceMap& dm,
                       double sigma, int radius) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "INCRTOPO_DMAP 1\n"
      << "width " << dm.width << "\n"
      << "height " << dm.height << "\n"
      << "origin " << dm.origin.col << " " << dm.origin.row << "\n"
      << "sigma " << sigma << "\n"
      << "radius " << radius << "\n"
      << "DATA\n";
  static_assert(sizeof(float) == 4);
  out.write(reinterpret_cast<const char*>(dm.data.data()),
            std::streamsize(dm.data.size() * 4));
  if (!out) throw std::runtime_error(path + ": write failed");
}

DistanceMap load_distance_map(const std::string& path, double* sigma,
                              int* radius) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line) || line != "INCRTOPO_DMAP 1")
    throw std::runtime_error(path + ": not a distance map file");
  DistanceMap dm;
  double sig = 0;
  int rad = 0;
  while (std::getline(in, line)) {
    if (line == "DATA") break;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "width") ss >> dm.width;
    else if (key == "height") ss >> dm.height;
    else if (key == "origin") ss >> dm.origin.col >> dm.origin.row;
    else if (key == "sigma") ss >> sig;
    else if (key == "radius") ss >> rad;
    else throw std::runtime_error(path + ": unknown header key '" + key + "'");
    if (!ss) throw std::runtime_error(path + ": malformed header line");
  }
  if (dm.width < 0 || dm.height < 0)
    throw std::runtime_error(path + ": bad dimensions");
  dm.data.resize(size_t(dm.width) * dm.height);
  in.read(reinterpret_cast<char*>(dm.data.data()),
          std::streamsize(dm.data.size() * 4));
  if (in.gcount() != std::streamsize(dm.data.size() * 4))
    throw std::runtime_error(path + ": truncated payload");
  if (sigma) *sigma = sig;
  if (radius) *radius = rad;
  return dm;
}

}  // namespace incrtopo
