#pragma once

#include <span>
#include <string>

#include "incrtopo/raster.hpp"

namespace incrtopo {

/// Truncated, unnormalized Gaussian stamp: sample(d) = exp(-d^2 / (2 sigma^2))
/// with peak 1 at the center, zero outside the disk of `radius` pixels.
/// The distance map of a scene is the pointwise maximum of one stamp per
/// obstacle pixel, so a pixel's value is a monotone decreasing function of
/// the Euclidean distance to its nearest obstacle (0 beyond the radius).
struct GaussianKernel {
  double sigma = 0.0;
  int radius = 0;
  std::vector<float> samples;  // (2*radius+1)^2, row-major, center at (radius, radius)

  // radius < 0 picks the default ceil(3.5 * sigma); anything below
  // ceil(3 * sigma) is rejected.
  static GaussianKernel make(double sigma, int radius = -1);

  float at(int dc, int dr) const {
    return samples[size_t(dr + radius) * (2 * radius + 1) + (dc + radius)];
  }
};

DistanceMap build_distance_map(std::span<const PixelCoord> obstacles,
                               const Rect& bounds, const GaussianKernel& kernel);

// Pointwise max-merge of `local` into `global`. `offset` shifts the local
// map's global placement (0,0 when the local canvas is already anchored in
// the global frame). The global canvas grows in 64 px tile increments when
// the local footprint overhangs; `changed` accumulates (ORs) exactly the
// pixels whose value strictly increased and is grown alongside.
void merge_distance_maps_into(DistanceMap& global, const DistanceMap& local,
                              PixelCoord offset, DirtyMask& changed,
                              int tile = 64);

// Convenience wrapper returning this merge's mask only.
DirtyMask merge_distance_maps(DistanceMap& global, const DistanceMap& local,
                              PixelCoord offset = {0, 0}, int tile = 64);

// 32-bit float binary raster with a small text header (dims, canvas origin,
// sigma/radius), little-endian row-major payload.
void save_distance_map(const std::string& path, const DistanceMap& dm,
                       double sigma, int radius);
DistanceMap load_distance_map(const std::string& path, double* sigma = nullptr,
                              int* radius = nullptr);

}  // namespace incrtopo
