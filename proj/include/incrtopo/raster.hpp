#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

#include "incrtopo/geometry.hpp"

namespace incrtopo {

// Dense row-major raster anchored in the global pixel frame. `origin` is the
// global coordinate of cell (0, 0); out-of-canvas reads return a default.
template <typename T>
struct Raster {
  int width = 0;
  int height = 0;
  PixelCoord origin{0, 0};
  std::vector<T> data;

  Raster() = default;
  Raster(int w, int h, PixelCoord org = {0, 0}, T fill = T{})
      : width(w), height(h), origin(org), data(size_t(w) * h, fill) {}
  explicit Raster(const Rect& r, T fill = T{})
      : Raster(r.width, r.height, r.origin, fill) {}

  Rect rect() const { return {origin, width, height}; }
  bool empty() const { return width <= 0 || height <= 0; }

  // local (canvas) indexing
  T& at(int c, int r) { return data[size_t(r) * width + c]; }
  const T& at(int c, int r) const { return data[size_t(r) * width + c]; }
  bool in_bounds(int c, int r) const {
    return c >= 0 && c < width && r >= 0 && r < height;
  }

  // global-frame indexing
  bool contains(PixelCoord p) const {
    return in_bounds(p.col - origin.col, p.row - origin.row);
  }
  T& operator[](PixelCoord p) {
    return at(p.col - origin.col, p.row - origin.row);
  }
  const T& operator[](PixelCoord p) const {
    return at(p.col - origin.col, p.row - origin.row);
  }
  T get(PixelCoord p, T fallback = T{}) const {
    return contains(p) ? (*this)[p] : fallback;
  }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }

  // Re-anchor the canvas on a larger rectangle; existing content keeps its
  // global position, new cells are default-initialized.
  void grow_to(const Rect& target) {
    if (target.empty() || rect() == target) return;
    Rect merged = rect().union_with(target);
    if (merged == rect()) return;
    Raster<T> bigger(merged);
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c)
        bigger.at(c + origin.col - merged.origin.col,
                  r + origin.row - merged.origin.row) = at(c, r);
    *this = std::move(bigger);
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

using DistanceMap = Raster<float>;   // max-of-Gaussians obstacle proximity
using RidgeMap = Raster<float>;      // clamped Laplacian response
using BinaryMap = Raster<uint8_t>;   // 0 / 1
using SkeletonMap = Raster<uint8_t>; // 0 / 1, thin
using DirtyMask = Raster<uint8_t>;   // 0 / 1

// Bounding box of set pixels, in global coordinates. nullopt when all clear.
template <typename T>
std::optional<Rect> bbox_of_set(const Raster<T>& m) {
  int x0 = m.width, y0 = m.height, x1 = -1, y1 = -1;
  for (int r = 0; r < m.height; ++r)
    for (int c = 0; c < m.width; ++c)
      if (m.at(c, r)) {
        x0 = std::min(x0, c); y0 = std::min(y0, r);
        x1 = std::max(x1, c); y1 = std::max(y1, r);
      }
  if (x1 < 0) return std::nullopt;
  return Rect{{x0 + m.origin.col, y0 + m.origin.row}, x1 - x0 + 1, y1 - y0 + 1};
}

template <typename T>
size_t count_set(const Raster<T>& m) {
  size_t n = 0;
  for (const T& v : m.data) n += (v != T{});
  return n;
}

// Copy of `src` restricted to the global-frame rectangle `r`; cells outside
// the source canvas default-initialize.
template <typename T>
Raster<T> copy_rect(const Raster<T>& src, const Rect& r) {
  Raster<T> out(r);
  for (int rr = 0; rr < r.height; ++rr)
    for (int cc = 0; cc < r.width; ++cc)
      out.at(cc, rr) = src.get({r.origin.col + cc, r.origin.row + rr});
  return out;
}

template <typename T>
void accumulate_or(Raster<T>& into, const Raster<T>& from) {
  into.grow_to(from.rect());
  for (int r = 0; r < from.height; ++r)
    for (int c = 0; c < from.width; ++c)
      if (from.at(c, r))
        into[{c + from.origin.col, r + from.origin.row}] = T{1};
}

}  // namespace incrtopo
