#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace incrtopo {

// Integer pixel position in the global map frame. col grows with world x,
// row with world y. May be negative (the canvas origin floats).
struct PixelCoord {
  int col = 0;
  int row = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
  friend auto operator<=>(const PixelCoord& a, const PixelCoord& b) {
    // row-major ordering: scan order of the raster
    if (a.row != b.row) return a.row <=> b.row;
    return a.col <=> b.col;
  }
};

struct PixelCoordHash {
  size_t operator()(const PixelCoord& p) const {
    return std::hash<int64_t>{}((int64_t(p.row) << 32) ^ uint32_t(p.col));
  }
};

// Axis-aligned pixel rectangle, half-open: [origin, origin + (width, height)).
struct Rect {
  PixelCoord origin{0, 0};
  int width = 0;
  int height = 0;

  bool empty() const { return width <= 0 || height <= 0; }
  int x0() const { return origin.col; }
  int y0() const { return origin.row; }
  int x1() const { return origin.col + width; }   // exclusive
  int y1() const { return origin.row + height; }  // exclusive

  bool contains(PixelCoord p) const {
    return p.col >= x0() && p.col < x1() && p.row >= y0() && p.row < y1();
  }
  bool contains(const Rect& r) const {
    return r.empty() ||
           (r.x0() >= x0() && r.x1() <= x1() && r.y0() >= y0() && r.y1() <= y1());
  }

  Rect expanded(int margin) const {
    if (empty()) return *this;
    return {{origin.col - margin, origin.row - margin},
            width + 2 * margin, height + 2 * margin};
  }

  Rect intersect(const Rect& r) const {
    int ax = std::max(x0(), r.x0()), ay = std::max(y0(), r.y0());
    int bx = std::min(x1(), r.x1()), by = std::min(y1(), r.y1());
    if (bx <= ax || by <= ay) return {};
    return {{ax, ay}, bx - ax, by - ay};
  }

  Rect union_with(const Rect& r) const {
    if (empty()) return r;
    if (r.empty()) return *this;
    int ax = std::min(x0(), r.x0()), ay = std::min(y0(), r.y0());
    int bx = std::max(x1(), r.x1()), by = std::max(y1(), r.y1());
    return {{ax, ay}, bx - ax, by - ay};
  }

  // Smallest tile-aligned rectangle covering this one. Tiles sit on the
  // absolute lattice (multiples of `tile`), so covering is order independent.
  Rect snapped_to(int tile) const {
    if (empty()) return *this;
    auto fdiv = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
    auto cdiv = [](int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); };
    int ax = fdiv(x0(), tile) * tile;
    int ay = fdiv(y0(), tile) * tile;
    int bx = cdiv(x1(), tile) * tile;
    int by = cdiv(y1(), tile) * tile;
    return {{ax, ay}, bx - ax, by - ay};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, normalized to [-pi, pi)
};

inline double normalize_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  return a - M_PI;
}

// Pixel (c, r) covers the world square
// [ox + c*res, ox + (c+1)*res) x [oy + r*res, oy + (r+1)*res).
inline PixelCoord world_to_pixel(double wx, double wy, double resolution,
                                 double ox, double oy) {
  return {int(std::floor((wx - ox) / resolution)),
          int(std::floor((wy - oy) / resolution))};
}

inline double pixel_distance(PixelCoord a, PixelCoord b) {
  double dc = a.col - b.col, dr = a.row - b.row;
  return std::sqrt(dc * dc + dr * dr);
}

// 8-connected straight segment between two pixels, endpoints included.
inline std::vector<PixelCoord> bresenham_line(PixelCoord a, PixelCoord b) {
  std::vector<PixelCoord> out;
  int dx = std::abs(b.col - a.col), sx = a.col < b.col ? 1 : -1;
  int dy = -std::abs(b.row - a.row), sy = a.row < b.row ? 1 : -1;
  int err = dx + dy;
  PixelCoord p = a;
  for (;;) {
    out.push_back(p);
    if (p == b) break;
    int e2 = 2 * err;
    if (e2 >= dy) { err += dy; p.col += sx; }
    if (e2 <= dx) { err += dx; p.row += sy; }
  }
  return out;
}

// Sum of per-step lengths along an 8-connected pixel path
// (1 for orthogonal steps, sqrt(2) for diagonal steps).
inline double path_length(const std::vector<PixelCoord>& path) {
  double len = 0.0;
  for (size_t i = 1; i < path.size(); ++i) {
    bool diag = path[i].col != path[i - 1].col && path[i].row != path[i - 1].row;
    len += diag ? M_SQRT2 : 1.0;
  }
  return len;
}

}  // namespace incrtopo
