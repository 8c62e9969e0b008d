#include "incrtopo/render.hpp"

#include <algorithm>
#include <cmath>

namespace incrtopo {

GrayImage render_distance_map(const DistanceMap& dm) {
  GrayImage img;
  img.width = dm.width;
  img.height = dm.height;
  img.pixels.resize(dm.data.size());
  for (size_t i = 0; i < dm.data.size(); ++i) {
    double v = std::clamp(double(dm.data[i]) * 255.0, 0.0, 255.0);
    img.pixels[i] = uint8_t(std::lround(v));
  }
  return img;
}

RgbImage render_grid(const OccupancyGrid& grid) {
  RgbImage img(grid.width, grid.height);
  for (int r = 0; r < grid.height; ++r)
    for (int c = 0; c < grid.width; ++c) {
      uint8_t g = 255;
      switch (grid.at(c, r)) {
        case Cell::kOccupied: g = 0; break;
        case Cell::kUnknown: g = 128; break;
        case Cell::kFree: g = 255; break;
      }
      img.set(c, r, g, g, g);
    }
  return img;
}

RgbImage rgb_from_gray(const GrayImage& src) {
  RgbImage img(src.width, src.height);
  for (int r = 0; r < src.height; ++r)
    for (int c = 0; c < src.width; ++c) {
      uint8_t g = src.at(c, r);
      img.set(c, r, g, g, g);
    }
  return img;
}

namespace {

void blend(RgbImage& img, int c, int r, uint8_t red, uint8_t green,
           uint8_t blue, double alpha) {
  if (c < 0 || c >= img.width || r < 0 || r >= img.height) return;
  size_t i = (size_t(r) * img.width + c) * 3;
  img.pixels[i] = uint8_t(img.pixels[i] * (1 - alpha) + red * alpha);
  img.pixels[i + 1] = uint8_t(img.pixels[i + 1] * (1 - alpha) + green * alpha);
  img.pixels[i + 2] = uint8_t(img.pixels[i + 2] * (1 - alpha) + blue * alpha);
}

}  // namespace

void overlay_skeleton(RgbImage& img, const Rect& canvas_rect,
                      const SkeletonMap& sk) {
  for (int r = 0; r < sk.height; ++r)
    for (int c = 0; c < sk.width; ++c)
      if (sk.at(c, r))
        blend(img, c + sk.origin.col - canvas_rect.origin.col,
              r + sk.origin.row - canvas_rect.origin.row, 220, 40, 40, 1.0);
}

void overlay_mask(RgbImage& img, const Rect& canvas_rect, const DirtyMask& mask) {
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c)
      if (mask.at(c, r))
        blend(img, c + mask.origin.col - canvas_rect.origin.col,
              r + mask.origin.row - canvas_rect.origin.row, 20, 120, 40, 0.35);
}

void overlay_graph(RgbImage& img, const Rect& canvas_rect, const TopoGraph& g) {
  for (const Edge& e : g.edges)
    for (const PixelCoord& p : e.path)
      blend(img, p.col - canvas_rect.origin.col, p.row - canvas_rect.origin.row,
            40, 80, 230, 1.0);
  for (const Vertex& v : g.vertices)
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc)
        blend(img, v.pos.col + dc - canvas_rect.origin.col,
              v.pos.row + dr - canvas_rect.origin.row, 230, 60, 30, 1.0);
}

}  // namespace incrtopo
