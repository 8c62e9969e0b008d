#pragma once

#include <string>

#include "incrtopo/image_io.hpp"
#include "incrtopo/occupancy.hpp"
#include "incrtopo/raster.hpp"
#include "incrtopo/topo_graph.hpp"

namespace incrtopo {

// Grayscale heat render of a distance map (value 1.0 -> 255).
GrayImage render_distance_map(const DistanceMap& dm);

RgbImage render_grid(const OccupancyGrid& grid);
RgbImage rgb_from_gray(const GrayImage& img);

// Overlays draw into `img`, which shares the canvas of `canvas_rect`.
void overlay_skeleton(RgbImage& img, const Rect& canvas_rect,
                      const SkeletonMap& sk);
void overlay_mask(RgbImage& img, const Rect& canvas_rect, const DirtyMask& mask);
void overlay_graph(RgbImage& img, const Rect& canvas_rect, const TopoGraph& g);

}  // namespace incrtopo
