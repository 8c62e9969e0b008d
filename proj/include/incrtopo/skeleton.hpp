#pragma once

#include "incrtopo/raster.hpp"

namespace incrtopo {

// Positive part of the 4-neighbor discrete Laplacian of (scale * dm).
// Border neighbors replicate. The crease between obstacles ("rivulet") is a
// local minimum of the distance map, so it responds positively; obstacle
// peaks respond negatively and clamp to zero.
RidgeMap ridge_filter(const DistanceMap& dm, double scale = 255.0);

// Same filter evaluated only over `region` (global coordinates, must lie on
// the dm canvas); neighbors just outside the region read their true values.
RidgeMap ridge_filter_region(const DistanceMap& dm, const Rect& region,
                             double scale = 255.0);

// flag = value > threshold (strictly bigger).
BinaryMap binarize(const RidgeMap& rm, double threshold = 10.0);

// Guo-Hall two-subiteration thinning to a fixpoint. Pixels set in
// `protected_pixels` (same canvas, may be null) are never deleted; this
// carries the appended global-skeleton layer during incremental updates.
// Preserves 8-connectivity and endpoints; output has no fully set 2x2 block.
SkeletonMap thin(const BinaryMap& bm,
                 const SkeletonMap* protected_pixels = nullptr);

// Removes redundant T-junction cross pixels: a set pixel with exactly three
// of its four orthogonal neighbors set is cleared iff its set neighbors form
// a single connected arc of the 8-neighborhood ring, so removal never breaks
// local connectivity. Single row-major pass, in-place semantics (earlier
// removals are visible to later decisions). Protected pixels are kept.
SkeletonMap suppress_t_cross(const SkeletonMap& sk,
                             const SkeletonMap* protected_pixels = nullptr);

// True when clearing the center of this 3x3 neighborhood is allowed by the
// T-suppression rule. Bits of `neighbors` follow the ring order
// N, NE, E, SE, S, SW, W, NW (bit 0 = north, clockwise, row grows downward).
// Exposed so tests can enumerate all 256 patterns.
bool t_cross_removable(unsigned neighbors);

}  // namespace incrtopo
