#include "incrtopo/skeleton.hpp"

#include <array>
#include <stdexcept>

namespace incrtopo {

namespace {

// Reads dm at a global coordinate, replicating the nearest canvas pixel for
// out-of-canvas neighbors (keeps the physical border response neutral).
float dm_replicated(const DistanceMap& dm, int gc, int gr) {
  int c = std::clamp(gc - dm.origin.col, 0, dm.width - 1);
  int r = std::clamp(gr - dm.origin.row, 0, dm.height - 1);
  return dm.at(c, r);
}

}  // namespace

RidgeMap ridge_filter_region(const DistanceMap& dm, const Rect& region,
                             double scale) {
  if (scale <= 0) throw std::runtime_error("ridge_filter: scale must be positive");
  if (!dm.rect().contains(region))
    throw std::runtime_error("ridge_filter_region: region exceeds canvas");
  RidgeMap out(region);
  if (dm.empty()) return out;
  for (int r = 0; r < region.height; ++r) {
    int gr = region.origin.row + r;
    for (int c = 0; c < region.width; ++c) {
      int gc = region.origin.col + c;
      double center = dm_replicated(dm, gc, gr);
      double lap = dm_replicated(dm, gc, gr - 1) + dm_replicated(dm, gc, gr + 1) +
                   dm_replicated(dm, gc - 1, gr) + dm_replicated(dm, gc + 1, gr) -
                   4.0 * center;
      lap *= scale;
      out.at(c, r) = lap > 0.0 ? float(lap) : 0.0f;
    }
  }
  return out;
}

RidgeMap ridge_filter(const DistanceMap& dm, double scale) {
  if (dm.empty()) {
    if (scale <= 0) throw std::runtime_error("ridge_filter: scale must be positive");
    RidgeMap out;
    out.origin = dm.origin;
    return out;
  }
  return ridge_filter_region(dm, dm.rect(), scale);
}

BinaryMap binarize(const RidgeMap& rm, double threshold) {
  BinaryMap out(rm.rect());
  for (size_t i = 0; i < rm.data.size(); ++i)
    out.data[i] = rm.data[i] > threshold ? 1 : 0;
  return out;
}

namespace {

// Guo-Hall deletion tables, one per subiteration, indexed by the 8-neighbor
// ring mask (bit 0 = N, clockwise). A pixel is deletable when
//   C(p) == 1  and  2 <= min(N1, N2) <= 3  and  the subiteration's
// directional term is 0; the N >= 2 bound is what preserves endpoints.
std::array<std::array<uint8_t, 256>, 2> make_guo_hall_luts() {
  std::array<std::array<uint8_t, 256>, 2> lut{};
  for (unsigned m = 0; m < 256; ++m) {
    int p2 = (m >> 0) & 1;  // N
    int p3 = (m >> 1) & 1;  // NE
    int p4 = (m >> 2) & 1;  // E
    int p5 = (m >> 3) & 1;  // SE
    int p6 = (m >> 4) & 1;  // S
    int p7 = (m >> 5) & 1;  // SW
    int p8 = (m >> 6) & 1;  // W
    int p9 = (m >> 7) & 1;  // NW
    int c = (!p2 && (p3 || p4)) + (!p4 && (p5 || p6)) +
            (!p6 && (p7 || p8)) + (!p8 && (p9 || p2));
    int n1 = (p9 || p2) + (p3 || p4) + (p5 || p6) + (p7 || p8);
    int n2 = (p2 || p3) + (p4 || p5) + (p6 || p7) + (p8 || p9);
    int n = std::min(n1, n2);
    bool base = c == 1 && n >= 2 && n <= 3;
    lut[0][m] = base && (((p6 || p7 || !p9) && p8) == 0);
    lut[1][m] = base && (((p2 || p3 || !p5) && p4) == 0);
  }
  return lut;
}

const auto kGuoHallLut = make_guo_hall_luts();

inline unsigned ring_mask(const BinaryMap& img, int c, int r) {
  auto v = [&](int cc, int rr) -> unsigned {
    return img.in_bounds(cc, rr) && img.at(cc, rr) ? 1u : 0u;
  };
  return v(c, r - 1) | (v(c + 1, r - 1) << 1) | (v(c + 1, r) << 2) |
         (v(c + 1, r + 1) << 3) | (v(c, r + 1) << 4) | (v(c - 1, r + 1) << 5) |
         (v(c - 1, r) << 6) | (v(c - 1, r - 1) << 7);
}

}  // namespace

SkeletonMap thin(const BinaryMap& bm, const SkeletonMap* protected_pixels) {
  if (protected_pixels && !protected_pixels->empty() &&
      protected_pixels->rect() != bm.rect())
    throw std::runtime_error("thin: protected layer canvas mismatch");
  SkeletonMap img = bm;
  std::vector<PixelCoord> doomed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int sub = 0; sub < 2; ++sub) {
      doomed.clear();
      for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c) {
          if (!img.at(c, r)) continue;
          if (protected_pixels && !protected_pixels->empty() &&
              protected_pixels->at(c, r))
            continue;
          if (kGuoHallLut[sub][ring_mask(img, c, r)]) doomed.push_back({c, r});
        }
      for (const PixelCoord& p : doomed) img.at(p.col, p.row) = 0;
      changed = changed || !doomed.empty();
    }
  }
  return img;
}

bool t_cross_removable(unsigned neighbors) {
  // exactly three of the four orthogonal neighbors (N, E, S, W)
  int orth = ((neighbors >> 0) & 1) + ((neighbors >> 2) & 1) +
             ((neighbors >> 4) & 1) + ((neighbors >> 6) & 1);
  if (orth != 3) return false;
  // The set neighbors must form one connected arc of the ring; then the
  // center is a redundant shortcut and removal keeps them linked.
  unsigned m = neighbors & 0xff;
  if (m == 0 || m == 0xff) return false;
  // count 0->1 transitions around the ring
  int rises = 0;
  for (int i = 0; i < 8; ++i) {
    unsigned cur = (m >> i) & 1;
    unsigned nxt = (m >> ((i + 1) % 8)) & 1;
    if (!cur && nxt) ++rises;
  }
  return rises == 1;
}

SkeletonMap suppress_t_cross(const SkeletonMap& sk,
                             const SkeletonMap* protected_pixels) {
  SkeletonMap out = sk;
  for (int r = 0; r < out.height; ++r)
    for (int c = 0; c < out.width; ++c) {
      if (!out.at(c, r)) continue;
      if (protected_pixels && !protected_pixels->empty() &&
          protected_pixels->at(c, r))
        continue;
      if (t_cross_removable(ring_mask(out, c, r))) out.at(c, r) = 0;
    }
  return out;
}

}  // namespace incrtopo
