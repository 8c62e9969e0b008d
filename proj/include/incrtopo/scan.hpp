#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "incrtopo/geometry.hpp"

namespace incrtopo {

// One range-scan observation taken at a known pose. Beam i points at
// pose.theta + angle_min + i * angle_increment; a range above range_max
// (infinity in the log encoding) means no return.
struct ScanFrame {
  int64_t frame_id = 0;
  Pose2D pose;
  double angle_min = 0.0;
  double angle_increment = 0.0;
  double range_max = 0.0;
  std::vector<double> ranges;
};

// Project every returning beam into the pixel holding its endpoint.
// Duplicates are removed, first occurrence kept; beam order is preserved.
std::vector<PixelCoord> scan_to_obstacles(const ScanFrame& frame,
                                          double resolution, double origin_x,
                                          double origin_y);

// Frame-log format, one frame per line, LF-terminated:
//   frame_id x y theta angle_min angle_increment range_max n r_1 ... r_n
// Floats carry six fractional digits; no-returns are written as "inf".
std::string format_frame(const ScanFrame& frame);
ScanFrame parse_frame(const std::string& line);

void write_frame_log(const std::string& path,
                     const std::vector<ScanFrame>& frames);
// Throws std::runtime_error naming the 1-based line number on bad input.
std::vector<ScanFrame> read_frame_log(const std::string& path);

}  // namespace incrtopo
