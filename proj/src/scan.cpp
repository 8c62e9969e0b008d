#include "incrtopo/scan.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace incrtopo {

std::vector<PixelCoord> scan_to_obstacles(const ScanFrame& frame,
                                          double resolution, double origin_x,
                                          double origin_y) {
  if (resolution <= 0)
    throw std::runtime_error("scan_to_obstacles: resolution must be positive");
  std::vector<PixelCoord> out;
  std::unordered_set<PixelCoord, PixelCoordHash> seen;
  for (size_t i = 0; i < frame.ranges.size(); ++i) {
    double r = frame.ranges[i];
    if (!std::isfinite(r) || r > frame.range_max) continue;
    double a = frame.pose.theta + frame.angle_min + double(i) * frame.angle_increment;
    double wx = frame.pose.x + r * std::cos(a);
    double wy = frame.pose.y + r * std::sin(a);
    PixelCoord p = world_to_pixel(wx, wy, resolution, origin_x, origin_y);
    if (seen.insert(p).second) out.push_back(p);
  }
  return out;
}

namespace {

void append_float(std::string& s, double v) {
  char buf[32];
  if (std::isinf(v)) {
    s += "inf";
  } else {
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    s += buf;
  }
}

}  // namespace

std::string format_frame(const ScanFrame& f) {
  std::string s = std::to_string(f.frame_id);
  s += ' ';
  append_float(s, f.pose.x); s += ' ';
  append_float(s, f.pose.y); s += ' ';
  append_float(s, f.pose.theta); s += ' ';
  append_float(s, f.angle_min); s += ' ';
  append_float(s, f.angle_increment); s += ' ';
  append_float(s, f.range_max); s += ' ';
  s += std::to_string(f.ranges.size());
  for (double r : f.ranges) {
    s += ' ';
    append_float(s, r);
  }
  return s;
}

ScanFrame parse_frame(const std::string& line) {
  const char* p = line.c_str();
  char* end = nullptr;
  auto next = [&](bool* inf_ok = nullptr) -> double {
    while (*p == ' ') ++p;
    if (inf_ok && std::strncmp(p, "inf", 3) == 0) {
      p += 3;
      return std::numeric_limits<double>::infinity();
    }
    double v = std::strtod(p, &end);
    if (end == p) throw std::runtime_error("malformed number");
    p = end;
    return v;
  };
  ScanFrame f;
  f.frame_id = int64_t(next());
  f.pose.x = next();
  f.pose.y = next();
  f.pose.theta = next();
  f.angle_min = next();
  f.angle_increment = next();
  f.range_max = next();
  long n = long(next());
  if (n < 0) throw std::runtime_error("negative beam count");
  f.ranges.resize(size_t(n));
  bool inf_ok = true;
  for (long i = 0; i < n; ++i) f.ranges[i] = next(&inf_ok);
  while (*p == ' ' || *p == '\r') ++p;
  if (*p != '\0') throw std::runtime_error("trailing data");
  return f;
}

void write_frame_log(const std::string& path,
                     const std::vector<ScanFrame>& frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  for (const ScanFrame& f : frames) out << format_frame(f) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<ScanFrame> read_frame_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<ScanFrame> frames;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      frames.push_back(parse_frame(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  return frames;
}

}  // namespace incrtopo
