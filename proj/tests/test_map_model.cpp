#include <doctest.h>

#include <cmath>
#include <fstream>

#include "incrtopo/image_io.hpp"
#include "incrtopo/occupancy.hpp"
#include "incrtopo/scan.hpp"
#include "test_util.hpp"

using namespace incrtopo;
using testutil::TempDir;

namespace {

void write_gray_pgm(const std::string& path, int w, int h, uint8_t value) {
  GrayImage img;
  img.width = w;
  img.height = h;
  img.pixels.assign(size_t(w) * h, value);
  write_pgm(path, img);
}

ScanFrame single_beam(Pose2D pose, double range, double range_max = 10.0) {
  ScanFrame f;
  f.pose = pose;
  f.angle_min = 0.0;
  f.angle_increment = 0.0;
  f.range_max = range_max;
  f.ranges = {range};
  return f;
}

}  // namespace

TEST_CASE("load_grid classifies gray bands") {
  TempDir dir("load_grid");

  write_gray_pgm(dir.file("black.pgm"), 3, 3, 0);
  OccupancyGrid black = load_grid(dir.file("black.pgm"), 100, 200);
  for (Cell c : black.cells) CHECK(c == Cell::kOccupied);
  CHECK(black.occupied_pixels().size() == 9);

  write_gray_pgm(dir.file("white.pgm"), 3, 3, 255);
  OccupancyGrid white = load_grid(dir.file("white.pgm"), 100, 200);
  for (Cell c : white.cells) CHECK(c == Cell::kFree);

  GrayImage mixed;
  mixed.width = 3;
  mixed.height = 1;
  mixed.pixels = {0, 150, 255};
  write_pgm(dir.file("mixed.pgm"), mixed);
  OccupancyGrid grid = load_grid(dir.file("mixed.pgm"), 100, 200);
  CHECK(grid.at(0, 0) == Cell::kOccupied);
  CHECK(grid.at(1, 0) == Cell::kUnknown);
  CHECK(grid.at(2, 0) == Cell::kFree);

  // threshold boundaries are strict on both sides
  GrayImage edges;
  edges.width = 2;
  edges.height = 1;
  edges.pixels = {100, 200};
  write_pgm(dir.file("edges.pgm"), edges);
  OccupancyGrid eg = load_grid(dir.file("edges.pgm"), 100, 200);
  CHECK(eg.at(0, 0) == Cell::kUnknown);
  CHECK(eg.at(1, 0) == Cell::kUnknown);
}

TEST_CASE("load_grid reads ASCII PGM and PNG") {
  TempDir dir("formats");
  {
    std::ofstream out(dir.file("a.pgm"));
    out << "P2\n# comment\n2 2\n255\n0 255\n128 0\n";
  }
  OccupancyGrid grid = load_grid(dir.file("a.pgm"));
  CHECK(grid.at(0, 0) == Cell::kOccupied);
  CHECK(grid.at(1, 0) == Cell::kFree);
  CHECK(grid.at(0, 1) == Cell::kUnknown);

  GrayImage img;
  img.width = 2;
  img.height = 1;
  img.pixels = {0, 255};
  write_png_gray(dir.file("a.png"), img);
  OccupancyGrid png = load_grid(dir.file("a.png"));
  CHECK(png.at(0, 0) == Cell::kOccupied);
  CHECK(png.at(1, 0) == Cell::kFree);
}

TEST_CASE("load_grid errors") {
  TempDir dir("load_errors");
  CHECK_THROWS(load_grid(dir.file("missing.pgm")));
  {
    std::ofstream out(dir.file("junk.pgm"), std::ios::binary);
    out << "not an image at all";
  }
  CHECK_THROWS(load_grid(dir.file("junk.pgm")));
  // color PNG rejected
  RgbImage rgb(2, 2);
  write_png_rgb(dir.file("color.png"), rgb);
  CHECK_THROWS(load_grid(dir.file("color.png")));
  // inverted thresholds
  write_gray_pgm(dir.file("ok.pgm"), 2, 2, 0);
  CHECK_THROWS(load_grid(dir.file("ok.pgm"), 200, 100));
}

TEST_CASE("grid round trip with sidecar metadata") {
  TempDir dir("roundtrip");
  OccupancyGrid grid(4, 3);
  grid.resolution = 0.25;
  grid.origin_x = -2.0;
  grid.origin_y = 1.5;
  grid.at(0, 0) = Cell::kOccupied;
  grid.at(1, 0) = Cell::kUnknown;
  grid.at(2, 2) = Cell::kOccupied;
  save_grid(dir.file("g.pgm"), grid);
  OccupancyGrid back = load_grid(dir.file("g.pgm"));
  CHECK(back.width == grid.width);
  CHECK(back.height == grid.height);
  CHECK(back.cells == grid.cells);
  CHECK(back.resolution == doctest::Approx(0.25));
  CHECK(back.origin_x == doctest::Approx(-2.0));
  CHECK(back.origin_y == doctest::Approx(1.5));
}

TEST_CASE("scan_to_obstacles projects beams") {
  // axis-aligned beam
  auto out = scan_to_obstacles(single_beam({0, 0, 0}, 2.0), 1.0, 0, 0);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == PixelCoord{2, 0});

  // rotated pose, finer resolution: world point (0, 3) -> pixel (0, 6)
  out = scan_to_obstacles(single_beam({0, 0, M_PI / 2}, 3.0), 0.5, 0, 0);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == PixelCoord{0, 6});

  // all beams past range_max emit nothing
  ScanFrame f;
  f.pose = {0, 0, 0};
  f.angle_min = 0;
  f.angle_increment = 0.1;
  f.range_max = 5.0;
  f.ranges = {6.0, 7.0, INFINITY};
  CHECK(scan_to_obstacles(f, 1.0, 0, 0).empty());

  // duplicates removed
  ScanFrame dup;
  dup.pose = {0.5, 0.5, 0};
  dup.angle_min = 0;
  dup.angle_increment = 1e-5;
  dup.range_max = 10.0;
  dup.ranges = {2.0, 2.0, 2.0};
  CHECK(scan_to_obstacles(dup, 1.0, 0, 0).size() == 1);
}

TEST_CASE("scan_to_obstacles translation equivariance") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI), rr(0.1, 7.0);
  ScanFrame f;
  f.pose = {3.25, -1.5, 0.7};
  f.angle_min = -1.0;
  f.angle_increment = 0.05;
  f.range_max = 8.0;
  for (int i = 0; i < 40; ++i) f.ranges.push_back(rr(rng));
  double res = 0.25;
  auto base = scan_to_obstacles(f, res, 0, 0);

  // shift by integer pixel multiples
  ScanFrame g = f;
  g.pose.x += 3 * res;
  g.pose.y -= 5 * res;
  auto shifted = scan_to_obstacles(g, res, 0, 0);
  REQUIRE(base.size() == shifted.size());
  for (size_t i = 0; i < base.size(); ++i) {
    CHECK(shifted[i].col == base[i].col + 3);
    CHECK(shifted[i].row == base[i].row - 5);
  }
}

TEST_CASE("frame log round trip and parse errors") {
  TempDir dir("framelog");
  ScanFrame f;
  f.frame_id = 12;
  f.pose = {1.25, -3.5, 0.75};
  f.angle_min = -M_PI;
  f.angle_increment = 0.0174533;
  f.range_max = 8.0;
  f.ranges = {1.0, INFINITY, 2.5};
  write_frame_log(dir.file("a.log"), {f});

  auto frames = read_frame_log(dir.file("a.log"));
  REQUIRE(frames.size() == 1);
  CHECK(frames[0].frame_id == 12);
  CHECK(frames[0].pose.x == doctest::Approx(1.25));
  CHECK(frames[0].ranges.size() == 3);
  CHECK(std::isinf(frames[0].ranges[1]));
  CHECK(frames[0].ranges[2] == doctest::Approx(2.5));

  // byte-exact formatting
  CHECK(format_frame(frames[0]) == format_frame(f));

  {
    std::ofstream out(dir.file("bad.log"));
    out << format_frame(f) << "\n";
    out << "7 0.0 0.0 0.0 0.0 0.1 8.0 3 1.0 oops 2.0\n";
  }
  try {
    read_frame_log(dir.file("bad.log"));
    FAIL("expected parse error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}
