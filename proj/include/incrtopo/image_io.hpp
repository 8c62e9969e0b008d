#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "incrtopo/raster.hpp"

namespace incrtopo {

// 8-bit grayscale image buffer used for file I/O.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // row-major

  uint8_t& at(int c, int r) { return pixels[size_t(r) * width + c]; }
  uint8_t at(int c, int r) const { return pixels[size_t(r) * width + c]; }
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // row-major, 3 bytes per pixel

  RgbImage() = default;
  RgbImage(int w, int h, uint8_t fill = 255)
      : width(w), height(h), pixels(size_t(w) * h * 3, fill) {}
  void set(int c, int r, uint8_t red, uint8_t green, uint8_t blue) {
    size_t i = (size_t(r) * width + c) * 3;
    pixels[i] = red; pixels[i + 1] = green; pixels[i + 2] = blue;
  }
};

// Grayscale readers/writers. Format is sniffed from content: PGM P2/P5 and
// 8-bit grayscale PNG are accepted. Throws std::runtime_error on bad input.
GrayImage read_gray_image(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& img);
void write_png_gray(const std::string& path, const GrayImage& img);
void write_png_rgb(const std::string& path, const RgbImage& img);

// 1-bit PBM (P4) for binary rasters; set pixels are written black.
void write_pbm(const std::string& path, const BinaryMap& m);
BinaryMap read_pbm(const std::string& path);

}  // namespace incrtopo
