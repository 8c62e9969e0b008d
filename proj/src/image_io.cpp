#include "incrtopo/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace incrtopo {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Skips PNM whitespace and '#' comments, then reads one unsigned integer.
int next_pnm_int(const std::string& s, size_t& i, const std::string& path) {
  while (i < s.size()) {
    if (std::isspace(uint8_t(s[i]))) { ++i; continue; }
    if (s[i] == '#') { while (i < s.size() && s[i] != '\n') ++i; continue; }
    break;
  }
  if (i >= s.size() || !std::isdigit(uint8_t(s[i]))) fail(path, "malformed PNM header");
  int v = 0;
  while (i < s.size() && std::isdigit(uint8_t(s[i]))) v = v * 10 + (s[i++] - '0');
  return v;
}

GrayImage read_pgm(const std::string& path, const std::string& bytes) {
  bool ascii = bytes[1] == '2';
  size_t i = 2;
  GrayImage img;
  img.width = next_pnm_int(bytes, i, path);
  img.height = next_pnm_int(bytes, i, path);
  int maxval = next_pnm_int(bytes, i, path);
  if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 65535)
    fail(path, "bad PGM dimensions");
  size_t n = size_t(img.width) * img.height;
  img.pixels.resize(n);
  if (ascii) {
    for (size_t k = 0; k < n; ++k) {
      int v = next_pnm_int(bytes, i, path);
      img.pixels[k] = uint8_t(maxval > 255 ? v * 255 / maxval : v);
    }
  } else {
    ++i;  // single whitespace after maxval
    int bpp = maxval > 255 ? 2 : 1;
    if (bytes.size() - i < n * bpp) fail(path, "truncated PGM payload");
    for (size_t k = 0; k < n; ++k) {
      if (bpp == 1) {
        img.pixels[k] = uint8_t(bytes[i + k]);
      } else {
        int v = (uint8_t(bytes[i + 2 * k]) << 8) | uint8_t(bytes[i + 2 * k + 1]);
        img.pixels[k] = uint8_t(v * 255 / maxval);
      }
    }
  }
  return img;
}

struct PngReadCtx {
  const uint8_t* data;
  size_t size;
  size_t pos;
};

void png_read_fn(png_structp png, png_bytep out, png_size_t n) {
  auto* ctx = static_cast<PngReadCtx*>(png_get_io_ptr(png));
  if (ctx->pos + n > ctx->size) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, ctx->data + ctx->pos, n);
  ctx->pos += n;
}

GrayImage read_png_gray(const std::string& path, const std::string& bytes) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(path, "png init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) { png_destroy_read_struct(&png, nullptr, nullptr); fail(path, "png init failed"); }

  GrayImage img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "invalid PNG");
  }
  PngReadCtx ctx{reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size(), 0};
  png_set_read_fn(png, &ctx, png_read_fn);
  png_read_info(png, info);

  int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "not an 8-bit grayscale PNG");
  }
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (depth == 16) png_set_strip_16(png);
  png_read_update_info(png, info);

  img.width = int(png_get_image_width(png, info));
  img.height = int(png_get_image_height(png, info));
  img.pixels.resize(size_t(img.width) * img.height);
  rows.resize(img.height);
  for (int r = 0; r < img.height; ++r)
    rows[r] = img.pixels.data() + size_t(r) * img.width;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png(const std::string& path, int width, int height, int color_type,
               const uint8_t* pixels, size_t stride) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) fail(path, "cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    std::fclose(fp);
    fail(path, "png write failed");
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < height; ++r)
    png_write_row(png, const_cast<png_bytep>(pixels + size_t(r) * stride));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

GrayImage read_gray_image(const std::string& path) {
  std::string bytes = read_file(path);
  if (bytes.size() < 8) fail(path, "not a PGM or PNG image");
  if (bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'))
    return read_pgm(path, bytes);
  static const uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (std::memcmp(bytes.data(), kPngMagic, 8) == 0) return read_png_gray(path, bytes);
  fail(path, "not a PGM or PNG image");
}

void write_pgm(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  if (!out) fail(path, "write failed");
}

void write_png_gray(const std::string& path, const GrayImage& img) {
  write_png(path, img.width, img.height, PNG_COLOR_TYPE_GRAY,
            img.pixels.data(), img.width);
}

void write_png_rgb(const std::string& path, const RgbImage& img) {
  write_png(path, img.width, img.height, PNG_COLOR_TYPE_RGB,
            img.pixels.data(), size_t(img.width) * 3);
}

void write_pbm(const std::string& path, const BinaryMap& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P4\n" << m.width << " " << m.height << "\n";
  size_t stride = (m.width + 7) / 8;
  std::vector<uint8_t> row(stride);
  for (int r = 0; r < m.height; ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (int c = 0; c < m.width; ++c)
      if (m.at(c, r)) row[c / 8] |= uint8_t(0x80 >> (c % 8));
    out.write(reinterpret_cast<const char*>(row.data()), stride);
  }
  if (!out) fail(path, "write failed");
}

BinaryMap read_pbm(const std::string& path) {
  std::string bytes = read_file(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '1' && bytes[1] != '4'))
    fail(path, "not a PBM image");
  bool ascii = bytes[1] == '1';
  size_t i = 2;
  BinaryMap m;
  m.width = next_pnm_int(bytes, i, path);
  m.height = next_pnm_int(bytes, i, path);
  m.data.assign(size_t(m.width) * m.height, 0);
  if (ascii) {
    for (size_t k = 0; k < m.data.size(); ++k) {
      while (i < bytes.size() && std::isspace(uint8_t(bytes[i]))) ++i;
      if (i >= bytes.size() || (bytes[i] != '0' && bytes[i] != '1'))
        fail(path, "malformed PBM payload");
      m.data[k] = bytes[i++] == '1';
    }
  } else {
    ++i;
    size_t stride = (m.width + 7) / 8;
    if (bytes.size() - i < stride * m.height) fail(path, "truncated PBM payload");
    for (int r = 0; r < m.height; ++r)
      for (int c = 0; c < m.width; ++c)
        m.at(c, r) = (uint8_t(bytes[i + r * stride + c / 8]) >> (7 - c % 8)) & 1;
  }
  return m;
}

}  // namespace incrtopo
