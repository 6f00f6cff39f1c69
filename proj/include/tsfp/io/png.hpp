// Copyright 2026 The tsfp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Grayscale / RGB PNG I/O on top of libpng. Intensities are normalized to
// [0, 1] by the maximum of the stored bit depth.

#ifndef TSFP_IO_PNG_HPP_
#define TSFP_IO_PNG_HPP_

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "tsfp/core/errors.hpp"
#include "tsfp/core/plane.hpp"

namespace tsfp::io {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] inline void png_error_handler(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what) *what = msg;
  png_longjmp(png, 1);
}

inline void png_warning_handler(png_structp, png_const_charp) {}

// rows: height x (width * channels) samples, each < 2^bit_depth.
inline void write_png(const std::filesystem::path& path, std::size_t width, std::size_t height,
                      int channels, int bit_depth, const std::vector<std::uint16_t>& samples) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw DataError("cannot open for writing: " + path.string());
  std::string what;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &what, png_error_handler, png_warning_handler);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    throw DataError("libpng initialisation failed");
  }
  const std::size_t bytes_per_sample = bit_depth == 16 ? 2 : 1;
  std::vector<std::uint8_t> row(width * static_cast<std::size_t>(channels) * bytes_per_sample);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("PNG write failed for " + path.string() + ": " + what);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t row_samples = width * static_cast<std::size_t>(channels);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t k = 0; k < row_samples; ++k) {
      const std::uint16_t v = samples[y * row_samples + k];
      if (bit_depth == 16) {
        row[2 * k] = static_cast<std::uint8_t>(v >> 8);  // PNG is big-endian
        row[2 * k + 1] = static_cast<std::uint8_t>(v & 0xff);
      } else {
        row[k] = static_cast<std::uint8_t>(v);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace detail

struct GrayImage {
  Plane<double> values;  // normalized to [0, 1]
  int bit_depth = 8;
};

/// Reads an 8- or 16-bit single-channel PNG (lower depths are expanded to 8).
inline GrayImage read_png_gray(const std::filesystem::path& path) {
  detail::FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw DataError("missing input: " + path.string());
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw DataError("not a PNG file: " + path.string());
  }
  std::string what;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &what,
                                           detail::png_error_handler, detail::png_warning_handler);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DataError("libpng initialisation failed");
  }
  GrayImage out;
  std::vector<png_byte> buffer;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("PNG read failed for " + path.string() + ": " + what);
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("expected a single-channel grayscale PNG: " + path.string());
  }
  if (depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
    depth = 8;
  }
  png_read_update_info(png, info);
  const std::size_t w = png_get_image_width(png, info);
  const std::size_t h = png_get_image_height(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  buffer.resize(stride * h);
  rows.resize(h);
  for (std::size_t y = 0; y < h; ++y) rows[y] = buffer.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  out.bit_depth = depth;
  out.values = Plane<double>(w, h);
  const double scale = depth == 16 ? 65535.0 : 255.0;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double raw = depth == 16 ? static_cast<double>((rows[y][2 * x] << 8) | rows[y][2 * x + 1])
                                     : static_cast<double>(rows[y][x]);
      out.values(x, y) = raw / scale;
    }
  }
  return out;
}

/// Writes [0, 1] intensities as a grayscale PNG of the given depth (8 or 16),
/// clamping out-of-range values.
inline void write_png_gray(const std::filesystem::path& path, const Plane<double>& plane,
                           int bit_depth = 16) {
  if (bit_depth != 8 && bit_depth != 16) throw ConfigError("PNG bit depth must be 8 or 16");
  const double scale = bit_depth == 16 ? 65535.0 : 255.0;
  std::vector<std::uint16_t> samples(plane.size());
  for (std::size_t i = 0; i < plane.size(); ++i) {
    samples[i] = static_cast<std::uint16_t>(std::lround(std::clamp(plane[i], 0.0, 1.0) * scale));
  }
  detail::write_png(path, plane.width(), plane.height(), 1, bit_depth, samples);
}

/// Masks are stored as 8-bit 0 / 255.
inline void write_png_mask(const std::filesystem::path& path, const Mask& mask) {
  std::vector<std::uint16_t> samples(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) samples[i] = mask[i] ? 255 : 0;
  detail::write_png(path, mask.width(), mask.height(), 1, 8, samples);
}

/// Any non-zero sample is valid.
inline Mask read_png_mask(const std::filesystem::path& path) {
  const GrayImage img = read_png_gray(path);
  Mask mask(img.values.width(), img.values.height(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = img.values[i] > 0.0 ? 1 : 0;
  return mask;
}

/// RGB visualization: each component mapped through (n + 1) / 2 to [0, 255];
/// invalid pixels are black.
inline void write_png_normals(const std::filesystem::path& path, const NormalMap& map) {
  std::vector<std::uint16_t> samples;
  samples.reserve(map.normals.size() * 3);
  auto to8 = [](double c) {
    return static_cast<std::uint16_t>(std::lround(std::clamp((c + 1.0) / 2.0, 0.0, 1.0) * 255.0));
  };
  for (std::size_t i = 0; i < map.normals.size(); ++i) {
    if (!map.mask[i]) {
      samples.insert(samples.end(), {0, 0, 0});
      continue;
    }
    const Vec3& n = map.normals[i];
    samples.insert(samples.end(), {to8(n.x), to8(n.y), to8(n.z)});
  }
  detail::write_png(path, map.width(), map.height(), 3, 8, samples);
}

}  // namespace tsfp::io

#endif  // TSFP_IO_PNG_HPP_
