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

// Portable float map I/O. Files are written little-endian (scale -1.0) with
// rows stored bottom-to-top as the format prescribes; both byte orders are
// accepted on read. "Pf" holds one channel, "PF" three.

#ifndef TSFP_IO_PFM_HPP_
#define TSFP_IO_PFM_HPP_

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tsfp/core/errors.hpp"
#include "tsfp/core/plane.hpp"

namespace tsfp::io {

struct PfmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;
  std::vector<float> data;  // top row first, channels interleaved
};

namespace detail {

inline std::uint32_t byteswap32(std::uint32_t v) {
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

inline void skip_space(std::istream& in) {
  while (std::isspace(in.peek())) in.get();
}

}  // namespace detail

inline void write_pfm(const std::filesystem::path& path, const PfmImage& img) {
  if (img.channels != 1 && img.channels != 3) throw ConfigError("PFM supports 1 or 3 channels");
  if (img.data.size() != img.width * img.height * img.channels) {
    throw DimensionError("PFM payload size does not match its header");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << (img.channels == 3 ? "PF" : "Pf") << '\n'
      << img.width << ' ' << img.height << '\n'
      << "-1.0\n";
  const std::size_t row = img.width * img.channels;
  std::vector<std::uint32_t> buf(row);
  for (std::size_t y = img.height; y-- > 0;) {
    for (std::size_t k = 0; k < row; ++k) {
      auto bits = std::bit_cast<std::uint32_t>(img.data[y * row + k]);
      if constexpr (std::endian::native == std::endian::big) bits = detail::byteswap32(bits);
      buf[k] = bits;
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(row * sizeof(std::uint32_t)));
  }
  if (!out) throw DataError("failed writing " + path.string());
}

inline PfmImage read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing input: " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  PfmImage img;
  if (magic[0] != 'P' || (magic[1] != 'f' && magic[1] != 'F')) {
    throw DataError("not a PFM file: " + path.string());
  }
  img.channels = magic[1] == 'F' ? 3 : 1;
  double scale = 0.0;
  detail::skip_space(in);
  in >> img.width;
  detail::skip_space(in);
  in >> img.height;
  detail::skip_space(in);
  in >> scale;
  if (!in || scale == 0.0 || img.width == 0 || img.height == 0) {
    throw DataError("malformed PFM header: " + path.string());
  }
  in.get();  // single whitespace before the raster
  const bool little = scale < 0.0;
  const bool swap = little != (std::endian::native == std::endian::little);
  const std::size_t row = img.width * img.channels;
  img.data.resize(row * img.height);
  std::vector<std::uint32_t> buf(row);
  for (std::size_t y = img.height; y-- > 0;) {
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(row * sizeof(std::uint32_t)));
    if (!in) throw DataError("truncated PFM raster: " + path.string());
    for (std::size_t k = 0; k < row; ++k) {
      img.data[y * row + k] = std::bit_cast<float>(swap ? detail::byteswap32(buf[k]) : buf[k]);
    }
  }
  return img;
}

inline void write_plane_pfm(const std::filesystem::path& path, const Plane<double>& plane) {
  PfmImage img{plane.width(), plane.height(), 1, {}};
  img.data.reserve(plane.size());
  for (double v : plane) img.data.push_back(static_cast<float>(v));
  write_pfm(path, img);
}

inline Plane<double> read_plane_pfm(const std::filesystem::path& path) {
  const PfmImage img = read_pfm(path);
  if (img.channels != 1) throw DataError("expected a single-channel PFM: " + path.string());
  Plane<double> plane(img.width, img.height);
  for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = img.data[i];
  return plane;
}

/// Normal maps are stored as 3-channel PFM; invalid pixels are all-zero.
inline void write_normals_pfm(const std::filesystem::path& path, const NormalMap& map) {
  PfmImage img{map.width(), map.height(), 3, {}};
  img.data.reserve(map.normals.size() * 3);
  for (std::size_t i = 0; i < map.normals.size(); ++i) {
    const Vec3 n = map.mask[i] ? map.normals[i] : Vec3{};
    img.data.push_back(static_cast<float>(n.x));
    img.data.push_back(static_cast<float>(n.y));
    img.data.push_back(static_cast<float>(n.z));
  }
  write_pfm(path, img);
}

/// Any non-zero vector is a valid pixel; it is renormalized to unit length.
inline NormalMap read_normals_pfm(const std::filesystem::path& path) {
  const PfmImage img = read_pfm(path);
  if (img.channels != 3) throw DataError("expected a 3-channel PFM normal map: " + path.string());
  NormalMap map(img.width, img.height);
  for (std::size_t i = 0; i < map.normals.size(); ++i) {
    const Vec3 v{img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]};
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z) || is_zero(v)) continue;
    map.normals[i] = normalized(v);
    map.mask[i] = 1;
  }
  return map;
}

}  // namespace tsfp::io

#endif  // TSFP_IO_PFM_HPP_
