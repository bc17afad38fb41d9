#pragma once

#include <zlib.h>

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msd/render.hpp"

namespace msd {

// Binary P6, header then raw bytes; bit-exact across runs.
inline void write_ppm(const ImageBuffer& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_ppm: cannot open '" + path + "'");
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.bytes.data()),
            static_cast<std::streamsize>(img.bytes.size()));
  if (!out) throw std::runtime_error("write_ppm: write failed for '" + path + "'");
}

namespace detail {

inline void png_chunk(std::ofstream& out, const char* type,
                      const std::vector<unsigned char>& data) {
  auto be32 = [](std::uint32_t v) {
    return std::array<unsigned char, 4>{static_cast<unsigned char>(v >> 24),
                                        static_cast<unsigned char>(v >> 16),
                                        static_cast<unsigned char>(v >> 8),
                                        static_cast<unsigned char>(v)};
  };
  auto len = be32(static_cast<std::uint32_t>(data.size()));
  out.write(reinterpret_cast<const char*>(len.data()), 4);
  std::uint32_t crc = crc32(0, reinterpret_cast<const Bytef*>(type), 4);
  if (!data.empty()) crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
  out.write(type, 4);
  if (!data.empty())
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
  auto crcb = be32(crc);
  out.write(reinterpret_cast<const char*>(crcb.data()), 4);
}

}  // namespace detail

// Lossless 8-bit RGB PNG via zlib.
inline void write_png(const ImageBuffer& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_png: cannot open '" + path + "'");
  static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  out.write(reinterpret_cast<const char*>(sig), 8);

  std::vector<unsigned char> ihdr(13);
  auto put32 = [](std::vector<unsigned char>& v, std::size_t at, std::uint32_t x) {
    v[at] = x >> 24;
    v[at + 1] = x >> 16;
    v[at + 2] = x >> 8;
    v[at + 3] = x;
  };
  put32(ihdr, 0, static_cast<std::uint32_t>(img.width));
  put32(ihdr, 4, static_cast<std::uint32_t>(img.height));
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 2;   // truecolor
  ihdr[10] = ihdr[11] = ihdr[12] = 0;
  detail::png_chunk(out, "IHDR", ihdr);

  std::vector<unsigned char> raw;
  raw.reserve(static_cast<std::size_t>(img.height) * (1 + 3 * img.width));
  for (int j = 0; j < img.height; ++j) {
    raw.push_back(0);  // no filter
    const unsigned char* row = img.bytes.data() + 3 * static_cast<std::size_t>(j) * img.width;
    raw.insert(raw.end(), row, row + 3 * img.width);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> idat(bound);
  if (compress2(idat.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
    throw std::runtime_error("write_png: deflate failed");
  idat.resize(bound);
  detail::png_chunk(out, "IDAT", idat);
  detail::png_chunk(out, "IEND", {});
  if (!out) throw std::runtime_error("write_png: write failed for '" + path + "'");
}

inline void write_image(const ImageBuffer& img, const std::string& path,
                        const std::string& format) {
  if (format == "ppm") write_ppm(img, path);
  else if (format == "png") write_png(img, path);
  else throw std::domain_error("write_image: format must be ppm or png");
}

}  // namespace msd
