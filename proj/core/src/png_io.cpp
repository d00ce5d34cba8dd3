// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/io/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace splatfuse {
namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const png_image& image,
                       const char* action) {
  throw std::runtime_error(path.string() + ": failed to " + action + " PNG: " + image.message);
}

}  // namespace

Image read_png_color(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) fail(path, png, "read");
  png.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) fail(path, png, "read");

  Image image(static_cast<int>(png.width), static_cast<int>(png.height), 3);
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    image.data[i] = static_cast<float>(buffer[i]) / 255.0f;
  }
  return image;
}

void write_png_color(const std::filesystem::path& path, const Image& image) {
  if (image.channels != 3) throw std::invalid_argument("write_png_color: expected 3 channels");
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGB;

  std::vector<png_byte> buffer(image.data.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const float v = std::clamp(image.data[i], 0.0f, 1.0f);
    buffer[i] = static_cast<png_byte>(std::lround(v * 255.0f));
  }
  if (!png_image_write_to_file(&png, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    fail(path, png, "write");
  }
}

Image read_png_depth_mm(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) fail(path, png, "read");
  if ((png.format & PNG_FORMAT_FLAG_LINEAR) == 0) {
    png_image_free(&png);
    throw std::runtime_error(path.string() + ": depth PNG must be 16-bit grayscale");
  }
  png.format = PNG_FORMAT_LINEAR_Y;
  std::vector<png_uint_16> buffer(PNG_IMAGE_SIZE(png) / sizeof(png_uint_16));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) fail(path, png, "read");

  Image depth(static_cast<int>(png.width), static_cast<int>(png.height), 1);
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    depth.data[i] = static_cast<float>(buffer[i]) / 1000.0f;
  }
  return depth;
}

void write_png_depth_mm(const std::filesystem::path& path, const Image& depth) {
  if (depth.channels != 1) throw std::invalid_argument("write_png_depth_mm: expected 1 channel");
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(depth.width);
  png.height = static_cast<png_uint_32>(depth.height);
  png.format = PNG_FORMAT_LINEAR_Y;

  std::vector<png_uint_16> buffer(depth.data.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const long mm = std::lround(static_cast<double>(depth.data[i]) * 1000.0);
    buffer[i] = static_cast<png_uint_16>(std::clamp(mm, 0L, 65535L));
  }
  if (!png_image_write_to_file(&png, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    fail(path, png, "write");
  }
}

}  // namespace splatfuse
