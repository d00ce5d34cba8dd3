// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "splatfuse/image.hpp"

namespace splatfuse {

// 8-bit color I/O; values clamped to [0,1] and rounded on write, grayscale
// and alpha inputs converted to plain RGB on read.
Image read_png_color(const std::filesystem::path& path);
void write_png_color(const std::filesystem::path& path, const Image& image);

// Depth maps as 16-bit grayscale PNG holding millimeters; 0 marks invalid.
// Reads convert to meters, writes round to the nearest millimeter.
Image read_png_depth_mm(const std::filesystem::path& path);
void write_png_depth_mm(const std::filesystem::path& path, const Image& depth);

}  // namespace splatfuse
