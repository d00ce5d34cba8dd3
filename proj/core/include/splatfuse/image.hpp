// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace splatfuse {

// Dense H×W×C float raster, row-major with interleaved channels.
// Used for color images (C=3, values in [0,1]), depth maps (C=1, meters)
// and other per-pixel scalar fields.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int width, int height, int channels, float fill = 0.0f);

  bool empty() const { return data.empty(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  float at(int y, int x, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float& at(int y, int x, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::span<const float> pixel(int y, int x) const {
    return {data.data() + (static_cast<std::size_t>(y) * width + x) * channels,
            static_cast<std::size_t>(channels)};
  }
  std::span<float> pixel(int y, int x) {
    return {data.data() + (static_cast<std::size_t>(y) * width + x) * channels,
            static_cast<std::size_t>(channels)};
  }

  bool same_shape(const Image& other) const {
    return width == other.width && height == other.height && channels == other.channels;
  }
};

// Mean of the RGB channels; for single-channel images returns the value itself.
Image luma(const Image& image);

// Box-average downsample by an integer factor; requires dimensions divisible
// by the factor.
Image downsample_mean(const Image& image, int factor);

// Samples all channels at continuous (x, y) with bilinear weights. Out-of-range
// coordinates are clamped to the border. Integer coordinates reproduce the
// stored sample exactly.
void sample_bilinear(const Image& image, double x, double y, std::span<float> out);

// Bilinear upsample of a single-channel field to (out_width, out_height) using
// the corner-anchored mapping x_src = x_dst * (width / out_width).
Image upsample_bilinear(const Image& image, int out_width, int out_height);

}  // namespace splatfuse
