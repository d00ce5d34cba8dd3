// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splatfuse {
namespace {

// Snap coordinates that are within rounding noise of an integer so that
// identity warps reproduce input samples bit-exactly.
double snap_fraction(double v) {
  const double rounded = std::round(v);
  return std::abs(v - rounded) < 1e-9 ? rounded : v;
}

}  // namespace

Image::Image(int width_, int height_, int channels_, float fill)
    : width(width_), height(height_), channels(channels_) {
  if (width < 0 || height < 0 || channels < 0) {
    throw std::invalid_argument("Image: negative dimension");
  }
  data.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Image luma(const Image& image) {
  if (image.channels == 1) return image;
  if (image.channels != 3) {
    throw std::invalid_argument("luma: expected 1 or 3 channels");
  }
  Image out(image.width, image.height, 1);
  for (std::size_t p = 0; p < image.pixel_count(); ++p) {
    const float* px = image.data.data() + p * 3;
    out.data[p] = (px[0] + px[1] + px[2]) / 3.0f;
  }
  return out;
}

Image downsample_mean(const Image& image, int factor) {
  if (factor <= 0) throw std::invalid_argument("downsample_mean: factor must be positive");
  if (image.width % factor != 0 || image.height % factor != 0) {
    throw std::invalid_argument("downsample_mean: dimensions not divisible by factor");
  }
  Image out(image.width / factor, image.height / factor, image.channels);
  const float inv = 1.0f / static_cast<float>(factor * factor);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      for (int c = 0; c < image.channels; ++c) {
        float acc = 0.0f;
        for (int dy = 0; dy < factor; ++dy) {
          for (int dx = 0; dx < factor; ++dx) {
            acc += image.at(y * factor + dy, x * factor + dx, c);
          }
        }
        out.at(y, x, c) = acc * inv;
      }
    }
  }
  return out;
}

void sample_bilinear(const Image& image, double x, double y, std::span<float> out) {
  x = snap_fraction(std::clamp(x, 0.0, static_cast<double>(image.width - 1)));
  y = snap_fraction(std::clamp(y, 0.0, static_cast<double>(image.height - 1)));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, image.width - 1);
  const int y1 = std::min(y0 + 1, image.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  for (int c = 0; c < image.channels; ++c) {
    const double top = image.at(y0, x0, c) * (1.0 - fx) + image.at(y0, x1, c) * fx;
    const double bot = image.at(y1, x0, c) * (1.0 - fx) + image.at(y1, x1, c) * fx;
    out[c] = static_cast<float>(top * (1.0 - fy) + bot * fy);
  }
}

Image upsample_bilinear(const Image& image, int out_width, int out_height) {
  if (image.channels != 1) {
    throw std::invalid_argument("upsample_bilinear: expected single channel");
  }
  Image out(out_width, out_height, 1);
  const double sx = static_cast<double>(image.width) / out_width;
  const double sy = static_cast<double>(image.height) / out_height;
  float v = 0.0f;
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      sample_bilinear(image, x * sx, y * sy, {&v, 1});
      out.at(y, x) = v;
    }
  }
  return out;
}

}  // namespace splatfuse
