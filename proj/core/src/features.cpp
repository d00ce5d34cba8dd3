// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "splatfuse/parallel.hpp"

namespace splatfuse {
namespace {

float clamped(const Image& im, int y, int x) {
  y = std::clamp(y, 0, im.height - 1);
  x = std::clamp(x, 0, im.width - 1);
  return im.at(y, x);
}

}  // namespace

FeatureMap compute_matching_features(const CameraView& view, int feature_dim) {
  if (feature_dim < kMinMatchingDim) {
    throw std::invalid_argument("compute_matching_features: feature_dim below 14");
  }
  const Image& image = view.image;
  if (image.width % 4 != 0 || image.height % 4 != 0) {
    throw std::invalid_argument("compute_matching_features: dimensions not divisible by 4");
  }
  const Image coarse = downsample_mean(image, 4);
  const Image gray = luma(coarse);

  FeatureMap map;
  map.scale = 4;
  map.data = Image(coarse.width, coarse.height, feature_dim);
  parallel_for(0, coarse.height, [&](std::int64_t y) {
    for (int x = 0; x < coarse.width; ++x) {
      auto f = map.data.pixel(static_cast<int>(y), x);
      f[0] = coarse.at(y, x, 0);
      f[1] = coarse.at(y, x, 1);
      f[2] = coarse.at(y, x, 2);
      // Sobel on quarter-res luma, replicated borders, 1/8 normalization.
      const float tl = clamped(gray, y - 1, x - 1), tc = clamped(gray, y - 1, x);
      const float tr = clamped(gray, y - 1, x + 1), ml = clamped(gray, y, x - 1);
      const float mr = clamped(gray, y, x + 1), bl = clamped(gray, y + 1, x - 1);
      const float bc = clamped(gray, y + 1, x), br = clamped(gray, y + 1, x + 1);
      f[3] = ((tr + 2.0f * mr + br) - (tl + 2.0f * ml + bl)) / 8.0f;
      f[4] = ((bl + 2.0f * bc + br) - (tl + 2.0f * tc + tr)) / 8.0f;
      // Zero-mean unit-norm 3×3 luma patch; constant patches yield zeros.
      float patch[9];
      float mean = 0.0f;
      int i = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx, ++i) {
          patch[i] = clamped(gray, y + dy, x + dx);
          mean += patch[i];
        }
      }
      mean /= 9.0f;
      float norm_sq = 0.0f;
      for (float& p : patch) {
        p -= mean;
        norm_sq += p * p;
      }
      const float norm = std::sqrt(norm_sq);
      for (i = 0; i < 9; ++i) {
        f[5 + i] = norm > 1e-8f ? patch[i] / norm : 0.0f;
      }
    }
  });
  return map;
}

WarpedFeatureMap warp_features(const FeatureMap& src, const RigidTransform& src_to_dst,
                               const Intrinsics& src_intr, const Intrinsics& dst_intr,
                               double plane_depth) {
  if (plane_depth <= 0.0) {
    throw std::invalid_argument("warp_features: plane_depth must be positive");
  }
  // A coarse cell at index x aggregates full-res pixels [s·x, s·x+s-1], so its
  // center sits at full-res coordinate s·x + (s-1)/2; the quarter-grid
  // principal point shifts accordingly.
  const auto cell_grid = [](const Intrinsics& intr, int s) {
    Intrinsics q = intr.scaled(s);
    q.cx = (intr.cx - (s - 1) * 0.5) / s;
    q.cy = (intr.cy - (s - 1) * 0.5) / s;
    return q;
  };
  const Intrinsics src_q = cell_grid(src_intr, src.scale);
  const Intrinsics dst_q = cell_grid(dst_intr, src.scale);
  if (src.width() != src_q.width || src.height() != src_q.height) {
    throw std::invalid_argument("warp_features: feature map does not match src intrinsics");
  }
  const int h = dst_q.height, w = dst_q.width;
  const int channels = src.channels();

  WarpedFeatureMap out;
  out.features.scale = src.scale;
  out.features.data = Image(w, h, channels);
  out.validity.assign(static_cast<std::size_t>(h) * w, 0);

  const Eigen::Matrix3d r_inv = src_to_dst.rotation.transpose();
  const Eigen::Vector3d t_inv = -(r_inv * src_to_dst.translation);

  parallel_for(0, h, [&](std::int64_t y) {
    for (int x = 0; x < w; ++x) {
      const Eigen::Vector3d p_dst((x - dst_q.cx) / dst_q.fx * plane_depth,
                                  (y - dst_q.cy) / dst_q.fy * plane_depth, plane_depth);
      const Eigen::Vector3d p_src = r_inv * p_dst + t_inv;
      if (p_src.z() <= 0.0) continue;
      const double u = src_q.fx * p_src.x() / p_src.z() + src_q.cx;
      const double v = src_q.fy * p_src.y() / p_src.z() + src_q.cy;
      if (u < 0.0 || u > src_q.width - 1 || v < 0.0 || v > src_q.height - 1) continue;
      sample_bilinear(src.data, u, v, out.features.data.pixel(static_cast<int>(y), x));
      out.validity[static_cast<std::size_t>(y) * w + x] = 1;
    }
  });
  return out;
}

}  // namespace splatfuse
