// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "splatfuse/camera.hpp"
#include "splatfuse/image.hpp"

namespace splatfuse {

// Quarter-resolution matching descriptors, one per coarse pixel, interleaved
// in data (h×w×channels).
struct FeatureMap {
  Image data;
  int scale = 4;

  int channels() const { return data.channels; }
  int width() const { return data.width; }
  int height() const { return data.height; }
};

// Minimum descriptor size: mean RGB (3) + Sobel gradients (2) + normalized
// 3×3 luma patch (9).
inline constexpr int kMinMatchingDim = 14;

// Hand-crafted matching descriptor per quarter-res pixel: channels 0-2 mean
// RGB over the 4×4 cell, 3-4 Sobel x/y on quarter-res luma, 5-13 zero-mean
// unit-norm 3×3 luma patch (all-zero when the patch is constant). Channels
// beyond 14 are zero padding. Requires dimensions divisible by 4 and
// feature_dim >= 14.
FeatureMap compute_matching_features(const CameraView& view,
                                     int feature_dim = kMinMatchingDim);

struct WarpedFeatureMap {
  FeatureMap features;
  std::vector<std::uint8_t> validity;  // h·w, nonzero where the sample is valid
};

// Plane-induced warp of src features into the dst view at a fronto-parallel
// plane of the given depth (dst frame). src_to_dst maps src-camera points into
// the dst camera frame; intrinsics are full resolution and scaled internally
// by the feature-map scale. Pixels that land outside the src map or behind the
// src camera produce zero features and a cleared validity flag.
WarpedFeatureMap warp_features(const FeatureMap& src, const RigidTransform& src_to_dst,
                               const Intrinsics& src_intr, const Intrinsics& dst_intr,
                               double plane_depth);

}  // namespace splatfuse
