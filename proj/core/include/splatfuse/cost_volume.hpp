// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "splatfuse/camera.hpp"
#include "splatfuse/features.hpp"
#include "splatfuse/image.hpp"

namespace splatfuse {

// Uniformly spaced fronto-parallel depth hypotheses, inclusive of both bounds.
struct DepthPlaneSet {
  std::vector<double> depths;
  double d_near = 0.0;
  double d_far = 0.0;

  int count() const { return static_cast<int>(depths.size()); }
  double spacing() const { return (d_far - d_near) / (depths.size() - 1); }
};

DepthPlaneSet build_depth_planes(double d_near, double d_far, int k);

// K×h×w matching costs at quarter resolution, plane-major. validity counts the
// nearby views that contributed at least one valid sample per pixel; pixels
// with count 0 keep the uniform zero cost.
struct CostVolume {
  int plane_count = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;
  DepthPlaneSet planes;
  std::vector<int> validity;

  float at(int k, int y, int x) const {
    return data[(static_cast<std::size_t>(k) * height + y) * width + x];
  }
  float& at(int k, int y, int x) {
    return data[(static_cast<std::size_t>(k) * height + y) * width + x];
  }
};

// Full-resolution depth logits, plane-major K×H×W.
struct DepthCandidates {
  int plane_count = 0;
  int height = 0;
  int width = 0;
  std::vector<float> logits;

  float at(int k, int y, int x) const {
    return logits[(static_cast<std::size_t>(k) * height + y) * width + x];
  }
  float& at(int k, int y, int x) {
    return logits[(static_cast<std::size_t>(k) * height + y) * width + x];
  }
};

// Mean cosine similarity between the target descriptors and each view's warped
// descriptors, per plane and pixel. warped[view][plane] must match the target
// shape. Invalid samples are excluded from the mean; a pixel/plane with no
// valid sample scores 0, as does any cosine involving a zero vector.
CostVolume build_cost_volume(const FeatureMap& target, const DepthPlaneSet& planes,
                             const std::vector<std::vector<WarpedFeatureMap>>& warped);

// Streaming equivalent of warp + build for a full view set: warps each nearby
// view's features plane by plane without materializing all K warps.
CostVolume sweep_cost_volume(const CameraView& target_view, const FeatureMap& target_features,
                             const std::vector<const CameraView*>& nearby_views,
                             const std::vector<const FeatureMap*>& nearby_features,
                             const DepthPlaneSet& planes);

// Edge-aware smoothing of each plane slice guided by quarter-res luma of the
// full-resolution guide view: per pixel, a normalized 5×5 box filter with
// weights exp(-(L_p-L_q)²/2σ_g²), repeated for the given iterations.
CostVolume refine_cost_volume(const CostVolume& volume, const CameraView& guide,
                              int iterations = 2, double sigma_g = 0.05);

// Per-plane bilinear upsampling of the volume to full resolution (H=4h, W=4w),
// reinterpreted as depth logits.
DepthCandidates upsample_candidates(const CostVolume& volume, int out_height, int out_width);

// Soft-argmax depth: per pixel, expectation of plane depths under
// softmax(logits/temperature). Bounded by [d_near, d_far].
Image soft_argmax_depth(const DepthCandidates& candidates, const DepthPlaneSet& planes,
                        double temperature);

}  // namespace splatfuse
