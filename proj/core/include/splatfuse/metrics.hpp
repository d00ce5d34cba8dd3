// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "splatfuse/image.hpp"

namespace splatfuse {

// Peak signal-to-noise ratio with peak 1.0, over all pixels and channels.
// Identical images yield +infinity.
double psnr(const Image& a, const Image& b);

// Single-scale SSIM: 11×11 Gaussian window (σ=1.5), C1=0.01², C2=0.03² at
// peak 1.0, valid windows only, computed per channel and averaged. Requires
// both dimensions >= 11.
double ssim(const Image& a, const Image& b);

struct DepthMetrics {
  double abs_diff = 0.0;   // mean |pred - gt|, meters
  double abs_rel = 0.0;    // mean |pred - gt| / gt
  double delta_1_25 = 0.0; // fraction with max(pred/gt, gt/pred) < 1.25
  double delta_1_10 = 0.0; // same at 1.10
  std::size_t valid_count = 0;
};

// Depth error statistics over pixels where mask is nonzero. Masked ground
// truth must be positive; an empty mask is rejected.
DepthMetrics depth_metrics(const Image& pred, const Image& gt, const Image& mask);

}  // namespace splatfuse
