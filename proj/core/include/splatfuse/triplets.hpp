// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "splatfuse/camera.hpp"
#include "splatfuse/cost_volume.hpp"
#include "splatfuse/features.hpp"
#include "splatfuse/image.hpp"

namespace splatfuse {

// Latent channel layout: the first five channels carry quantities the default
// primitive decoder reads back; matching descriptors follow.
namespace latent {
inline constexpr int kRed = 0;
inline constexpr int kGreen = 1;
inline constexpr int kBlue = 2;
inline constexpr int kWeight = 3;
inline constexpr int kSourceDepth = 4;
inline constexpr int kMatchingOffset = 5;
}  // namespace latent

inline int latent_dim(int matching_dim) { return latent::kMatchingOffset + matching_dim; }

// Provenance of a triplet; view -1 marks the result of a cross-view merge.
struct SourceTag {
  int view = -1;
  int pixel = -1;
};

// Pixel-aligned Gaussian triplets {center, weight, latent feature}, either for
// one view (M = H·W) or for the fused global scene.
struct TripletSet {
  int feature_dim = 0;
  std::vector<Eigen::Vector3d> centers;
  std::vector<double> weights;
  std::vector<float> features;  // size() × feature_dim, row-major
  std::vector<SourceTag> tags;

  std::size_t size() const { return centers.size(); }
  bool empty() const { return centers.empty(); }

  std::span<const float> feature(std::size_t i) const {
    return {features.data() + i * feature_dim, static_cast<std::size_t>(feature_dim)};
  }
  std::span<float> feature(std::size_t i) {
    return {features.data() + i * feature_dim, static_cast<std::size_t>(feature_dim)};
  }

  // Checks weight positivity, finiteness, and array-size consistency.
  void validate() const;
};

// Per-pixel confidence: the peak softmax probability over depth planes,
// clamped to [1e-4, 1-1e-4].
Image compute_confidence_weights(const DepthCandidates& candidates, double temperature);

// Builds the full-resolution latent map consumed by unproject_to_triplets:
// RGB from the view, confidence, source depth, then the quarter-res matching
// descriptor sampled bilinearly at (x/4, y/4).
Image assemble_latents(const CameraView& view, const Image& depth, const Image& confidence,
                       const FeatureMap& matching);

// One triplet per pixel: centers unprojected at the per-pixel depth, weights
// from the confidence map, latent rows copied verbatim, tags (view, pixel).
TripletSet unproject_to_triplets(const Image& depth, const Image& latents,
                                 const Image& confidence, const CameraView& view);

}  // namespace splatfuse
