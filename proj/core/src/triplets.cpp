// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/triplets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "splatfuse/parallel.hpp"

namespace splatfuse {

void TripletSet::validate() const {
  const std::size_t m = centers.size();
  if (weights.size() != m || tags.size() != m ||
      features.size() != m * static_cast<std::size_t>(feature_dim)) {
    throw std::invalid_argument("TripletSet: inconsistent array sizes");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!(weights[i] > 0.0)) throw std::invalid_argument("TripletSet: nonpositive weight");
    if (!centers[i].allFinite()) throw std::invalid_argument("TripletSet: non-finite center");
  }
  for (float f : features) {
    if (!std::isfinite(f)) throw std::invalid_argument("TripletSet: non-finite feature");
  }
}

Image compute_confidence_weights(const DepthCandidates& candidates, double temperature) {
  if (temperature <= 0.0) {
    throw std::invalid_argument("compute_confidence_weights: temperature must be positive");
  }
  const int h = candidates.height, w = candidates.width, k = candidates.plane_count;
  Image confidence(w, h, 1);
  parallel_for(0, h, [&](std::int64_t y) {
    for (int x = 0; x < w; ++x) {
      double max_logit = -std::numeric_limits<double>::infinity();
      for (int p = 0; p < k; ++p) {
        max_logit = std::max(max_logit, static_cast<double>(candidates.at(p, y, x)));
      }
      double norm = 0.0;
      for (int p = 0; p < k; ++p) {
        norm += std::exp((candidates.at(p, y, x) - max_logit) / temperature);
      }
      const double peak = 1.0 / norm;  // exp(0) for the max logit
      confidence.at(static_cast<int>(y), x) =
          static_cast<float>(std::clamp(peak, 1e-4, 1.0 - 1e-4));
    }
  });
  return confidence;
}

Image assemble_latents(const CameraView& view, const Image& depth, const Image& confidence,
                       const FeatureMap& matching) {
  const int h = view.image.height, w = view.image.width;
  if (depth.width != w || depth.height != h || confidence.width != w || confidence.height != h) {
    throw std::invalid_argument("assemble_latents: map shapes disagree");
  }
  const int dim = latent_dim(matching.channels());
  Image latents(w, h, dim);
  const double inv_scale = 1.0 / matching.scale;
  parallel_for(0, h, [&](std::int64_t y) {
    std::vector<float> descriptor(matching.channels());
    for (int x = 0; x < w; ++x) {
      auto row = latents.pixel(static_cast<int>(y), x);
      row[latent::kRed] = view.image.at(y, x, 0);
      row[latent::kGreen] = view.image.at(y, x, 1);
      row[latent::kBlue] = view.image.at(y, x, 2);
      row[latent::kWeight] = confidence.at(y, x);
      row[latent::kSourceDepth] = depth.at(y, x);
      sample_bilinear(matching.data, x * inv_scale, y * inv_scale,
                      {descriptor.data(), descriptor.size()});
      std::copy(descriptor.begin(), descriptor.end(), row.begin() + latent::kMatchingOffset);
    }
  });
  return latents;
}

TripletSet unproject_to_triplets(const Image& depth, const Image& latents,
                                 const Image& confidence, const CameraView& view) {
  const int h = view.image.height, w = view.image.width;
  if (depth.width != w || depth.height != h || latents.width != w || latents.height != h ||
      confidence.width != w || confidence.height != h) {
    throw std::invalid_argument("unproject_to_triplets: map shapes disagree");
  }
  for (float d : depth.data) {
    if (!(d > 0.0f)) throw std::invalid_argument("unproject_to_triplets: nonpositive depth");
  }

  TripletSet set;
  set.feature_dim = latents.channels;
  const std::size_t m = static_cast<std::size_t>(h) * w;
  set.centers.resize(m);
  set.weights.resize(m);
  set.features.resize(m * latents.channels);
  set.tags.resize(m);
  parallel_for(0, h, [&](std::int64_t y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      set.centers[i] = unproject(view.intrinsics, view.pose, x, static_cast<double>(y),
                                 depth.at(static_cast<int>(y), x));
      set.weights[i] = confidence.at(static_cast<int>(y), x);
      const auto row = latents.pixel(static_cast<int>(y), x);
      std::copy(row.begin(), row.end(), set.feature(i).begin());
      set.tags[i] = {view.index, static_cast<int>(i)};
    }
  });
  return set;
}

}  // namespace splatfuse
