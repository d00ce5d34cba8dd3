// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>

#include "splatfuse/weights_io.hpp"

namespace splatfuse {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// The depth readout wants a near-argmax softmax, but at that sharpness the
// peak probability saturates toward 1 even on flat cost curves, so confidence
// uses its own calibrated temperature. Flat (unreliable) pixels then decode to
// near-transparent primitives instead of opaque floaters.
constexpr double kConfidenceTemperature = 0.1;

}  // namespace

DepthEstimate estimate_view_depth(const CameraView& target, const FeatureMap& target_features,
                                  const std::vector<const CameraView*>& nearby_views,
                                  const std::vector<const FeatureMap*>& nearby_features,
                                  const EngineConfig& config) {
  const DepthPlaneSet planes = build_depth_planes(config.d_near, config.d_far, config.k);
  CostVolume volume;
  if (nearby_views.empty()) {
    // No reference views: keep the uniform zero volume so the readout
    // collapses to the mid-range depth at confidence 1/K.
    volume.plane_count = config.k;
    volume.height = target_features.height();
    volume.width = target_features.width();
    volume.planes = planes;
    volume.data.assign(static_cast<std::size_t>(config.k) * volume.height * volume.width,
                       0.0f);
    volume.validity.assign(static_cast<std::size_t>(volume.height) * volume.width, 0);
  } else {
    volume = sweep_cost_volume(target, target_features, nearby_views, nearby_features, planes);
  }
  if (config.refine_iterations > 0) {
    volume = refine_cost_volume(volume, target, config.refine_iterations, config.sigma_g);
  }
  const DepthCandidates candidates =
      upsample_candidates(volume, target.intrinsics.height, target.intrinsics.width);
  DepthEstimate estimate;
  estimate.depth = soft_argmax_depth(candidates, planes, config.temperature);
  estimate.confidence = compute_confidence_weights(candidates, kConfidenceTemperature);
  return estimate;
}

ReconstructionResult reconstruct_views(const SceneDataset& scene,
                                       const std::vector<int>& view_indices,
                                       const EngineConfig& config) {
  config.validate();
  if (view_indices.empty()) throw std::invalid_argument("reconstruct_views: no views given");
  for (int idx : view_indices) {
    if (idx < 0 || idx >= static_cast<int>(scene.views.size())) {
      throw std::invalid_argument("reconstruct_views: view index " + std::to_string(idx) +
                                  " outside dataset of " + std::to_string(scene.views.size()));
    }
  }

  const GruParams* gru = nullptr;
  const DecoderParams* decoder = nullptr;
  GruParams gru_storage;
  DecoderParams decoder_storage;
  if (!config.weights.empty()) {
    const WeightsFile weights = load_weights(config.weights);
    if (static_cast<int>(weights.feature_dim) != latent_dim(config.matching_dim)) {
      throw std::runtime_error("weights feature_dim " + std::to_string(weights.feature_dim) +
                               " does not match latent dim " +
                               std::to_string(latent_dim(config.matching_dim)));
    }
    if (config.fusion_mode == "gru") {
      gru_storage = gru_from_weights(weights);
      gru = &gru_storage;
    }
    if (weights.find("dec.W") != nullptr) {
      decoder_storage = decoder_from_weights(weights);
      decoder = &decoder_storage;
    }
  } else if (config.fusion_mode == "gru") {
    throw std::runtime_error("fusion_mode gru requires a weights file");
  }

  ReconstructionResult result;
  const auto total_start = Clock::now();
  double feature_ms = 0.0, depth_ms = 0.0, fusion_ms = 0.0;

  // Matching descriptors once per distinct view index.
  std::map<int, FeatureMap> features;
  {
    const auto start = Clock::now();
    for (int idx : view_indices) {
      if (!features.contains(idx)) {
        features.emplace(idx, compute_matching_features(scene.views[idx], config.matching_dim));
      }
    }
    feature_ms = ms_since(start);
  }

  std::vector<Pose> poses;
  poses.reserve(view_indices.size());
  for (int idx : view_indices) poses.push_back(scene.views[idx].pose);

  for (std::size_t i = 0; i < view_indices.size(); ++i) {
    const CameraView& view = scene.views[view_indices[i]];

    const auto depth_start = Clock::now();
    const int nearby_count =
        std::min<int>(config.nearby_views, static_cast<int>(view_indices.size()) - 1);
    std::vector<const CameraView*> nearby_views;
    std::vector<const FeatureMap*> nearby_features;
    if (nearby_count > 0) {
      for (int j : select_nearby_views(poses, static_cast<int>(i), nearby_count, config.lambda)) {
        nearby_views.push_back(&scene.views[view_indices[j]]);
        nearby_features.push_back(&features.at(view_indices[j]));
      }
    }
    DepthEstimate estimate =
        estimate_view_depth(view, features.at(view_indices[i]), nearby_views, nearby_features,
                            config);
    depth_ms += ms_since(depth_start);

    const auto fusion_start = Clock::now();
    const Image latents = assemble_latents(view, estimate.depth, estimate.confidence,
                                           features.at(view_indices[i]));
    TripletSet local =
        unproject_to_triplets(estimate.depth, latents, estimate.confidence, view);
    result.stats.total_local += local.size();
    if (result.global.empty()) {
      FusionStats stats;
      stats.input_local = local.size();
      stats.output = local.size();
      result.global = std::move(local);
      result.stats.per_view.push_back(stats);
    } else {
      auto [fused, stats] = fuse_view(result.global, local, view, config.delta, gru);
      result.global = std::move(fused);
      result.stats.per_view.push_back(stats);
    }
    fusion_ms += ms_since(fusion_start);

    result.views.push_back(
        {view_indices[i], std::move(estimate.depth), std::move(estimate.confidence)});
  }

  result.stats.final_count = result.global.size();
  result.stats.reduction_ratio =
      1.0 - static_cast<double>(result.stats.final_count) /
                static_cast<double>(result.stats.total_local);

  const auto decode_start = Clock::now();
  result.primitives =
      decode_triplets(result.global, scene.views[view_indices[0]].intrinsics, config.kappa,
                      decoder);
  const double decode_ms = ms_since(decode_start);

  result.timings_ms = {{"features", feature_ms},
                       {"depth", depth_ms},
                       {"fusion", fusion_ms},
                       {"decode", decode_ms},
                       {"total", ms_since(total_start)}};
  return result;
}

}  // namespace splatfuse
