// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "splatfuse/cost_volume.hpp"
#include "splatfuse/fusion.hpp"
#include "splatfuse/gaussians.hpp"
#include "splatfuse/io/config.hpp"
#include "splatfuse/io/dataset.hpp"
#include "splatfuse/triplets.hpp"

namespace splatfuse {

struct DepthEstimate {
  Image depth;       // H×W×1, meters
  Image confidence;  // H×W×1, peak softmax probability
};

// Cost-volume depth for one target given explicit nearby views: sweep, refine,
// upsample, soft-argmax. With no nearby views the volume stays uniform and the
// estimate collapses to the mid-range depth at confidence 1/K.
DepthEstimate estimate_view_depth(const CameraView& target, const FeatureMap& target_features,
                                  const std::vector<const CameraView*>& nearby_views,
                                  const std::vector<const FeatureMap*>& nearby_features,
                                  const EngineConfig& config);

// Per-view products kept for evaluation and reporting.
struct ViewReconstruction {
  int view_index = -1;
  Image depth;
  Image confidence;
};

struct PipelineStats {
  std::size_t total_local = 0;   // sum of per-view triplet counts before fusion
  std::size_t final_count = 0;   // fused global triplet count
  double reduction_ratio = 0.0;  // 1 - final_count / total_local
  std::vector<FusionStats> per_view;
};

struct ReconstructionResult {
  TripletSet global;
  GaussianPrimitiveSet primitives;
  PipelineStats stats;
  std::vector<ViewReconstruction> views;
  std::vector<std::pair<std::string, double>> timings_ms;  // stage -> elapsed
};

// Feed-forward reconstruction over the listed views, in order: matching
// features once per distinct view, cost-volume depth against the nearest
// other listed views, unprojection to pixel-aligned triplets, incremental
// fusion into the global set, then primitive decoding. Repeated indices are
// allowed and fuse as distinct views. GRU fusion and the learned decoder are
// taken from config.weights when configured.
ReconstructionResult reconstruct_views(const SceneDataset& scene,
                                       const std::vector<int>& view_indices,
                                       const EngineConfig& config);

}  // namespace splatfuse
