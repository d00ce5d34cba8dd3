// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>

namespace splatfuse {

// Engine knobs with their documented defaults. Serialized as a flat
// `key = value` text file; every key is optional.
struct EngineConfig {
  int k = 128;                    // depth planes
  double d_near = 0.5;            // meters
  double d_far = 15.0;
  double delta = 0.05;            // fusion depth-ratio threshold
  int nearby_views = 8;
  double lambda = 0.5;            // m/rad rotation term in pose proximity
  double temperature = 0.01;      // softmax temperature over matching costs
  int refine_iterations = 2;
  double sigma_g = 0.05;          // guidance bandwidth
  double kappa = 1.0;             // pixel-footprint scale multiplier
  int matching_dim = 14;          // matching descriptor channels
  std::string fusion_mode = "blend";  // "blend" | "gru"
  std::string weights;                // SPLF container path, used when nonempty
  int tile_size = 16;
  Eigen::Vector3d background{0.0, 0.0, 0.0};

  void validate() const;
};

EngineConfig load_config(const std::filesystem::path& path);
void save_config(const EngineConfig& config, const std::filesystem::path& path);

}  // namespace splatfuse
