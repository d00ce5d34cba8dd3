// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "splatfuse/fusion.hpp"
#include "splatfuse/gaussians.hpp"

namespace splatfuse {

// Flat binary weights container ("SPLF"): magic, u32 version (1), u32 feature
// dim, u32 section count, a table of {u32 name length, name bytes, u32 rows,
// u32 cols, u64 absolute payload offset}, then little-endian float32 payloads
// in row-major order. Recognized section names: gru.{Wz,Uz,bz,Wr,Ur,br,Wh,
// Uh,bh} and dec.{W,b}; biases are stored as rows×1.
struct WeightsFile {
  std::uint32_t feature_dim = 0;
  std::vector<std::pair<std::string, Eigen::MatrixXf>> sections;

  const Eigen::MatrixXf* find(const std::string& name) const;
};

WeightsFile load_weights(const std::filesystem::path& path);
void save_weights(const WeightsFile& weights, const std::filesystem::path& path);

// Assemble typed parameters; all nine GRU sections (or both decoder sections)
// must be present with dimensions matching feature_dim.
GruParams gru_from_weights(const WeightsFile& weights);
DecoderParams decoder_from_weights(const WeightsFile& weights);

}  // namespace splatfuse
