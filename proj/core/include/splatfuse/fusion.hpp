// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "splatfuse/camera.hpp"
#include "splatfuse/triplets.hpp"

namespace splatfuse {

// Projection of one global triplet center into the current view. valid is
// false for centers behind the camera or whose rounded pixel leaves the image.
struct GlobalProjection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
  int px = -1;
  int py = -1;
  bool valid = false;
};

std::vector<GlobalProjection> project_global(const TripletSet& global, const CameraView& view);

// One-to-one matches between local pixels and global triplets.
struct CorrespondenceSet {
  std::vector<std::pair<int, int>> pairs;  // (local pixel index, global index)
  int matched = 0;
  int unmatched = 0;  // local pixels without a match
};

// For each local pixel: among valid global projections rounding to that pixel,
// take the depth-argmin (ties to the lower global index) and accept it iff
// |d_l - d_g| < delta·d_l. Rounded projections partition globals across
// pixels, so matches are one-to-one by construction.
CorrespondenceSet pixel_wise_alignment(const Image& local_depth,
                                       const std::vector<GlobalProjection>& projections,
                                       double delta);

// Same contract as pixel_wise_alignment via an exhaustive per-pixel scan over
// all projections; kept free of spatial indexing as an independent reference.
CorrespondenceSet alignment_oracle(const Image& local_depth,
                                   const std::vector<GlobalProjection>& projections,
                                   double delta);

struct MergedPoint {
  Eigen::Vector3d center;
  double weight = 0.0;
};

// Weighted center average and weight sum; the result lies on the segment
// between the inputs. Rejects nonpositive weights.
MergedPoint merge_pair(const Eigen::Vector3d& mu_l, double w_l, const Eigen::Vector3d& mu_g,
                       double w_g);

// Gated recurrent cell over latent features (local = input, global = state).
struct GruParams {
  Eigen::MatrixXf Wz, Uz, Wr, Ur, Wh, Uh;
  Eigen::VectorXf bz, br, bh;

  static GruParams zeros(int dim);
  void validate(int feature_dim) const;
};

// z = σ(Wz f_l + Uz f_g + bz); r = σ(Wr f_l + Ur f_g + br);
// h = tanh(Wh f_l + Uh (r∘f_g) + bh); out = (1-z)∘f_g + z∘h.
Eigen::VectorXf gru_update(const Eigen::VectorXf& f_l, const Eigen::VectorXf& f_g,
                           const GruParams& params);

// Weight-proportional feature blend; exactly idempotent when f_l == f_g.
Eigen::VectorXf blend_features(const Eigen::VectorXf& f_l, double w_l,
                               const Eigen::VectorXf& f_g, double w_g);

struct FusionStats {
  std::size_t input_global = 0;
  std::size_t input_local = 0;
  std::size_t merged = 0;
  std::size_t output = 0;
  double reduction_ratio = 0.0;  // merged / (input_global + input_local)
};

// Fuses one pixel-aligned local set into the global set: matched globals are
// merged in place (centers/weights via merge_pair, features via the GRU when
// params are given, otherwise the weight blend); unmatched locals are
// appended. An empty global set returns the local set unchanged.
std::pair<TripletSet, FusionStats> fuse_view(const TripletSet& global, const TripletSet& local,
                                             const CameraView& view, double delta,
                                             const GruParams* gru = nullptr);

}  // namespace splatfuse
