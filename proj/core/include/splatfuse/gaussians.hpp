// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <vector>

#include "splatfuse/camera.hpp"
#include "splatfuse/triplets.hpp"

namespace splatfuse {

// Renderable primitives. Scales and opacities are stored in their file
// encodings (log meters, inverse-sigmoid) so that export/import round trips
// are bit-exact; accessors decode on read. Rotations are unit quaternions in
// (w, x, y, z) order. SH coefficients per primitive: 3 DC values (RGB), then
// for degree 1 the nine band-1 values grouped per channel.
struct GaussianPrimitiveSet {
  int sh_degree = 0;
  std::vector<float> centers;         // size() × 3
  std::vector<float> log_scales;      // size() × 3
  std::vector<float> rotations;       // size() × 4
  std::vector<float> opacity_logits;  // size()
  std::vector<float> sh;              // size() × sh_coeff_count()

  std::size_t size() const { return opacity_logits.size(); }
  int sh_coeff_count() const { return 3 * (sh_degree + 1) * (sh_degree + 1); }

  Eigen::Vector3d center(std::size_t i) const {
    return {centers[3 * i], centers[3 * i + 1], centers[3 * i + 2]};
  }
  Eigen::Vector3d scale(std::size_t i) const {
    return {std::exp(static_cast<double>(log_scales[3 * i])),
            std::exp(static_cast<double>(log_scales[3 * i + 1])),
            std::exp(static_cast<double>(log_scales[3 * i + 2]))};
  }
  Eigen::Quaterniond rotation(std::size_t i) const {
    return {rotations[4 * i], rotations[4 * i + 1], rotations[4 * i + 2], rotations[4 * i + 3]};
  }
  double opacity(std::size_t i) const {
    return 1.0 / (1.0 + std::exp(-static_cast<double>(opacity_logits[i])));
  }

  // Checks array-size consistency, finiteness, and quaternion norms (1e-6).
  void validate() const;
};

inline constexpr double kShC0 = 0.28209479177387814;  // Y_00

// Single affine decode layer: rows are raw scales (3, softplus), quaternion
// (4, normalized), opacity (1, sigmoid), then 3 or 12 SH coefficients.
struct DecoderParams {
  Eigen::MatrixXf W;
  Eigen::VectorXf b;

  int sh_degree() const;  // derived from W rows; throws on unsupported sizes
  void validate(int feature_dim) const;
};

// Default mode (params == nullptr): DC color reproducing the latent RGB,
// opacity = latent confidence clamped to (0.01, 0.99), isotropic scale
// kappa·d_src/fx covering one source pixel, identity rotation. Loaded mode
// applies the affine layer to each latent vector.
GaussianPrimitiveSet decode_triplets(const TripletSet& triplets, const Intrinsics& intr,
                                     double kappa = 1.0, const DecoderParams* params = nullptr);

// Σ = R·diag(s)·diag(s)ᵀ·Rᵀ. Rejects nonpositive scales and quaternions whose
// norm deviates from 1 by more than 1e-6.
Eigen::Matrix3d covariance_from_scale_rotation(const Eigen::Vector3d& scale,
                                               const Eigen::Quaterniond& q);

}  // namespace splatfuse
