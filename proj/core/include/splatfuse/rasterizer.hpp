// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "splatfuse/camera.hpp"
#include "splatfuse/gaussians.hpp"
#include "splatfuse/image.hpp"

namespace splatfuse {

// A primitive after projection: 2D mean and covariance in pixels, camera-space
// depth, view-dependent color, and decoded opacity.
struct Splat2D {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;
  double depth = 0.0;
  Eigen::Vector3d color;
  double opacity = 0.0;
};

struct RenderedFrame {
  Image color;  // H×W×3 in [0,1]
  Image depth;  // H×W meters; alpha-weighted mean, 0 where alpha vanishes
  Image alpha;  // H×W in [0,1]
};

struct RasterizerOptions {
  int tile_size = 16;
  double sigma_cutoff = 3.0;          // binning radius in standard deviations
  double transmittance_floor = 1e-4;  // early compositing exit
  double contribution_floor = 1.0 / 255.0;
  double alpha_cap = 0.99;
  double near_clip = 0.01;  // meters
  double lowpass = 0.3;     // px², added to both 2D covariance diagonals
};

// Spherical-harmonic color along a unit direction, clamped to [0,1]. coeffs
// holds 3 DC values, then for degree 1 nine band-1 values grouped per channel.
Eigen::Vector3d evaluate_sh(std::span<const float> coeffs, int degree,
                            const Eigen::Vector3d& dir);

// EWA projection of one primitive: camera transform (culled at depth <=
// near_clip), pinhole Jacobian at the camera-space mean, 2×2 covariance with
// the low-pass term, SH color along the camera-to-center direction.
std::optional<Splat2D> project_gaussian(const GaussianPrimitiveSet& prims, std::size_t index,
                                        const Pose& pose, const Intrinsics& intr,
                                        const RasterizerOptions& options = {});

// Tile-based forward splatting with front-to-back alpha compositing. Splats
// are binned by their sigma_cutoff radius and composited per tile in (depth,
// primitive index) order.
RenderedFrame render(const GaussianPrimitiveSet& prims, const Pose& pose,
                     const Intrinsics& intr, const Eigen::Vector3d& background,
                     const RasterizerOptions& options = {});

}  // namespace splatfuse
