// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "splatfuse/parallel.hpp"

namespace splatfuse {
namespace {

constexpr double kShC1 = 0.4886025119029199;

struct BinnedSplat {
  Splat2D splat;
  Eigen::Matrix2d inv_cov;
  std::size_t index = 0;
};

}  // namespace

Eigen::Vector3d evaluate_sh(std::span<const float> coeffs, int degree,
                            const Eigen::Vector3d& dir) {
  if (degree != 0 && degree != 1) throw std::invalid_argument("evaluate_sh: unsupported degree");
  const std::size_t expected = degree == 0 ? 3 : 12;
  if (coeffs.size() != expected) throw std::invalid_argument("evaluate_sh: coefficient count");
  if (std::abs(dir.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("evaluate_sh: direction must be unit length");
  }
  Eigen::Vector3d color;
  for (int c = 0; c < 3; ++c) {
    double v = 0.5 + kShC0 * coeffs[c];
    if (degree == 1) {
      const float* band = coeffs.data() + 3 + 3 * c;
      v += -kShC1 * dir.y() * band[0] + kShC1 * dir.z() * band[1] - kShC1 * dir.x() * band[2];
    }
    color[c] = std::clamp(v, 0.0, 1.0);
  }
  return color;
}

std::optional<Splat2D> project_gaussian(const GaussianPrimitiveSet& prims, std::size_t index,
                                        const Pose& pose, const Intrinsics& intr,
                                        const RasterizerOptions& options) {
  const Eigen::Vector3d mu = prims.center(index);
  const Eigen::Matrix3d w = pose.rotation.transpose();  // world -> camera
  const Eigen::Vector3d cam = w * (mu - pose.translation);
  if (cam.z() <= options.near_clip) return std::nullopt;

  const double inv_z = 1.0 / cam.z();
  Eigen::Matrix<double, 2, 3> jac;
  jac << intr.fx * inv_z, 0.0, -intr.fx * cam.x() * inv_z * inv_z,
      0.0, intr.fy * inv_z, -intr.fy * cam.y() * inv_z * inv_z;

  const Eigen::Matrix3d cov3d =
      covariance_from_scale_rotation(prims.scale(index), prims.rotation(index));
  Eigen::Matrix2d cov2d = jac * w * cov3d * w.transpose() * jac.transpose();
  cov2d(0, 0) += options.lowpass;
  cov2d(1, 1) += options.lowpass;

  Splat2D splat;
  splat.mean = {intr.fx * cam.x() * inv_z + intr.cx, intr.fy * cam.y() * inv_z + intr.cy};
  splat.cov = cov2d;
  splat.depth = cam.z();
  splat.opacity = prims.opacity(index);

  const Eigen::Vector3d offset = mu - pose.translation;
  const double norm = offset.norm();
  const Eigen::Vector3d dir = norm > 1e-12 ? Eigen::Vector3d(offset / norm)
                                           : Eigen::Vector3d(0.0, 0.0, 1.0);
  const int coeffs = prims.sh_coeff_count();
  splat.color = evaluate_sh({prims.sh.data() + static_cast<std::size_t>(coeffs) * index,
                             static_cast<std::size_t>(coeffs)},
                            prims.sh_degree, dir);
  return splat;
}

RenderedFrame render(const GaussianPrimitiveSet& prims, const Pose& pose,
                     const Intrinsics& intr, const Eigen::Vector3d& background,
                     const RasterizerOptions& options) {
  const int w = intr.width, h = intr.height;
  const int tile = options.tile_size;
  const int tiles_x = (w + tile - 1) / tile;
  const int tiles_y = (h + tile - 1) / tile;

  // Project everything, then bin by the 3σ box of the larger eigenvalue.
  std::vector<std::optional<Splat2D>> projected(prims.size());
  parallel_for(0, static_cast<std::int64_t>(prims.size()), [&](std::int64_t i) {
    projected[i] = project_gaussian(prims, i, pose, intr, options);
  });

  std::vector<std::vector<BinnedSplat>> bins(static_cast<std::size_t>(tiles_x) * tiles_y);
  for (std::size_t i = 0; i < projected.size(); ++i) {
    if (!projected[i]) continue;
    const Splat2D& s = *projected[i];
    const double a = s.cov(0, 0), b = s.cov(0, 1), c = s.cov(1, 1);
    const double det = a * c - b * b;
    if (det <= 0.0) continue;
    const double half_trace = 0.5 * (a + c);
    const double lambda_max =
        half_trace + std::sqrt(std::max(0.0, half_trace * half_trace - det));
    const double radius = options.sigma_cutoff * std::sqrt(lambda_max);

    const int x0 = std::clamp(static_cast<int>((s.mean.x() - radius) / tile), 0, tiles_x - 1);
    const int x1 = std::clamp(static_cast<int>((s.mean.x() + radius) / tile), 0, tiles_x - 1);
    const int y0 = std::clamp(static_cast<int>((s.mean.y() - radius) / tile), 0, tiles_y - 1);
    const int y1 = std::clamp(static_cast<int>((s.mean.y() + radius) / tile), 0, tiles_y - 1);
    if (s.mean.x() + radius < 0.0 || s.mean.x() - radius > w - 1 || s.mean.y() + radius < 0.0 ||
        s.mean.y() - radius > h - 1) {
      continue;
    }
    BinnedSplat binned{s, Eigen::Matrix2d(), i};
    binned.inv_cov << c / det, -b / det, -b / det, a / det;
    for (int ty = y0; ty <= y1; ++ty) {
      for (int tx = x0; tx <= x1; ++tx) {
        bins[static_cast<std::size_t>(ty) * tiles_x + tx].push_back(binned);
      }
    }
  }

  RenderedFrame frame{Image(w, h, 3), Image(w, h, 1), Image(w, h, 1)};
  parallel_for(0, static_cast<std::int64_t>(bins.size()), [&](std::int64_t t) {
    auto& bin = bins[t];
    std::sort(bin.begin(), bin.end(), [](const BinnedSplat& lhs, const BinnedSplat& rhs) {
      if (lhs.splat.depth != rhs.splat.depth) return lhs.splat.depth < rhs.splat.depth;
      return lhs.index < rhs.index;
    });
    const int tx = static_cast<int>(t) % tiles_x;
    const int ty = static_cast<int>(t) / tiles_x;
    const int px1 = std::min(w, (tx + 1) * tile);
    const int py1 = std::min(h, (ty + 1) * tile);
    for (int py = ty * tile; py < py1; ++py) {
      for (int px = tx * tile; px < px1; ++px) {
        double transmittance = 1.0;
        Eigen::Vector3d color = Eigen::Vector3d::Zero();
        double depth_acc = 0.0, alpha_acc = 0.0;
        for (const BinnedSplat& bs : bin) {
          const Eigen::Vector2d d(px - bs.splat.mean.x(), py - bs.splat.mean.y());
          const double power = -0.5 * d.dot(bs.inv_cov * d);
          if (power > 0.0) continue;
          const double alpha =
              std::min(options.alpha_cap, bs.splat.opacity * std::exp(power));
          if (alpha < options.contribution_floor) continue;
          const double weight = alpha * transmittance;
          color += weight * bs.splat.color;
          depth_acc += weight * bs.splat.depth;
          alpha_acc += weight;
          transmittance *= 1.0 - alpha;
          if (transmittance < options.transmittance_floor) break;
        }
        color += transmittance * background;
        for (int c = 0; c < 3; ++c) frame.color.at(py, px, c) = static_cast<float>(color[c]);
        frame.alpha.at(py, px) = static_cast<float>(alpha_acc);
        frame.depth.at(py, px) =
            alpha_acc > 1e-6 ? static_cast<float>(depth_acc / alpha_acc) : 0.0f;
      }
    }
  });
  return frame;
}

}  // namespace splatfuse
