// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/gaussians.hpp"

#include <algorithm>
#include <stdexcept>

#include "splatfuse/parallel.hpp"

namespace splatfuse {
namespace {

float softplus(float x) { return x > 20.0f ? x : std::log1p(std::exp(x)); }

float logit(double p) { return static_cast<float>(std::log(p / (1.0 - p))); }

}  // namespace

void GaussianPrimitiveSet::validate() const {
  const std::size_t m = size();
  if (centers.size() != 3 * m || log_scales.size() != 3 * m || rotations.size() != 4 * m ||
      sh.size() != static_cast<std::size_t>(sh_coeff_count()) * m) {
    throw std::invalid_argument("GaussianPrimitiveSet: inconsistent array sizes");
  }
  if (sh_degree != 0 && sh_degree != 1) {
    throw std::invalid_argument("GaussianPrimitiveSet: unsupported SH degree");
  }
  const auto all_finite = [](const std::vector<float>& v) {
    return std::all_of(v.begin(), v.end(), [](float f) { return std::isfinite(f); });
  };
  if (!all_finite(centers) || !all_finite(log_scales) || !all_finite(rotations) ||
      !all_finite(opacity_logits) || !all_finite(sh)) {
    throw std::invalid_argument("GaussianPrimitiveSet: non-finite entries");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(rotation(i).norm() - 1.0) > 1e-6) {
      throw std::invalid_argument("GaussianPrimitiveSet: non-unit quaternion");
    }
  }
}

int DecoderParams::sh_degree() const {
  switch (W.rows()) {
    case 11: return 0;
    case 20: return 1;
    default: throw std::invalid_argument("DecoderParams: unsupported output size");
  }
}

void DecoderParams::validate(int feature_dim) const {
  sh_degree();
  if (W.cols() != feature_dim || b.size() != W.rows()) {
    throw std::invalid_argument("DecoderParams: dimension mismatch");
  }
  if (!W.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("DecoderParams: non-finite entries");
  }
}

GaussianPrimitiveSet decode_triplets(const TripletSet& triplets, const Intrinsics& intr,
                                     double kappa, const DecoderParams* params) {
  if (kappa <= 0.0) throw std::invalid_argument("decode_triplets: kappa must be positive");
  if (params == nullptr && triplets.feature_dim < latent::kMatchingOffset) {
    throw std::invalid_argument("decode_triplets: latent layout too small for default decode");
  }
  if (params != nullptr) params->validate(triplets.feature_dim);

  GaussianPrimitiveSet prims;
  prims.sh_degree = params == nullptr ? 0 : params->sh_degree();
  const std::size_t m = triplets.size();
  const int coeffs = prims.sh_coeff_count();
  prims.centers.resize(3 * m);
  prims.log_scales.resize(3 * m);
  prims.rotations.resize(4 * m);
  prims.opacity_logits.resize(m);
  prims.sh.resize(static_cast<std::size_t>(coeffs) * m);

  parallel_for(0, static_cast<std::int64_t>(m), [&](std::int64_t i) {
    for (int a = 0; a < 3; ++a) {
      prims.centers[3 * i + a] = static_cast<float>(triplets.centers[i][a]);
    }
    const auto f = triplets.feature(i);
    if (params == nullptr) {
      const double d_src = std::max(static_cast<double>(f[latent::kSourceDepth]), 1e-4);
      const float log_scale = static_cast<float>(std::log(kappa * d_src / intr.fx));
      prims.log_scales[3 * i] = prims.log_scales[3 * i + 1] = prims.log_scales[3 * i + 2] =
          log_scale;
      prims.rotations[4 * i] = 1.0f;
      prims.rotations[4 * i + 1] = prims.rotations[4 * i + 2] = prims.rotations[4 * i + 3] = 0.0f;
      prims.opacity_logits[i] =
          logit(std::clamp(static_cast<double>(f[latent::kWeight]), 0.01, 0.99));
      for (int c = 0; c < 3; ++c) {
        const double rgb = std::clamp(static_cast<double>(f[c]), 0.0, 1.0);
        prims.sh[coeffs * i + c] = static_cast<float>((rgb - 0.5) / kShC0);
      }
    } else {
      const Eigen::VectorXf out =
          params->W * Eigen::Map<const Eigen::VectorXf>(f.data(), f.size()) + params->b;
      for (int a = 0; a < 3; ++a) {
        prims.log_scales[3 * i + a] = std::log(std::max(softplus(out[a]), 1e-12f));
      }
      Eigen::Vector4f q = out.segment<4>(3);
      const float norm = q.norm();
      q = norm > 1e-12f ? Eigen::Vector4f(q / norm) : Eigen::Vector4f(1, 0, 0, 0);
      for (int a = 0; a < 4; ++a) prims.rotations[4 * i + a] = q[a];
      prims.opacity_logits[i] = out[7];
      for (int c = 0; c < coeffs; ++c) prims.sh[coeffs * i + c] = out[8 + c];
    }
  });
  return prims;
}

Eigen::Matrix3d covariance_from_scale_rotation(const Eigen::Vector3d& scale,
                                               const Eigen::Quaterniond& q) {
  if (!(scale.minCoeff() > 0.0)) {
    throw std::invalid_argument("covariance_from_scale_rotation: scale must be positive");
  }
  if (std::abs(q.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("covariance_from_scale_rotation: non-unit quaternion");
  }
  const Eigen::Matrix3d r = q.toRotationMatrix();
  return r * scale.cwiseProduct(scale).asDiagonal() * r.transpose();
}

}  // namespace splatfuse
