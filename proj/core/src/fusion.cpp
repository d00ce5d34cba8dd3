// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "splatfuse/parallel.hpp"

namespace splatfuse {
namespace {

bool threshold_match(double d_local, double d_global, double delta) {
  return std::abs(d_local - d_global) < delta * d_local;
}

}  // namespace

std::vector<GlobalProjection> project_global(const TripletSet& global, const CameraView& view) {
  std::vector<GlobalProjection> projections(global.size());
  parallel_for(0, static_cast<std::int64_t>(global.size()), [&](std::int64_t i) {
    const PixelProjection p = project(view.intrinsics, view.pose, global.centers[i]);
    GlobalProjection& g = projections[i];
    g.depth = p.depth;
    if (!p.in_front) return;
    g.u = p.u;
    g.v = p.v;
    g.px = round_half_up(p.u);
    g.py = round_half_up(p.v);
    g.valid = g.px >= 0 && g.px < view.intrinsics.width && g.py >= 0 &&
              g.py < view.intrinsics.height;
  });
  return projections;
}

CorrespondenceSet pixel_wise_alignment(const Image& local_depth,
                                       const std::vector<GlobalProjection>& projections,
                                       double delta) {
  if (delta <= 0.0) throw std::invalid_argument("pixel_wise_alignment: delta must be positive");
  const int w = local_depth.width, h = local_depth.height;
  // Depth-argmin global per pixel; ascending scan keeps the lower index on ties.
  std::vector<int> best(static_cast<std::size_t>(w) * h, -1);
  for (int j = 0; j < static_cast<int>(projections.size()); ++j) {
    const GlobalProjection& g = projections[j];
    if (!g.valid) continue;
    const std::size_t p = static_cast<std::size_t>(g.py) * w + g.px;
    if (best[p] < 0 || g.depth < projections[best[p]].depth) best[p] = j;
  }
  CorrespondenceSet corr;
  for (std::size_t p = 0; p < best.size(); ++p) {
    if (best[p] < 0) continue;
    const double d_l = local_depth.data[p];
    if (threshold_match(d_l, projections[best[p]].depth, delta)) {
      corr.pairs.emplace_back(static_cast<int>(p), best[p]);
    }
  }
  corr.matched = static_cast<int>(corr.pairs.size());
  corr.unmatched = w * h - corr.matched;
  return corr;
}

CorrespondenceSet alignment_oracle(const Image& local_depth,
                                   const std::vector<GlobalProjection>& projections,
                                   double delta) {
  if (delta <= 0.0) throw std::invalid_argument("alignment_oracle: delta must be positive");
  const int w = local_depth.width, h = local_depth.height;
  CorrespondenceSet corr;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int best = -1;
      for (int j = 0; j < static_cast<int>(projections.size()); ++j) {
        const GlobalProjection& g = projections[j];
        if (!g.valid || g.px != x || g.py != y) continue;
        if (best < 0 || g.depth < projections[best].depth) best = j;
      }
      if (best < 0) continue;
      const double d_l = local_depth.at(y, x);
      if (threshold_match(d_l, projections[best].depth, delta)) {
        corr.pairs.emplace_back(y * w + x, best);
      }
    }
  }
  corr.matched = static_cast<int>(corr.pairs.size());
  corr.unmatched = w * h - corr.matched;
  return corr;
}

MergedPoint merge_pair(const Eigen::Vector3d& mu_l, double w_l, const Eigen::Vector3d& mu_g,
                       double w_g) {
  if (!(w_l > 0.0) || !(w_g > 0.0)) {
    throw std::invalid_argument("merge_pair: weights must be positive");
  }
  // Incremental form keeps the result exactly on the connecting segment and
  // exactly at mu_g when the centers coincide.
  const double t = w_l / (w_l + w_g);
  return {mu_g + t * (mu_l - mu_g), w_l + w_g};
}

GruParams GruParams::zeros(int dim) {
  GruParams p;
  p.Wz = p.Uz = p.Wr = p.Ur = p.Wh = p.Uh = Eigen::MatrixXf::Zero(dim, dim);
  p.bz = p.br = p.bh = Eigen::VectorXf::Zero(dim);
  return p;
}

void GruParams::validate(int feature_dim) const {
  const auto square = [feature_dim](const Eigen::MatrixXf& m) {
    return m.rows() == feature_dim && m.cols() == feature_dim;
  };
  if (!square(Wz) || !square(Uz) || !square(Wr) || !square(Ur) || !square(Wh) || !square(Uh) ||
      bz.size() != feature_dim || br.size() != feature_dim || bh.size() != feature_dim) {
    throw std::invalid_argument("GruParams: dimension mismatch");
  }
  const auto finite = [](const Eigen::MatrixXf& m) { return m.allFinite(); };
  if (!finite(Wz) || !finite(Uz) || !finite(Wr) || !finite(Ur) || !finite(Wh) || !finite(Uh) ||
      !bz.allFinite() || !br.allFinite() || !bh.allFinite()) {
    throw std::invalid_argument("GruParams: non-finite entries");
  }
}

Eigen::VectorXf gru_update(const Eigen::VectorXf& f_l, const Eigen::VectorXf& f_g,
                           const GruParams& params) {
  if (f_l.size() != f_g.size() || params.Wz.cols() != f_l.size()) {
    throw std::invalid_argument("gru_update: dimension mismatch");
  }
  const auto sigmoid = [](float v) { return 1.0f / (1.0f + std::exp(-v)); };
  const Eigen::VectorXf z =
      (params.Wz * f_l + params.Uz * f_g + params.bz).unaryExpr(sigmoid);
  const Eigen::VectorXf r =
      (params.Wr * f_l + params.Ur * f_g + params.br).unaryExpr(sigmoid);
  const Eigen::VectorXf h =
      (params.Wh * f_l + params.Uh * r.cwiseProduct(f_g) + params.bh)
          .unaryExpr([](float v) { return std::tanh(v); });
  return (Eigen::VectorXf::Ones(f_g.size()) - z).cwiseProduct(f_g) + z.cwiseProduct(h);
}

Eigen::VectorXf blend_features(const Eigen::VectorXf& f_l, double w_l,
                               const Eigen::VectorXf& f_g, double w_g) {
  if (f_l.size() != f_g.size()) throw std::invalid_argument("blend_features: dimension mismatch");
  if (!(w_l > 0.0) || !(w_g > 0.0)) {
    throw std::invalid_argument("blend_features: weights must be positive");
  }
  const float t = static_cast<float>(w_l / (w_l + w_g));
  return f_g + t * (f_l - f_g);
}

std::pair<TripletSet, FusionStats> fuse_view(const TripletSet& global, const TripletSet& local,
                                             const CameraView& view, double delta,
                                             const GruParams* gru) {
  if (!global.empty() && global.feature_dim != local.feature_dim) {
    throw std::invalid_argument("fuse_view: feature dimension mismatch");
  }
  const std::size_t expected =
      static_cast<std::size_t>(view.intrinsics.width) * view.intrinsics.height;
  if (local.size() != expected) {
    throw std::invalid_argument("fuse_view: local set is not pixel-aligned with the view");
  }
  FusionStats stats;
  stats.input_global = global.size();
  stats.input_local = local.size();

  if (global.empty()) {
    stats.output = local.size();
    stats.reduction_ratio = 0.0;
    return {local, stats};
  }
  if (gru != nullptr) gru->validate(local.feature_dim);

  // Local depths re-derived by projection so that duplicate views reproduce
  // the global projections bit-for-bit.
  Image local_depth(view.intrinsics.width, view.intrinsics.height, 1);
  parallel_for(0, static_cast<std::int64_t>(local.size()), [&](std::int64_t i) {
    local_depth.data[i] =
        static_cast<float>(project(view.intrinsics, view.pose, local.centers[i]).depth);
  });

  const std::vector<GlobalProjection> projections = project_global(global, view);
  const CorrespondenceSet corr = pixel_wise_alignment(local_depth, projections, delta);

  TripletSet fused = global;
  std::vector<std::uint8_t> local_used(local.size(), 0);
  const auto map_feature = [](std::span<const float> f) {
    return Eigen::Map<const Eigen::VectorXf>(f.data(), f.size());
  };
  for (const auto& [i, j] : corr.pairs) {
    const MergedPoint merged =
        merge_pair(local.centers[i], local.weights[i], fused.centers[j], fused.weights[j]);
    const Eigen::VectorXf feature =
        gru != nullptr
            ? gru_update(map_feature(local.feature(i)), map_feature(fused.feature(j)), *gru)
            : blend_features(map_feature(local.feature(i)), local.weights[i],
                             map_feature(fused.feature(j)), fused.weights[j]);
    fused.centers[j] = merged.center;
    fused.weights[j] = merged.weight;
    std::copy_n(feature.data(), feature.size(), fused.feature(j).begin());
    fused.tags[j] = {-1, -1};
    local_used[i] = 1;
  }
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (local_used[i]) continue;
    fused.centers.push_back(local.centers[i]);
    fused.weights.push_back(local.weights[i]);
    const auto f = local.feature(i);
    fused.features.insert(fused.features.end(), f.begin(), f.end());
    fused.tags.push_back(local.tags[i]);
  }

  stats.merged = corr.pairs.size();
  stats.output = fused.size();
  stats.reduction_ratio =
      static_cast<double>(stats.merged) / static_cast<double>(stats.input_global + stats.input_local);
  return {std::move(fused), stats};
}

}  // namespace splatfuse
