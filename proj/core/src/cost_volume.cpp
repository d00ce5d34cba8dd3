// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/cost_volume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "splatfuse/parallel.hpp"

namespace splatfuse {
namespace {

float cosine(const float* a, const float* b, int n) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < n; ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na < 1e-24 || nb < 1e-24) return 0.0f;
  return static_cast<float>(dot / (std::sqrt(na) * std::sqrt(nb)));
}

// Adds one view's warped slice into the running cosine sums for plane k.
void accumulate_plane(const FeatureMap& target, const WarpedFeatureMap& warped, int k,
                      CostVolume& volume, std::vector<int>& sample_counts,
                      std::vector<std::uint8_t>& view_touched) {
  const int w = volume.width, h = volume.height;
  const int c = target.channels();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      if (!warped.validity[p]) continue;
      volume.at(k, y, x) +=
          cosine(target.data.pixel(y, x).data(), warped.features.data.pixel(y, x).data(), c);
      ++sample_counts[static_cast<std::size_t>(k) * h * w + p];
      view_touched[p] = 1;
    }
  }
}

void finalize_means(CostVolume& volume, const std::vector<int>& sample_counts) {
  for (std::size_t i = 0; i < volume.data.size(); ++i) {
    if (sample_counts[i] > 0) volume.data[i] /= static_cast<float>(sample_counts[i]);
  }
}

}  // namespace

DepthPlaneSet build_depth_planes(double d_near, double d_far, int k) {
  if (!(0.0 < d_near && d_near < d_far)) {
    throw std::invalid_argument("build_depth_planes: need 0 < d_near < d_far");
  }
  if (k < 2) throw std::invalid_argument("build_depth_planes: need k >= 2");
  DepthPlaneSet planes;
  planes.d_near = d_near;
  planes.d_far = d_far;
  planes.depths.resize(k);
  for (int i = 0; i < k; ++i) {
    planes.depths[i] = d_near + (d_far - d_near) * i / (k - 1);
  }
  planes.depths.front() = d_near;
  planes.depths.back() = d_far;
  return planes;
}

CostVolume build_cost_volume(const FeatureMap& target, const DepthPlaneSet& planes,
                             const std::vector<std::vector<WarpedFeatureMap>>& warped) {
  if (warped.empty()) throw std::invalid_argument("build_cost_volume: no nearby views");
  const int h = target.height(), w = target.width();
  const int k = planes.count();

  CostVolume volume;
  volume.plane_count = k;
  volume.height = h;
  volume.width = w;
  volume.planes = planes;
  volume.data.assign(static_cast<std::size_t>(k) * h * w, 0.0f);
  volume.validity.assign(static_cast<std::size_t>(h) * w, 0);
  std::vector<int> sample_counts(volume.data.size(), 0);

  for (const auto& view_planes : warped) {
    if (static_cast<int>(view_planes.size()) != k) {
      throw std::invalid_argument("build_cost_volume: plane count mismatch");
    }
    std::vector<std::uint8_t> touched(static_cast<std::size_t>(h) * w, 0);
    for (int p = 0; p < k; ++p) {
      const WarpedFeatureMap& wf = view_planes[p];
      if (wf.features.width() != w || wf.features.height() != h ||
          wf.features.channels() != target.channels()) {
        throw std::invalid_argument("build_cost_volume: warped map shape mismatch");
      }
      accumulate_plane(target, wf, p, volume, sample_counts, touched);
    }
    for (std::size_t i = 0; i < touched.size(); ++i) volume.validity[i] += touched[i];
  }
  finalize_means(volume, sample_counts);
  return volume;
}

CostVolume sweep_cost_volume(const CameraView& target_view, const FeatureMap& target_features,
                             const std::vector<const CameraView*>& nearby_views,
                             const std::vector<const FeatureMap*>& nearby_features,
                             const DepthPlaneSet& planes) {
  if (nearby_views.empty()) throw std::invalid_argument("sweep_cost_volume: no nearby views");
  if (nearby_views.size() != nearby_features.size()) {
    throw std::invalid_argument("sweep_cost_volume: view/feature count mismatch");
  }
  const int h = target_features.height(), w = target_features.width();
  const int k = planes.count();

  CostVolume volume;
  volume.plane_count = k;
  volume.height = h;
  volume.width = w;
  volume.planes = planes;
  volume.data.assign(static_cast<std::size_t>(k) * h * w, 0.0f);
  volume.validity.assign(static_cast<std::size_t>(h) * w, 0);
  std::vector<int> sample_counts(volume.data.size(), 0);

  for (std::size_t v = 0; v < nearby_views.size(); ++v) {
    const RigidTransform src_to_dst =
        relative_transform(nearby_views[v]->pose, target_view.pose);
    std::vector<std::uint8_t> touched(static_cast<std::size_t>(h) * w, 0);
    for (int p = 0; p < k; ++p) {
      const WarpedFeatureMap wf =
          warp_features(*nearby_features[v], src_to_dst, nearby_views[v]->intrinsics,
                        target_view.intrinsics, planes.depths[p]);
      accumulate_plane(target_features, wf, p, volume, sample_counts, touched);
    }
    for (std::size_t i = 0; i < touched.size(); ++i) volume.validity[i] += touched[i];
  }
  finalize_means(volume, sample_counts);
  return volume;
}

CostVolume refine_cost_volume(const CostVolume& volume, const CameraView& guide,
                              int iterations, double sigma_g) {
  if (iterations < 0) throw std::invalid_argument("refine_cost_volume: negative iterations");
  if (sigma_g <= 0.0) throw std::invalid_argument("refine_cost_volume: sigma_g must be positive");
  if (guide.image.width != 4 * volume.width || guide.image.height != 4 * volume.height) {
    throw std::invalid_argument("refine_cost_volume: guide resolution mismatch");
  }
  if (iterations == 0) return volume;

  const Image gray = luma(downsample_mean(guide.image, 4));
  const int h = volume.height, w = volume.width;
  const double inv_two_sigma_sq = 1.0 / (2.0 * sigma_g * sigma_g);

  CostVolume out = volume;
  std::vector<float> scratch(static_cast<std::size_t>(h) * w);
  for (int it = 0; it < iterations; ++it) {
    for (int k = 0; k < volume.plane_count; ++k) {
      float* slice = out.data.data() + static_cast<std::size_t>(k) * h * w;
      parallel_for(0, h, [&](std::int64_t y) {
        for (int x = 0; x < w; ++x) {
          const double center = gray.at(static_cast<int>(y), x);
          double acc = 0.0, weight_sum = 0.0;
          const int y0 = std::max<int>(0, static_cast<int>(y) - 2);
          const int y1 = std::min(h - 1, static_cast<int>(y) + 2);
          const int x0 = std::max(0, x - 2);
          const int x1 = std::min(w - 1, x + 2);
          for (int qy = y0; qy <= y1; ++qy) {
            for (int qx = x0; qx <= x1; ++qx) {
              const double d = gray.at(qy, qx) - center;
              const double wgt = std::exp(-d * d * inv_two_sigma_sq);
              acc += wgt * slice[static_cast<std::size_t>(qy) * w + qx];
              weight_sum += wgt;
            }
          }
          scratch[static_cast<std::size_t>(y) * w + x] = static_cast<float>(acc / weight_sum);
        }
      });
      std::copy(scratch.begin(), scratch.end(), slice);
    }
  }
  return out;
}

DepthCandidates upsample_candidates(const CostVolume& volume, int out_height, int out_width) {
  if (out_height != 4 * volume.height || out_width != 4 * volume.width) {
    throw std::invalid_argument("upsample_candidates: target must be 4x the volume");
  }
  DepthCandidates cand;
  cand.plane_count = volume.plane_count;
  cand.height = out_height;
  cand.width = out_width;
  cand.logits.resize(static_cast<std::size_t>(volume.plane_count) * out_height * out_width);
  parallel_for(0, volume.plane_count, [&](std::int64_t k) {
    Image slice(volume.width, volume.height, 1);
    std::copy_n(volume.data.data() + k * static_cast<std::size_t>(volume.height) * volume.width,
                slice.data.size(), slice.data.begin());
    const Image up = upsample_bilinear(slice, out_width, out_height);
    std::copy(up.data.begin(), up.data.end(),
              cand.logits.begin() + k * static_cast<std::size_t>(out_height) * out_width);
  });
  return cand;
}

Image soft_argmax_depth(const DepthCandidates& candidates, const DepthPlaneSet& planes,
                        double temperature) {
  if (temperature <= 0.0) {
    throw std::invalid_argument("soft_argmax_depth: temperature must be positive");
  }
  if (candidates.plane_count != planes.count()) {
    throw std::invalid_argument("soft_argmax_depth: plane count mismatch");
  }
  const int h = candidates.height, w = candidates.width, k = candidates.plane_count;
  Image depth(w, h, 1);
  parallel_for(0, h, [&](std::int64_t y) {
    std::vector<double> probs(k);
    for (int x = 0; x < w; ++x) {
      double max_logit = -std::numeric_limits<double>::infinity();
      for (int p = 0; p < k; ++p) {
        max_logit = std::max(max_logit, static_cast<double>(candidates.at(p, y, x)));
      }
      double norm = 0.0;
      for (int p = 0; p < k; ++p) {
        probs[p] = std::exp((candidates.at(p, y, x) - max_logit) / temperature);
        norm += probs[p];
      }
      double d = 0.0;
      for (int p = 0; p < k; ++p) d += probs[p] / norm * planes.depths[p];
      depth.at(static_cast<int>(y), x) = static_cast<float>(d);
    }
  });
  return depth;
}

}  // namespace splatfuse
