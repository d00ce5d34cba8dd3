// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace splatfuse {
namespace {

constexpr int kWindow = 11;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

std::array<double, kWindow> gaussian_window() {
  std::array<double, kWindow> w{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - (kWindow - 1) / 2.0;
    w[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

double psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("psnr: shape mismatch");
  if (a.empty()) throw std::invalid_argument("psnr: empty image");
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    sum_sq += d * d;
  }
  const double mse = sum_sq / a.data.size();
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("ssim: shape mismatch");
  if (a.width < kWindow || a.height < kWindow) {
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");
  }
  static const std::array<double, kWindow> window = gaussian_window();
  const int out_h = a.height - kWindow + 1;
  const int out_w = a.width - kWindow + 1;

  double total = 0.0;
  for (int c = 0; c < a.channels; ++c) {
    double channel_sum = 0.0;
    for (int y = 0; y < out_h; ++y) {
      for (int x = 0; x < out_w; ++x) {
        double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
        for (int i = 0; i < kWindow; ++i) {
          for (int j = 0; j < kWindow; ++j) {
            const double wgt = window[i] * window[j];
            const double va = a.at(y + i, x + j, c);
            const double vb = b.at(y + i, x + j, c);
            mu_a += wgt * va;
            mu_b += wgt * vb;
            aa += wgt * va * va;
            bb += wgt * vb * vb;
            ab += wgt * va * vb;
          }
        }
        const double var_a = aa - mu_a * mu_a;
        const double var_b = bb - mu_b * mu_b;
        const double cov = ab - mu_a * mu_b;
        channel_sum += ((2.0 * mu_a * mu_b + kSsimC1) * (2.0 * cov + kSsimC2)) /
                       ((mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2));
      }
    }
    total += channel_sum / (static_cast<double>(out_h) * out_w);
  }
  return total / a.channels;
}

DepthMetrics depth_metrics(const Image& pred, const Image& gt, const Image& mask) {
  if (!pred.same_shape(gt) || pred.width != mask.width || pred.height != mask.height) {
    throw std::invalid_argument("depth_metrics: shape mismatch");
  }
  if (pred.channels != 1 || mask.channels != 1) {
    throw std::invalid_argument("depth_metrics: expected single-channel maps");
  }
  DepthMetrics m;
  double diff_sum = 0.0, rel_sum = 0.0;
  std::size_t within_125 = 0, within_110 = 0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if (mask.data[i] == 0.0f) continue;
    const double g = gt.data[i];
    if (!(g > 0.0)) throw std::invalid_argument("depth_metrics: masked ground truth <= 0");
    const double p = pred.data[i];
    diff_sum += std::abs(p - g);
    rel_sum += std::abs(p - g) / g;
    const double ratio = p > 0.0 ? std::max(p / g, g / p)
                                 : std::numeric_limits<double>::infinity();
    if (ratio < 1.25) ++within_125;
    if (ratio < 1.10) ++within_110;
    ++m.valid_count;
  }
  if (m.valid_count == 0) throw std::invalid_argument("depth_metrics: empty mask");
  m.abs_diff = diff_sum / m.valid_count;
  m.abs_rel = rel_sum / m.valid_count;
  m.delta_1_25 = static_cast<double>(within_125) / m.valid_count;
  m.delta_1_10 = static_cast<double>(within_110) / m.valid_count;
  return m;
}

}  // namespace splatfuse
