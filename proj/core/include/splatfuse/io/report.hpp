// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace splatfuse {

// Evaluation summary serialized as JSON. Depth metrics are emitted as null
// when no ground-truth depth was available.
struct MetricsReport {
  double psnr = 0.0;  // +inf serializes as the string "inf"
  double ssim = 0.0;
  bool has_depth = false;
  double abs_diff = 0.0;
  double abs_rel = 0.0;
  double delta_1_25 = 0.0;
  double delta_1_10 = 0.0;
  std::size_t num_gaussians = 0;
  double reduction_ratio = 0.0;
  std::vector<std::pair<std::string, double>> timings_ms;
};

std::string report_to_json(const MetricsReport& report);
void write_report(const MetricsReport& report, const std::filesystem::path& path);

}  // namespace splatfuse
