// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/io/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace splatfuse {

std::string report_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  if (std::isinf(report.psnr)) {
    j["psnr"] = "inf";
  } else {
    j["psnr"] = report.psnr;
  }
  j["ssim"] = report.ssim;
  if (report.has_depth) {
    j["abs_diff"] = report.abs_diff;
    j["abs_rel"] = report.abs_rel;
    j["delta_1_25"] = report.delta_1_25;
    j["delta_1_10"] = report.delta_1_10;
  } else {
    j["abs_diff"] = nullptr;
    j["abs_rel"] = nullptr;
    j["delta_1_25"] = nullptr;
    j["delta_1_10"] = nullptr;
  }
  j["num_gaussians"] = report.num_gaussians;
  j["reduction_ratio"] = report.reduction_ratio;
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  for (const auto& [stage, ms] : report.timings_ms) timings[stage] = ms;
  j["timings_ms"] = timings;
  return j.dump(2) + "\n";
}

void write_report(const MetricsReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << report_to_json(report);
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace splatfuse
