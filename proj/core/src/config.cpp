// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/io/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "splatfuse/features.hpp"

namespace splatfuse {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key) {
  std::size_t consumed = 0;
  const double v = std::stod(value, &consumed);
  if (consumed != value.size()) throw std::invalid_argument("bad value for " + key);
  return v;
}

int parse_int(const std::string& value, const std::string& key) {
  std::size_t consumed = 0;
  const int v = std::stoi(value, &consumed);
  if (consumed != value.size()) throw std::invalid_argument("bad value for " + key);
  return v;
}

Eigen::Vector3d parse_rgb(const std::string& value, const std::string& key) {
  std::istringstream in(value);
  Eigen::Vector3d rgb;
  char comma1 = 0, comma2 = 0;
  if (!(in >> rgb[0] >> comma1 >> rgb[1] >> comma2 >> rgb[2]) || comma1 != ',' ||
      comma2 != ',' || !(in >> std::ws).eof()) {
    throw std::invalid_argument("bad value for " + key + " (want r,g,b)");
  }
  return rgb;
}

}  // namespace

void EngineConfig::validate() const {
  if (k < 2) throw std::invalid_argument("config: k must be at least 2");
  if (!(0.0 < d_near && d_near < d_far)) {
    throw std::invalid_argument("config: need 0 < d_near < d_far");
  }
  if (delta <= 0.0) throw std::invalid_argument("config: delta must be positive");
  if (nearby_views < 1) throw std::invalid_argument("config: nearby_views must be at least 1");
  if (lambda < 0.0) throw std::invalid_argument("config: lambda must be nonnegative");
  if (temperature <= 0.0) throw std::invalid_argument("config: temperature must be positive");
  if (refine_iterations < 0) throw std::invalid_argument("config: negative refine_iterations");
  if (sigma_g <= 0.0) throw std::invalid_argument("config: sigma_g must be positive");
  if (kappa <= 0.0) throw std::invalid_argument("config: kappa must be positive");
  if (matching_dim < kMinMatchingDim) {
    throw std::invalid_argument("config: matching_dim must be at least 14");
  }
  if (fusion_mode != "blend" && fusion_mode != "gru") {
    throw std::invalid_argument("config: fusion_mode must be 'blend' or 'gru'");
  }
  if (fusion_mode == "gru" && weights.empty()) {
    throw std::invalid_argument("config: fusion_mode 'gru' requires a weights file");
  }
  if (tile_size < 1) throw std::invalid_argument("config: tile_size must be positive");
  if (background.minCoeff() < 0.0 || background.maxCoeff() > 1.0) {
    throw std::invalid_argument("config: background outside [0,1]");
  }
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  EngineConfig config;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_number) +
                               ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "k") config.k = parse_int(value, key);
      else if (key == "d_near") config.d_near = parse_double(value, key);
      else if (key == "d_far") config.d_far = parse_double(value, key);
      else if (key == "delta") config.delta = parse_double(value, key);
      else if (key == "nearby_views") config.nearby_views = parse_int(value, key);
      else if (key == "lambda") config.lambda = parse_double(value, key);
      else if (key == "temperature") config.temperature = parse_double(value, key);
      else if (key == "refine_iterations") config.refine_iterations = parse_int(value, key);
      else if (key == "sigma_g") config.sigma_g = parse_double(value, key);
      else if (key == "kappa") config.kappa = parse_double(value, key);
      else if (key == "matching_dim") config.matching_dim = parse_int(value, key);
      else if (key == "fusion_mode") config.fusion_mode = value;
      else if (key == "weights") config.weights = value;
      else if (key == "tile_size") config.tile_size = parse_int(value, key);
      else if (key == "background") config.background = parse_rgb(value, key);
      else throw std::invalid_argument("unknown key '" + key + "'");
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_number) + ": " +
                               e.what());
    }
  }
  config.validate();
  return config;
}

void save_config(const EngineConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << std::setprecision(17);
  out << "k = " << config.k << "\n";
  out << "d_near = " << config.d_near << "\n";
  out << "d_far = " << config.d_far << "\n";
  out << "delta = " << config.delta << "\n";
  out << "nearby_views = " << config.nearby_views << "\n";
  out << "lambda = " << config.lambda << "\n";
  out << "temperature = " << config.temperature << "\n";
  out << "refine_iterations = " << config.refine_iterations << "\n";
  out << "sigma_g = " << config.sigma_g << "\n";
  out << "kappa = " << config.kappa << "\n";
  out << "matching_dim = " << config.matching_dim << "\n";
  out << "fusion_mode = " << config.fusion_mode << "\n";
  if (!config.weights.empty()) out << "weights = " << config.weights << "\n";
  out << "tile_size = " << config.tile_size << "\n";
  out << "background = " << config.background[0] << "," << config.background[1] << ","
      << config.background[2] << "\n";
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace splatfuse
