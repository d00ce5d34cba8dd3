// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/io/dataset.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "splatfuse/io/png_io.hpp"

namespace splatfuse {
namespace {

std::vector<double> read_numbers(const std::filesystem::path& file, std::size_t expected) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error(file.string() + ": cannot open");
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw std::runtime_error(file.string() + ": malformed number");
  if (values.size() != expected) {
    throw std::runtime_error(file.string() + ": expected " + std::to_string(expected) +
                             " values, found " + std::to_string(values.size()));
  }
  return values;
}

void write_numbers(const std::filesystem::path& file, const double* values, int rows, int cols) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error(file.string() + ": cannot open for writing");
  out << std::setprecision(17);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      out << values[r * cols + c] << (c + 1 == cols ? "" : " ");
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error(file.string() + ": write failed");
}

}  // namespace

std::string view_file_name(int index, const std::string& extension) {
  std::array<char, 16> buf{};
  std::snprintf(buf.data(), buf.size(), "%06d", index);
  return std::string(buf.data()) + extension;
}

void save_intrinsics(const Intrinsics& intr, const std::filesystem::path& file) {
  const double k[9] = {intr.fx, 0.0, intr.cx, 0.0, intr.fy, intr.cy, 0.0, 0.0, 1.0};
  write_numbers(file, k, 3, 3);
}

Intrinsics load_intrinsics(const std::filesystem::path& file, int width, int height) {
  const std::vector<double> k = read_numbers(file, 9);
  if (k[1] != 0.0 || k[3] != 0.0 || k[6] != 0.0 || k[7] != 0.0 || k[8] != 1.0) {
    throw std::runtime_error(file.string() + ": not an upper-triangular pinhole matrix");
  }
  Intrinsics intr{k[0], k[4], k[2], k[5], width, height};
  try {
    intr.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(file.string() + ": " + e.what());
  }
  return intr;
}

void save_pose(const Pose& pose, const std::filesystem::path& file) {
  double m[16];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[r * 4 + c] = pose.rotation(r, c);
    m[r * 4 + 3] = pose.translation[r];
  }
  m[12] = m[13] = m[14] = 0.0;
  m[15] = 1.0;
  write_numbers(file, m, 4, 4);
}

Pose load_pose(const std::filesystem::path& file) {
  const std::vector<double> m = read_numbers(file, 16);
  if (std::abs(m[12]) > 1e-9 || std::abs(m[13]) > 1e-9 || std::abs(m[14]) > 1e-9 ||
      std::abs(m[15] - 1.0) > 1e-9) {
    throw std::runtime_error(file.string() + ": last row is not (0 0 0 1)");
  }
  Eigen::Matrix3d rotation;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rotation(r, c) = m[r * 4 + c];
  }
  Pose pose;
  try {
    // Accept mild numeric drift from text round trips, then snap to SO(3).
    pose.rotation = orthonormalized(rotation, 1e-3);
  } catch (const std::exception& e) {
    throw std::runtime_error(file.string() + ": " + e.what());
  }
  pose.translation = {m[3], m[7], m[11]};
  return pose;
}

SceneDataset load_scene(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + ": not a directory");

  SceneDataset scene;
  scene.root = dir;

  int count = 0;
  while (fs::exists(dir / "images" / view_file_name(count, ".png"))) ++count;
  if (count == 0) throw std::runtime_error((dir / "images").string() + ": no images found");
  if (fs::exists(dir / "poses" / view_file_name(count, ".txt"))) {
    throw std::runtime_error(dir.string() + ": more poses than images");
  }

  const bool with_depth = fs::is_directory(dir / "depths");
  for (int i = 0; i < count; ++i) {
    CameraView view;
    view.index = i;
    view.image = read_png_color(dir / "images" / view_file_name(i, ".png"));
    view.pose = load_pose(dir / "poses" / view_file_name(i, ".txt"));
    if (i == 0) {
      scene.intrinsics =
          load_intrinsics(dir / "intrinsics.txt", view.image.width, view.image.height);
    } else if (view.image.width != scene.intrinsics.width ||
               view.image.height != scene.intrinsics.height) {
      throw std::runtime_error((dir / "images" / view_file_name(i, ".png")).string() +
                               ": resolution differs from view 0");
    }
    view.intrinsics = scene.intrinsics;
    view.validate();
    scene.views.push_back(std::move(view));
    if (with_depth) {
      Image depth = read_png_depth_mm(dir / "depths" / view_file_name(i, ".png"));
      if (depth.width != scene.intrinsics.width || depth.height != scene.intrinsics.height) {
        throw std::runtime_error((dir / "depths" / view_file_name(i, ".png")).string() +
                                 ": resolution differs from the images");
      }
      scene.gt_depths.push_back(std::move(depth));
    }
  }
  return scene;
}

}  // namespace splatfuse
