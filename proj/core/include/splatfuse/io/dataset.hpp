// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "splatfuse/camera.hpp"
#include "splatfuse/image.hpp"

namespace splatfuse {

// Directory layout: images/%06d.png, poses/%06d.txt (4×4 row-major
// camera-to-world), intrinsics.txt (3×3 row-major), optional depths/%06d.png
// (16-bit millimeters).
struct SceneDataset {
  std::filesystem::path root;
  Intrinsics intrinsics;
  std::vector<CameraView> views;
  std::vector<Image> gt_depths;  // empty, or one map per view
  double near_hint = 0.0;        // 0 = unset
  double far_hint = 0.0;

  bool has_depth() const { return !gt_depths.empty(); }
};

// Loads a complete dataset; images are normalized to [0,1] and rotations are
// validated (1e-3) then re-orthonormalized. Failures name the offending file.
SceneDataset load_scene(const std::filesystem::path& dir);

std::string view_file_name(int index, const std::string& extension);

void save_intrinsics(const Intrinsics& intr, const std::filesystem::path& file);
Intrinsics load_intrinsics(const std::filesystem::path& file, int width, int height);

void save_pose(const Pose& pose, const std::filesystem::path& file);
Pose load_pose(const std::filesystem::path& file);

}  // namespace splatfuse
