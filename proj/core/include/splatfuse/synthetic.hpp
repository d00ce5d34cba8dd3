// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "splatfuse/camera.hpp"
#include "splatfuse/image.hpp"

namespace splatfuse {

// Procedural indoor scenes built from textured axis-aligned quads. Ray-cast
// rendering gives closed-form intersections, so the emitted depth maps are
// exact up to millimeter quantization in the files.

struct QuadTexture {
  enum class Kind { kChecker, kNoise };
  Kind kind = Kind::kNoise;
  double scale = 0.5;  // checker period or noise feature size, meters
  Eigen::Vector3d color_a{0.8, 0.8, 0.8};
  Eigen::Vector3d color_b{0.2, 0.2, 0.2};
};

// Plane orthogonal to `axis` at coordinate `offset`, bounded on the two
// remaining axes in cyclic order (axis+1, axis+2).
struct TexturedQuad {
  int axis = 2;
  double offset = 0.0;
  double min_u = 0.0, max_u = 0.0;
  double min_v = 0.0, max_v = 0.0;
  QuadTexture texture;
};

struct SyntheticScene {
  std::vector<TexturedQuad> quads;
  std::vector<Pose> trajectory;
  Intrinsics intrinsics;
  std::uint64_t seed = 0;
  Eigen::Vector3d light_dir{0.36, -0.48, 0.8};  // unit, y-down world
};

enum class ScenePreset { kPlaneWall, kBoxRoom, kCorridor };
ScenePreset parse_preset(const std::string& name);  // "plane-wall" | "box-room" | "corridor"

// Deterministic scene for the preset: plane-wall is a fronto-parallel
// checkerboard at 2 m with cameras spread along x; box-room is a closed box
// orbited from the inside; corridor is a long box traversed along z.
SyntheticScene make_preset_scene(ScenePreset preset, std::uint64_t seed, int view_count,
                                 int width, int height);

struct RenderedGroundTruth {
  Image color;  // H×W×3, Lambertian shading, no noise
  Image depth;  // H×W camera-space meters, 0 where no quad is hit
};

RenderedGroundTruth render_ground_truth(const SyntheticScene& scene, int view_index);

// Fraction of pixels whose ray hits any quad.
double scene_coverage(const SyntheticScene& scene, int view_index);

// Writes images/, depths/ (16-bit millimeters), poses/, intrinsics.txt.
// Rejects views covering less than half the frame.
void write_scene(const SyntheticScene& scene, const std::filesystem::path& dir);

// make_preset_scene + write_scene. Requires view_count >= 2 and dimensions
// divisible by 4.
void generate_scene(ScenePreset preset, std::uint64_t seed, int view_count, int width,
                    int height, const std::filesystem::path& dir);

}  // namespace splatfuse
