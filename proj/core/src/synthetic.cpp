// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "splatfuse/io/dataset.hpp"
#include "splatfuse/io/png_io.hpp"
#include "splatfuse/parallel.hpp"

namespace splatfuse {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double lattice_value(std::int64_t x, std::int64_t y, std::uint64_t salt) {
  const std::uint64_t h = splitmix64(static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull ^
                                     static_cast<std::uint64_t>(y) * 0xC2B2AE3D27D4EB4Full ^ salt);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Smoothly interpolated lattice noise in [0,1].
double value_noise(double u, double v, std::uint64_t salt) {
  const double fu = std::floor(u), fv = std::floor(v);
  const auto iu = static_cast<std::int64_t>(fu), iv = static_cast<std::int64_t>(fv);
  const double tu = smoothstep(u - fu), tv = smoothstep(v - fv);
  const double a = lattice_value(iu, iv, salt), b = lattice_value(iu + 1, iv, salt);
  const double c = lattice_value(iu, iv + 1, salt), d = lattice_value(iu + 1, iv + 1, salt);
  return (a * (1.0 - tu) + b * tu) * (1.0 - tv) + (c * (1.0 - tu) + d * tu) * tv;
}

double fbm(double u, double v, std::uint64_t salt) {
  return 0.65 * value_noise(u, v, salt) + 0.35 * value_noise(2.0 * u + 17.3, 2.0 * v - 9.1, salt ^ 0xA5A5A5A5ull);
}

Eigen::Vector3d albedo(const TexturedQuad& quad, int quad_index, double u, double v,
                       std::uint64_t seed) {
  const std::uint64_t salt = splitmix64(seed ^ (static_cast<std::uint64_t>(quad_index) << 32));
  if (quad.texture.kind == QuadTexture::Kind::kChecker) {
    const double s = quad.texture.scale;
    const auto parity = (static_cast<std::int64_t>(std::floor(u / s)) +
                         static_cast<std::int64_t>(std::floor(v / s))) & 1;
    const Eigen::Vector3d base = parity ? quad.texture.color_a : quad.texture.color_b;
    // Coarse incommensurate modulation keeps the pattern aperiodic so plane
    // sweeps cannot lock onto a shifted repeat.
    const double m = 0.8 + 0.2 * fbm(u / (3.7 * s), v / (3.7 * s), salt);
    return base * m;
  }
  const double n = fbm(u / quad.texture.scale, v / quad.texture.scale, salt);
  return quad.texture.color_a + n * (quad.texture.color_b - quad.texture.color_a);
}

struct Hit {
  double s = 0.0;
  int quad = -1;
};

Hit trace(const SyntheticScene& scene, const Eigen::Vector3d& origin,
          const Eigen::Vector3d& dir) {
  Hit best;
  for (int q = 0; q < static_cast<int>(scene.quads.size()); ++q) {
    const TexturedQuad& quad = scene.quads[q];
    const double denom = dir[quad.axis];
    if (std::abs(denom) < 1e-12) continue;
    const double s = (quad.offset - origin[quad.axis]) / denom;
    if (s <= 1e-9) continue;
    const Eigen::Vector3d p = origin + s * dir;
    const int ua = (quad.axis + 1) % 3, va = (quad.axis + 2) % 3;
    if (p[ua] < quad.min_u || p[ua] > quad.max_u || p[va] < quad.min_v || p[va] > quad.max_v) {
      continue;
    }
    if (best.quad < 0 || s < best.s) best = {s, q};
  }
  return best;
}

Pose yaw_pose(double angle, const Eigen::Vector3d& position, double pitch = 0.0) {
  Eigen::Matrix3d yaw;
  yaw << std::cos(angle), 0.0, std::sin(angle), 0.0, 1.0, 0.0, -std::sin(angle), 0.0,
      std::cos(angle);
  Eigen::Matrix3d tilt;
  const double c = std::cos(pitch), s = std::sin(pitch);
  tilt << 1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c;
  Pose pose;
  pose.rotation = yaw * tilt;
  pose.translation = position;
  return pose;
}

Intrinsics default_intrinsics(int width, int height, double focal_factor) {
  Intrinsics intr;
  intr.fx = intr.fy = focal_factor * width;
  intr.cx = (width - 1) / 2.0;
  intr.cy = (height - 1) / 2.0;
  intr.width = width;
  intr.height = height;
  return intr;
}

}  // namespace

ScenePreset parse_preset(const std::string& name) {
  if (name == "plane-wall") return ScenePreset::kPlaneWall;
  if (name == "box-room") return ScenePreset::kBoxRoom;
  if (name == "corridor") return ScenePreset::kCorridor;
  throw std::invalid_argument("unknown preset: " + name);
}

SyntheticScene make_preset_scene(ScenePreset preset, std::uint64_t seed, int view_count,
                                 int width, int height) {
  if (view_count < 1) throw std::invalid_argument("make_preset_scene: need at least one view");
  SyntheticScene scene;
  scene.seed = seed;
  // The wall pair models a narrow stereo rig; the room sweeps use a wide lens
  // so consecutive views keep generous overlap.
  scene.intrinsics = default_intrinsics(
      width, height, preset == ScenePreset::kPlaneWall ? 0.6 : 0.45);
  scene.light_dir.normalize();

  switch (preset) {
    case ScenePreset::kPlaneWall: {
      TexturedQuad wall;
      wall.axis = 2;
      wall.offset = 2.0;
      wall.min_u = -8.0;
      wall.max_u = 8.0;
      wall.min_v = -8.0;
      wall.max_v = 8.0;
      wall.texture = {QuadTexture::Kind::kChecker, 0.4, {0.9, 0.85, 0.8}, {0.15, 0.2, 0.3}};
      scene.quads.push_back(wall);
      const double baseline = 1.25;
      for (int i = 0; i < view_count; ++i) {
        Pose pose;
        pose.translation = {(i - (view_count - 1) / 2.0) * baseline, 0.0, 0.0};
        scene.trajectory.push_back(pose);
      }
      break;
    }
    case ScenePreset::kBoxRoom: {
      const double hx = 2.5, hy = 1.2, hz = 2.5;
      const auto box_quad = [](int axis, double offset, double hu, double hv, QuadTexture tex) {
        TexturedQuad q;
        q.axis = axis;
        q.offset = offset;
        q.min_u = -hu;
        q.max_u = hu;
        q.min_v = -hv;
        q.max_v = hv;
        q.texture = tex;
        return q;
      };
      // Walls get checkered patterns for sharp matching texture; floor and
      // ceiling are smooth noise.
      scene.quads = {
          box_quad(0, -hx, hy, hz, {QuadTexture::Kind::kChecker, 0.4, {0.85, 0.55, 0.45}, {0.3, 0.15, 0.1}}),
          box_quad(0, hx, hy, hz, {QuadTexture::Kind::kChecker, 0.4, {0.5, 0.7, 0.85}, {0.1, 0.2, 0.35}}),
          box_quad(2, -hz, hx, hy, {QuadTexture::Kind::kChecker, 0.4, {0.8, 0.8, 0.5}, {0.3, 0.3, 0.12}}),
          box_quad(2, hz, hx, hy, {QuadTexture::Kind::kChecker, 0.4, {0.6, 0.85, 0.6}, {0.15, 0.35, 0.15}}),
          box_quad(1, -hy, hz, hx, {QuadTexture::Kind::kNoise, 0.6, {0.85, 0.85, 0.9}, {0.55, 0.55, 0.65}}),
          box_quad(1, hy, hz, hx, {QuadTexture::Kind::kNoise, 0.5, {0.5, 0.4, 0.32}, {0.25, 0.18, 0.14}}),
      };
      // Outward-facing ring with a slight downward tilt, as a handheld sweep
      // of the room would give.
      const double radius = 0.8;
      const double pitch = -15.0 * std::numbers::pi / 180.0;
      for (int i = 0; i < view_count; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / view_count;
        scene.trajectory.push_back(
            yaw_pose(angle, {radius * std::sin(angle), 0.0, radius * std::cos(angle)}, pitch));
      }
      break;
    }
    case ScenePreset::kCorridor: {
      const double hx = 1.2, hy = 1.2, z0 = -1.0, z1 = 14.0;
      const auto wall = [&](int axis, double offset, QuadTexture tex) {
        TexturedQuad q;
        q.axis = axis;
        q.offset = offset;
        q.texture = tex;
        if (axis == 0) {  // u=y, v=z
          q.min_u = -hy; q.max_u = hy; q.min_v = z0; q.max_v = z1;
        } else if (axis == 1) {  // u=z, v=x
          q.min_u = z0; q.max_u = z1; q.min_v = -hx; q.max_v = hx;
        } else {  // u=x, v=y
          q.min_u = -hx; q.max_u = hx; q.min_v = -hy; q.max_v = hy;
        }
        return q;
      };
      scene.quads = {
          wall(0, -hx, {QuadTexture::Kind::kNoise, 0.45, {0.8, 0.5, 0.4}, {0.4, 0.2, 0.15}}),
          wall(0, hx, {QuadTexture::Kind::kNoise, 0.45, {0.45, 0.6, 0.8}, {0.18, 0.28, 0.45}}),
          wall(1, -hy, {QuadTexture::Kind::kNoise, 0.6, {0.85, 0.85, 0.8}, {0.6, 0.6, 0.55}}),
          wall(1, hy, {QuadTexture::Kind::kNoise, 0.5, {0.55, 0.45, 0.35}, {0.3, 0.22, 0.16}}),
          wall(2, z1, {QuadTexture::Kind::kNoise, 0.5, {0.75, 0.7, 0.5}, {0.45, 0.4, 0.25}}),
          wall(2, z0, {QuadTexture::Kind::kNoise, 0.5, {0.6, 0.6, 0.6}, {0.3, 0.3, 0.3}}),
      };
      for (int i = 0; i < view_count; ++i) {
        Pose pose;
        pose.translation = {0.0, 0.0, 0.4 * i};
        scene.trajectory.push_back(pose);
      }
      break;
    }
  }
  return scene;
}

RenderedGroundTruth render_ground_truth(const SyntheticScene& scene, int view_index) {
  const Pose& pose = scene.trajectory.at(view_index);
  const Intrinsics& intr = scene.intrinsics;
  RenderedGroundTruth out{Image(intr.width, intr.height, 3), Image(intr.width, intr.height, 1)};
  parallel_for(0, intr.height, [&](std::int64_t y) {
    for (int x = 0; x < intr.width; ++x) {
      const Eigen::Vector3d dir_cam((x - intr.cx) / intr.fx, (y - intr.cy) / intr.fy, 1.0);
      const Eigen::Vector3d dir = pose.rotation * dir_cam;
      const Hit hit = trace(scene, pose.translation, dir);
      if (hit.quad < 0) continue;
      const TexturedQuad& quad = scene.quads[hit.quad];
      const Eigen::Vector3d p = pose.translation + hit.s * dir;
      const int ua = (quad.axis + 1) % 3, va = (quad.axis + 2) % 3;
      Eigen::Vector3d normal = Eigen::Vector3d::Unit(quad.axis);
      if (normal.dot(dir) > 0.0) normal = -normal;  // face the camera
      const double diffuse = 0.35 + 0.65 * std::max(0.0, normal.dot(scene.light_dir));
      const Eigen::Vector3d rgb =
          albedo(quad, hit.quad, p[ua], p[va], scene.seed) * diffuse;
      for (int c = 0; c < 3; ++c) {
        out.color.at(static_cast<int>(y), x, c) = static_cast<float>(std::clamp(rgb[c], 0.0, 1.0));
      }
      // dir_cam.z == 1, so the ray parameter is the camera-space depth.
      out.depth.at(static_cast<int>(y), x) = static_cast<float>(hit.s);
    }
  });
  return out;
}

double scene_coverage(const SyntheticScene& scene, int view_index) {
  const RenderedGroundTruth gt = render_ground_truth(scene, view_index);
  std::size_t hits = 0;
  for (float d : gt.depth.data) hits += d > 0.0f;
  return static_cast<double>(hits) / gt.depth.data.size();
}

void write_scene(const SyntheticScene& scene, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "depths");
  fs::create_directories(dir / "poses");
  save_intrinsics(scene.intrinsics, dir / "intrinsics.txt");
  for (int i = 0; i < static_cast<int>(scene.trajectory.size()); ++i) {
    const RenderedGroundTruth gt = render_ground_truth(scene, i);
    std::size_t hits = 0;
    for (float d : gt.depth.data) hits += d > 0.0f;
    if (hits * 2 < gt.depth.data.size()) {
      throw std::runtime_error("write_scene: view " + std::to_string(i) +
                               " covers less than half the frame");
    }
    write_png_color(dir / "images" / view_file_name(i, ".png"), gt.color);
    write_png_depth_mm(dir / "depths" / view_file_name(i, ".png"), gt.depth);
    save_pose(scene.trajectory[i], dir / "poses" / view_file_name(i, ".txt"));
  }
}

void generate_scene(ScenePreset preset, std::uint64_t seed, int view_count, int width,
                    int height, const std::filesystem::path& dir) {
  if (view_count < 2) throw std::invalid_argument("generate_scene: need at least two views");
  if (width % 4 != 0 || height % 4 != 0) {
    throw std::invalid_argument("generate_scene: resolution must be divisible by 4");
  }
  write_scene(make_preset_scene(preset, seed, view_count, width, height), dir);
}

}  // namespace splatfuse
