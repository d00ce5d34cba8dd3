// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "splatfuse/io/dataset.hpp"
#include "splatfuse/io/png_io.hpp"
#include "test_util.hpp"

using namespace splatfuse;

TEST_CASE("parse_preset") {
  CHECK(parse_preset("plane-wall") == ScenePreset::kPlaneWall);
  CHECK(parse_preset("box-room") == ScenePreset::kBoxRoom);
  CHECK(parse_preset("corridor") == ScenePreset::kCorridor);
  CHECK_THROWS_AS(parse_preset("atrium"), std::invalid_argument);
}

TEST_CASE("make_preset_scene is deterministic in the seed") {
  const SyntheticScene a = make_preset_scene(ScenePreset::kBoxRoom, 9, 4, 64, 48);
  const SyntheticScene b = make_preset_scene(ScenePreset::kBoxRoom, 9, 4, 64, 48);
  REQUIRE(a.trajectory.size() == 4);
  for (int v = 0; v < 4; ++v) {
    CHECK((a.trajectory[v].rotation - b.trajectory[v].rotation).norm() == 0.0);
    CHECK((a.trajectory[v].translation - b.trajectory[v].translation).norm() == 0.0);
  }
  const RenderedGroundTruth ga = render_ground_truth(a, 1);
  const RenderedGroundTruth gb = render_ground_truth(b, 1);
  CHECK(ga.color.data == gb.color.data);
  CHECK(ga.depth.data == gb.depth.data);
  CHECK(a.light_dir.norm() == doctest::Approx(1.0));
}

TEST_CASE("plane-wall ground truth is a constant-depth front") {
  const SyntheticScene scene = make_preset_scene(ScenePreset::kPlaneWall, 3, 2, 64, 48);
  for (int v = 0; v < 2; ++v) {
    const RenderedGroundTruth gt = render_ground_truth(scene, v);
    for (float d : gt.depth.data) {
      // Fronto-parallel plane: camera-space z is the plane distance wherever
      // the wall is hit.
      if (d > 0.0f) CHECK(d == doctest::Approx(2.0));
    }
    CHECK(scene_coverage(scene, v) >= 0.5);
  }
}

TEST_CASE("ground-truth depth reprojects exactly between plane-wall views") {
  const SyntheticScene scene = make_preset_scene(ScenePreset::kPlaneWall, 3, 2, 64, 48);
  const RenderedGroundTruth gt0 = render_ground_truth(scene, 0);
  const RenderedGroundTruth gt1 = render_ground_truth(scene, 1);
  int checked = 0;
  for (int y = 4; y < 44; y += 8) {
    for (int x = 4; x < 60; x += 8) {
      const float d0 = gt0.depth.at(y, x);
      if (d0 <= 0.0f) continue;
      const Eigen::Vector3d world =
          unproject(scene.intrinsics, scene.trajectory[0], x, y, d0);
      const PixelProjection p = project(scene.intrinsics, scene.trajectory[1], world);
      if (!p.in_front || p.u < 0 || p.u > 63 || p.v < 0 || p.v > 47) continue;
      const float d1 = gt1.depth.at(static_cast<int>(std::lround(p.v)),
                                    static_cast<int>(std::lround(p.u)));
      if (d1 <= 0.0f) continue;
      CHECK(p.depth == doctest::Approx(d1).epsilon(1e-6));
      ++checked;
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("closed presets cover the whole frame") {
  const SyntheticScene room = make_preset_scene(ScenePreset::kBoxRoom, 1, 4, 64, 48);
  for (int v = 0; v < 4; ++v) CHECK(scene_coverage(room, v) == doctest::Approx(1.0));
  const SyntheticScene hall = make_preset_scene(ScenePreset::kCorridor, 1, 3, 64, 48);
  for (int v = 0; v < 3; ++v) CHECK(scene_coverage(hall, v) >= 0.5);
}

TEST_CASE("ground-truth colors are shaded into [0,1]") {
  const SyntheticScene scene = make_preset_scene(ScenePreset::kCorridor, 5, 2, 64, 48);
  const RenderedGroundTruth gt = render_ground_truth(scene, 0);
  float lo = 1.0f, hi = 0.0f;
  for (float v : gt.color.data) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo > 0.05f);  // textures actually vary
}

TEST_CASE("generate_scene writes a loadable dataset") {
  const testutil::TempDir dir("synth");
  generate_scene(ScenePreset::kPlaneWall, 11, 2, 64, 48, dir.path());

  namespace fs = std::filesystem;
  CHECK(fs::exists(dir / "intrinsics.txt"));
  CHECK(fs::exists(dir.path() / "images" / "000000.png"));
  CHECK(fs::exists(dir.path() / "images" / "000001.png"));
  CHECK(fs::exists(dir.path() / "poses" / "000001.txt"));
  CHECK(fs::exists(dir.path() / "depths" / "000000.png"));

  const SceneDataset dataset = load_scene(dir.path());
  CHECK(dataset.views.size() == 2);
  REQUIRE(dataset.has_depth());

  // The stored depth is the analytic one, up to millimeter quantization.
  const SyntheticScene scene = make_preset_scene(ScenePreset::kPlaneWall, 11, 2, 64, 48);
  const RenderedGroundTruth gt = render_ground_truth(scene, 0);
  const Image& reloaded = dataset.gt_depths[0];
  for (std::size_t i = 0; i < gt.depth.data.size(); ++i) {
    CHECK(std::abs(reloaded.data[i] - gt.depth.data[i]) <= 5.1e-4f);
  }
}

TEST_CASE("generate_scene validates its arguments") {
  const testutil::TempDir dir("synth_bad");
  CHECK_THROWS_AS(generate_scene(ScenePreset::kPlaneWall, 1, 1, 64, 48, dir.path()),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_scene(ScenePreset::kPlaneWall, 1, 2, 63, 48, dir.path()),
                  std::invalid_argument);
}
