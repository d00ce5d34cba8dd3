// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/cost_volume.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "test_util.hpp"

using namespace splatfuse;

namespace {

FeatureMap constant_features(int w, int h, int channels, float value) {
  FeatureMap fm;
  fm.data = Image(w, h, channels, value);
  return fm;
}

// One warped map per plane, all valid, sharing the same descriptor image.
std::vector<WarpedFeatureMap> warped_stack(const FeatureMap& fm, int planes, bool valid = true) {
  WarpedFeatureMap w;
  w.features = fm;
  w.validity.assign(fm.data.pixel_count(), valid ? 1 : 0);
  return std::vector<WarpedFeatureMap>(planes, w);
}

DepthCandidates candidates_1x1(const std::vector<float>& logits) {
  DepthCandidates c;
  c.plane_count = static_cast<int>(logits.size());
  c.height = 1;
  c.width = 1;
  c.logits = logits;
  return c;
}

}  // namespace

TEST_CASE("build_depth_planes spans the range uniformly") {
  const DepthPlaneSet planes = build_depth_planes(0.5, 15.0, 128);
  CHECK(planes.count() == 128);
  CHECK(planes.depths.front() == doctest::Approx(0.5));
  CHECK(planes.depths.back() == doctest::Approx(15.0));
  CHECK(planes.spacing() == doctest::Approx(14.5 / 127.0));
  CHECK(planes.depths[1] - planes.depths[0] == doctest::Approx(planes.spacing()));

  const DepthPlaneSet two = build_depth_planes(1.0, 3.0, 2);
  CHECK(two.depths == std::vector<double>{1.0, 3.0});
  const DepthPlaneSet three = build_depth_planes(1.0, 3.0, 3);
  CHECK(three.depths[1] == doctest::Approx(2.0));

  CHECK_THROWS_AS(build_depth_planes(1.0, 3.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_depth_planes(0.0, 3.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_depth_planes(3.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("build_cost_volume: cosine of identical descriptors is 1") {
  const FeatureMap target = constant_features(2, 2, kMinMatchingDim, 0.3f);
  const DepthPlaneSet planes = build_depth_planes(1.0, 3.0, 2);
  const CostVolume volume = build_cost_volume(target, planes, {warped_stack(target, 2)});
  for (int k = 0; k < 2; ++k)
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x) CHECK(volume.at(k, y, x) == doctest::Approx(1.0));
  for (int v : volume.validity) CHECK(v == 1);
}

TEST_CASE("build_cost_volume: mean over views, orthogonal descriptors score 0") {
  FeatureMap target = constant_features(1, 1, kMinMatchingDim, 0.0f);
  target.data.at(0, 0, 0) = 1.0f;
  FeatureMap orthogonal = constant_features(1, 1, kMinMatchingDim, 0.0f);
  orthogonal.data.at(0, 0, 1) = 1.0f;

  const DepthPlaneSet planes = build_depth_planes(1.0, 3.0, 2);
  const CostVolume volume = build_cost_volume(
      target, planes, {warped_stack(target, 2), warped_stack(orthogonal, 2)});
  CHECK(volume.at(0, 0, 0) == doctest::Approx(0.5));  // mean of cos 1 and cos 0
  CHECK(volume.validity[0] == 2);
}

TEST_CASE("build_cost_volume: invalid and zero samples") {
  FeatureMap target = constant_features(1, 1, kMinMatchingDim, 0.0f);
  target.data.at(0, 0, 0) = 1.0f;

  const DepthPlaneSet planes = build_depth_planes(1.0, 3.0, 2);
  // One valid identical view plus one fully invalid view: the invalid view is
  // excluded from the mean, not averaged in as zero.
  const CostVolume mixed = build_cost_volume(
      target, planes, {warped_stack(target, 2), warped_stack(target, 2, false)});
  CHECK(mixed.at(0, 0, 0) == doctest::Approx(1.0));
  CHECK(mixed.validity[0] == 1);

  // No valid view at all: uniform zero cost, validity count 0.
  const CostVolume none = build_cost_volume(target, planes, {warped_stack(target, 2, false)});
  CHECK(none.at(1, 0, 0) == doctest::Approx(0.0));
  CHECK(none.validity[0] == 0);

  // A zero descriptor has no direction; the cosine is defined as 0.
  const FeatureMap zeros = constant_features(1, 1, kMinMatchingDim, 0.0f);
  const CostVolume z = build_cost_volume(target, planes, {warped_stack(zeros, 2)});
  CHECK(z.at(0, 0, 0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(build_cost_volume(target, planes, {}), std::invalid_argument);
  CHECK_THROWS_AS(build_cost_volume(target, planes, {warped_stack(target, 1)}),
                  std::invalid_argument);
}

TEST_CASE("cost values stay within [-1, 1] on random descriptors") {
  FeatureMap target;
  target.data = testutil::random_image(6, 4, kMinMatchingDim, 21);
  FeatureMap other;
  other.data = testutil::random_image(6, 4, kMinMatchingDim, 22);
  for (float& v : other.data.data) v = 2.0f * v - 1.0f;

  const DepthPlaneSet planes = build_depth_planes(1.0, 3.0, 3);
  const CostVolume volume = build_cost_volume(target, planes, {warped_stack(other, 3)});
  for (float c : volume.data) {
    CHECK(c >= -1.0f - 1e-6f);
    CHECK(c <= 1.0f + 1e-6f);
  }
}

TEST_CASE("refine_cost_volume: zero iterations and constant slices are no-ops") {
  CostVolume volume;
  volume.plane_count = 2;
  volume.height = 4;
  volume.width = 4;
  volume.planes = build_depth_planes(1.0, 3.0, 2);
  volume.validity.assign(16, 1);
  volume.data.assign(2 * 16, 0.0f);
  for (int i = 0; i < 16; ++i) volume.data[i] = static_cast<float>(i) / 16.0f;
  for (int i = 0; i < 16; ++i) volume.data[16 + i] = 0.625f;

  const CameraView guide{testutil::random_image(16, 16, 3, 3),
                         testutil::simple_intrinsics(16, 16, 20.0), Pose{}, 0};
  const CostVolume zero_it = refine_cost_volume(volume, guide, 0);
  CHECK(zero_it.data == volume.data);

  const CostVolume refined = refine_cost_volume(volume, guide, 2);
  // The constant slice is preserved exactly by the normalized filter.
  for (int i = 0; i < 16; ++i) CHECK(refined.data[16 + i] == doctest::Approx(0.625));

  CHECK_THROWS_AS(refine_cost_volume(volume, guide, -1), std::invalid_argument);
  CHECK_THROWS_AS(refine_cost_volume(volume, guide, 2, 0.0), std::invalid_argument);
}

TEST_CASE("refine_cost_volume: uniform guide spreads a spike mass-preservingly") {
  CostVolume volume;
  volume.plane_count = 1;
  volume.height = 16;
  volume.width = 16;
  volume.planes = build_depth_planes(1.0, 3.0, 2);
  volume.planes.depths.resize(1);
  volume.plane_count = 1;
  volume.validity.assign(256, 1);
  volume.data.assign(256, 0.0f);
  volume.at(0, 8, 8) = 1.0f;

  const CameraView guide = testutil::flat_view(64, 64, 70.0, 0.5f);
  const CostVolume refined = refine_cost_volume(volume, guide, 1);
  // With a flat guide the kernel is a plain 5x5 box: the spike becomes 1/25
  // at each neighbor and the slice sum is conserved.
  CHECK(refined.at(0, 8, 8) == doctest::Approx(1.0 / 25.0));
  CHECK(refined.at(0, 6, 10) == doctest::Approx(1.0 / 25.0));
  CHECK(refined.at(0, 5, 8) == doctest::Approx(0.0));
  double sum = 0.0;
  for (float v : refined.data) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("refine_cost_volume: guidance blocks smoothing across strong edges") {
  CostVolume volume;
  volume.plane_count = 1;
  volume.height = 4;
  volume.width = 8;
  volume.planes = build_depth_planes(1.0, 3.0, 2);
  volume.planes.depths.resize(1);
  volume.validity.assign(32, 1);
  volume.data.assign(32, 0.0f);
  for (int y = 0; y < 4; ++y)
    for (int x = 4; x < 8; ++x) volume.at(0, y, x) = 1.0f;

  // Full-resolution guide with the same step: luma differs by 1 across the
  // boundary, and exp(-1/(2*0.05^2)) is far below double precision.
  CameraView guide = testutil::flat_view(32, 16, 40.0, 0.0f);
  for (int y = 0; y < 16; ++y)
    for (int x = 16; x < 32; ++x)
      for (int c = 0; c < 3; ++c) guide.image.at(y, x, c) = 1.0f;

  const CostVolume refined = refine_cost_volume(volume, guide, 3);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 8; ++x) {
      CHECK(refined.at(0, y, x) == doctest::Approx(x < 4 ? 0.0 : 1.0));
    }
  }
}

TEST_CASE("upsample_candidates: quarter knots are exact, interiors linear") {
  CostVolume volume;
  volume.plane_count = 2;
  volume.height = 2;
  volume.width = 4;
  volume.planes = build_depth_planes(1.0, 3.0, 2);
  volume.validity.assign(8, 1);
  volume.data.assign(16, 0.0f);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 4; ++x) volume.at(0, y, x) = static_cast<float>(x);

  const DepthCandidates up = upsample_candidates(volume, 8, 16);
  CHECK(up.plane_count == 2);
  CHECK(up.height == 8);
  CHECK(up.width == 16);
  for (int x = 0; x < 4; ++x) CHECK(up.at(0, 0, 4 * x) == doctest::Approx(x));
  CHECK(up.at(0, 3, 6) == doctest::Approx(1.5));
  CHECK(up.at(0, 0, 14) == doctest::Approx(3.0));  // clamped past the last knot
  CHECK(up.at(1, 5, 9) == doctest::Approx(0.0));

  CHECK_THROWS_AS(upsample_candidates(volume, 8, 12), std::invalid_argument);
}

TEST_CASE("soft_argmax_depth: uniform, weighted, and saturated readouts") {
  const DepthPlaneSet three = build_depth_planes(1.0, 3.0, 3);
  const Image uniform = soft_argmax_depth(candidates_1x1({0.0f, 0.0f, 0.0f}), three, 1.0);
  CHECK(uniform.at(0, 0) == doctest::Approx(2.0));

  const DepthPlaneSet two = build_depth_planes(1.0, 3.0, 2);
  const float ln3 = std::log(3.0f);
  // softmax(0, ln 3) = (0.25, 0.75) at temperature 1.
  const Image weighted = soft_argmax_depth(candidates_1x1({0.0f, ln3}), two, 1.0);
  CHECK(weighted.at(0, 0) == doctest::Approx(2.5));

  // A dominant logit drives the readout to that plane's depth.
  const Image saturated = soft_argmax_depth(candidates_1x1({1e6f, 0.0f}), two, 1.0);
  CHECK(saturated.at(0, 0) == doctest::Approx(1.0).epsilon(1e-9));

  // Temperature rescales logits: (0, ln 3) at tau = 0.5 acts like (0, 2 ln 3).
  const Image sharp = soft_argmax_depth(candidates_1x1({0.0f, ln3}), two, 0.5);
  CHECK(sharp.at(0, 0) == doctest::Approx(1.0 + 2.0 * 0.9));

  CHECK_THROWS_AS(soft_argmax_depth(candidates_1x1({0.0f, 0.0f}), two, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(soft_argmax_depth(candidates_1x1({0.0f, 0.0f}), three, 1.0),
                  std::invalid_argument);
}
