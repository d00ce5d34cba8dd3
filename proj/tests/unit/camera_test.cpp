// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/camera.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "test_util.hpp"

using namespace splatfuse;

namespace {

Pose rotated_z(double angle, const Eigen::Vector3d& t = Eigen::Vector3d::Zero()) {
  Pose pose;
  pose.rotation = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  pose.translation = t;
  return pose;
}

}  // namespace

TEST_CASE("project: identity pose pinhole") {
  const Intrinsics intr = testutil::simple_intrinsics(100, 100, 100.0);
  const Pose pose;

  const PixelProjection center = project(intr, pose, {0.0, 0.0, 2.0});
  CHECK(center.in_front);
  CHECK(center.u == doctest::Approx(50.0));
  CHECK(center.v == doctest::Approx(50.0));
  CHECK(center.depth == doctest::Approx(2.0));

  const PixelProjection off = project(intr, pose, {1.0, 0.0, 2.0});
  CHECK(off.u == doctest::Approx(100.0));
  CHECK(off.v == doctest::Approx(50.0));
}

TEST_CASE("project: points at or behind the camera are flagged") {
  const Intrinsics intr = testutil::simple_intrinsics(100, 100, 100.0);
  const PixelProjection behind = project(intr, Pose{}, {0.0, 0.0, -1.0});
  CHECK_FALSE(behind.in_front);
  CHECK(behind.depth == doctest::Approx(-1.0));
  CHECK_FALSE(project(intr, Pose{}, {0.5, 0.5, 0.0}).in_front);
}

TEST_CASE("unproject inverts project and rejects nonpositive depth") {
  const Intrinsics intr = testutil::simple_intrinsics(100, 100, 100.0);
  const Pose pose;
  CHECK((unproject(intr, pose, 50.0, 50.0, 2.0) - Eigen::Vector3d(0, 0, 2)).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(unproject(intr, pose, 50.0, 50.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(unproject(intr, pose, 50.0, 50.0, -2.0), std::invalid_argument);
}

TEST_CASE("project/unproject round trip under random poses") {
  const Intrinsics intr = testutil::simple_intrinsics(128, 96, 90.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Pose pose;
    pose.rotation =
        Eigen::Quaterniond(unit(rng), unit(rng), unit(rng), unit(rng)).normalized()
            .toRotationMatrix();
    pose.translation = {unit(rng), unit(rng), unit(rng)};
    const double u = 64.0 + 50.0 * unit(rng);
    const double v = 48.0 + 40.0 * unit(rng);
    const double d = 1.5 + unit(rng);
    const Eigen::Vector3d world = unproject(intr, pose, u, v, d);
    const PixelProjection p = project(intr, pose, world);
    REQUIRE(p.in_front);
    CHECK(p.u == doctest::Approx(u).epsilon(1e-9));
    CHECK(p.v == doctest::Approx(v).epsilon(1e-9));
    CHECK(p.depth == doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("relative_transform maps src camera coordinates into dst") {
  Pose src;  // identity
  Pose dst;
  dst.translation = {1.0, 0.0, 0.0};
  const RigidTransform rel = relative_transform(src, dst);
  // The src origin sits one meter to dst's left.
  CHECK((rel.apply(Eigen::Vector3d::Zero()) - Eigen::Vector3d(-1, 0, 0)).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));

  const Pose a = rotated_z(0.3, {0.2, -0.1, 0.4});
  const Pose b = rotated_z(-0.7, {-1.0, 0.5, 0.0});
  const Eigen::Vector3d p_a(0.3, 0.8, 1.7);
  const Eigen::Vector3d world = a.rotation * p_a + a.translation;
  const Eigen::Vector3d p_b = b.rotation.transpose() * (world - b.translation);
  CHECK((relative_transform(a, b).apply(p_a) - p_b).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rotation_angle") {
  const Eigen::Matrix3d eye = Eigen::Matrix3d::Identity();
  CHECK(rotation_angle(eye, eye) == doctest::Approx(0.0));
  const Eigen::Matrix3d half_turn =
      Eigen::AngleAxisd(std::numbers::pi / 2, Eigen::Vector3d::UnitY()).toRotationMatrix();
  CHECK(rotation_angle(eye, half_turn) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("select_nearby_views: translation ordering and ties") {
  std::vector<Pose> poses(4);
  for (int i = 0; i < 4; ++i) poses[i].translation = {static_cast<double>(i), 0.0, 0.0};

  CHECK(select_nearby_views(poses, 0, 2) == std::vector<int>{1, 2});
  // Views 0 and 2 are equidistant from 1; the tie resolves to the lower index.
  CHECK(select_nearby_views(poses, 1, 3) == std::vector<int>{0, 2, 3});
  CHECK_THROWS_AS(select_nearby_views(poses, 0, 4), std::invalid_argument);
}

TEST_CASE("select_nearby_views: rotation term breaks translation ties") {
  // Views 1 and 2 sit at the same distance from 0, but 2 is rotated a full
  // radian: score 1 + 0.5*1 = 1.5 versus 1 for the aligned view.
  std::vector<Pose> poses(3);
  poses[1].translation = {1.0, 0.0, 0.0};
  poses[2] = rotated_z(1.0, {-1.0, 0.0, 0.0});
  CHECK(select_nearby_views(poses, 0, 2) == std::vector<int>{1, 2});
  // With lambda = 0 the rotation is ignored and the tie falls to the index.
  CHECK(select_nearby_views(poses, 0, 2, 0.0) == std::vector<int>{1, 2});
  // A large lambda cannot help view 2 overtake, but it can reorder a case
  // where the rotated view is nearer in translation.
  poses[2].translation = {-0.9, 0.0, 0.0};
  CHECK(select_nearby_views(poses, 0, 1, 0.0) == std::vector<int>{2});
  CHECK(select_nearby_views(poses, 0, 1, 0.5) == std::vector<int>{1});
}

TEST_CASE("round_half_up") {
  CHECK(round_half_up(-0.5) == 0);
  CHECK(round_half_up(0.5) == 1);
  CHECK(round_half_up(2.5) == 3);
  CHECK(round_half_up(-1.5) == -1);
  CHECK(round_half_up(1.49) == 1);
}

TEST_CASE("Intrinsics::scaled divides all parameters") {
  const Intrinsics intr = testutil::simple_intrinsics(128, 96, 90.0);
  const Intrinsics q = intr.scaled(4);
  CHECK(q.fx == doctest::Approx(22.5));
  CHECK(q.cx == doctest::Approx(16.0));
  CHECK(q.width == 32);
  CHECK(q.height == 24);
  CHECK_THROWS_AS(intr.scaled(5), std::invalid_argument);
  CHECK_THROWS_AS(intr.scaled(0), std::invalid_argument);
}

TEST_CASE("validation rejects malformed cameras") {
  Intrinsics intr = testutil::simple_intrinsics(64, 48, 50.0);
  CHECK_NOTHROW(intr.validate());
  intr.fx = 0.0;
  CHECK_THROWS_AS(intr.validate(), std::invalid_argument);

  Pose pose;
  pose.rotation(0, 0) = 2.0;
  CHECK_THROWS_AS(pose.validate(), std::invalid_argument);

  Eigen::Matrix3d reflection = Eigen::Matrix3d::Identity();
  reflection(2, 2) = -1.0;
  CHECK_THROWS_AS(orthonormalized(reflection, 1e-3), std::invalid_argument);

  // Mild drift is projected back onto SO(3).
  Eigen::Matrix3d drifted = rotated_z(0.4).rotation;
  drifted(0, 1) += 5e-4;
  const Eigen::Matrix3d fixed = orthonormalized(drifted, 1e-2);
  CHECK((fixed.transpose() * fixed - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <
        1e-12);
}
