// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "splatfuse/image.hpp"

namespace splatfuse {

// Pinhole intrinsics in pixels. Pixel (u, v) is sampled at continuous image
// coordinate (u, v); resolution changes keep that anchoring, so scaling by an
// integer factor divides all four parameters.
struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  // Throws std::invalid_argument on non-positive focals or dimensions.
  void validate() const;

  // Intrinsics of the same camera at 1/factor resolution. Requires the
  // dimensions to be divisible by factor.
  Intrinsics scaled(int factor) const;
};

// Camera-to-world rigid pose: X_world = rotation * X_camera + translation.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  // Throws std::invalid_argument unless rotation is orthonormal with
  // determinant +1 within 1e-6.
  void validate() const;

  Eigen::Vector3d camera_z_world() const { return rotation.col(2); }
};

// Projects an orthogonality-violating matrix onto SO(3) via SVD. Throws if the
// input deviates from a rotation by more than tolerance.
Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d& m, double tolerance);

// One posed input frame. The image is H×W×3 with values in [0,1].
struct CameraView {
  Image image;
  Intrinsics intrinsics;
  Pose pose;
  int index = -1;

  // Throws when the image shape disagrees with the intrinsics.
  void validate() const;
};

struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }
};

struct PixelProjection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;  // camera-space z
  bool in_front = false;
};

// World point -> pixel coordinate and camera-space depth. in_front is false
// when the point lies at or behind the camera plane (depth <= 0), in which
// case u and v are unspecified.
PixelProjection project(const Intrinsics& intrinsics, const Pose& pose,
                        const Eigen::Vector3d& world_point);

// Pixel (u, v) at camera-space depth -> world point. Throws on depth <= 0.
Eigen::Vector3d unproject(const Intrinsics& intrinsics, const Pose& pose, double u,
                          double v, double depth);

// Transform mapping src-camera coordinates into dst-camera coordinates.
RigidTransform relative_transform(const Pose& src, const Pose& dst);

// Geodesic angle in radians between two rotations.
double rotation_angle(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

// Indices of the count views closest to poses[reference], nearest first.
// Proximity score is |t_i - t_ref| + lambda * rotation_angle; ties resolve to
// the lower index. Throws when count exceeds the number of other views.
std::vector<int> select_nearby_views(const std::vector<Pose>& poses, int reference,
                                     int count, double lambda = 0.5);

// Half-up rounding used for pixel bucketing: round_half_up(-0.5) == 0.
inline int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace splatfuse
