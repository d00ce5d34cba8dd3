// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/camera.hpp"

#include <algorithm>
#include <stdexcept>

namespace splatfuse {

void Intrinsics::validate() const {
  if (fx <= 0.0 || fy <= 0.0) throw std::invalid_argument("Intrinsics: focal must be positive");
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("Intrinsics: dimensions must be positive");
  }
  if (cx <= 0.0 || cx >= width || cy <= 0.0 || cy >= height) {
    throw std::invalid_argument("Intrinsics: principal point outside the image");
  }
}

void CameraView::validate() const {
  intrinsics.validate();
  pose.validate();
  if (image.width != intrinsics.width || image.height != intrinsics.height ||
      image.channels != 3) {
    throw std::invalid_argument("CameraView: image shape disagrees with intrinsics");
  }
}

Intrinsics Intrinsics::scaled(int factor) const {
  if (factor <= 0) throw std::invalid_argument("Intrinsics::scaled: factor must be positive");
  if (width % factor != 0 || height % factor != 0) {
    throw std::invalid_argument("Intrinsics::scaled: dimensions not divisible by factor");
  }
  const double s = static_cast<double>(factor);
  return {fx / s, fy / s, cx / s, cy / s, width / factor, height / factor};
}

void Pose::validate() const {
  const double ortho_err =
      (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (ortho_err > 1e-6) {
    throw std::invalid_argument("Pose: rotation is not orthonormal");
  }
  if (rotation.determinant() < 0.0) {
    throw std::invalid_argument("Pose: rotation determinant must be +1");
  }
}

Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d& m, double tolerance) {
  const double orth_err =
      (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (orth_err > tolerance || m.determinant() <= 0.0) {
    throw std::invalid_argument("orthonormalized: matrix is not close to a rotation");
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

PixelProjection project(const Intrinsics& intrinsics, const Pose& pose,
                        const Eigen::Vector3d& world_point) {
  const Eigen::Vector3d cam =
      pose.rotation.transpose() * (world_point - pose.translation);
  PixelProjection p;
  p.depth = cam.z();
  if (cam.z() <= 0.0) return p;
  p.u = intrinsics.fx * cam.x() / cam.z() + intrinsics.cx;
  p.v = intrinsics.fy * cam.y() / cam.z() + intrinsics.cy;
  p.in_front = true;
  return p;
}

Eigen::Vector3d unproject(const Intrinsics& intrinsics, const Pose& pose, double u,
                          double v, double depth) {
  if (depth <= 0.0) throw std::invalid_argument("unproject: depth must be positive");
  const Eigen::Vector3d cam((u - intrinsics.cx) / intrinsics.fx * depth,
                            (v - intrinsics.cy) / intrinsics.fy * depth, depth);
  return pose.rotation * cam + pose.translation;
}

RigidTransform relative_transform(const Pose& src, const Pose& dst) {
  RigidTransform rel;
  rel.rotation = dst.rotation.transpose() * src.rotation;
  rel.translation = dst.rotation.transpose() * (src.translation - dst.translation);
  return rel;
}

double rotation_angle(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const double c = ((a.transpose() * b).trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

std::vector<int> select_nearby_views(const std::vector<Pose>& poses, int reference,
                                     int count, double lambda) {
  if (reference < 0 || reference >= static_cast<int>(poses.size())) {
    throw std::out_of_range("select_nearby_views: reference out of range");
  }
  if (count < 0 || count > static_cast<int>(poses.size()) - 1) {
    throw std::invalid_argument("select_nearby_views: count exceeds available views");
  }
  const Pose& ref = poses[reference];
  std::vector<std::pair<double, int>> scored;
  scored.reserve(poses.size() - 1);
  for (int i = 0; i < static_cast<int>(poses.size()); ++i) {
    if (i == reference) continue;
    const double score = (poses[i].translation - ref.translation).norm() +
                         lambda * rotation_angle(poses[i].rotation, ref.rotation);
    scored.emplace_back(score, i);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<int> selected(count);
  for (int i = 0; i < count; ++i) selected[i] = scored[i].second;
  return selected;
}

}  // namespace splatfuse
