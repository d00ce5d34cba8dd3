// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/gaussians.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "test_util.hpp"

using namespace splatfuse;

namespace {

// Single-triplet set with the default latent layout.
TripletSet one_triplet(const Eigen::Vector3d& rgb, double weight, double source_depth) {
  TripletSet set;
  set.feature_dim = latent_dim(kMinMatchingDim);
  set.centers = {Eigen::Vector3d(0.3, -0.2, source_depth)};
  set.weights = {weight};
  set.features.assign(set.feature_dim, 0.0f);
  set.features[latent::kRed] = static_cast<float>(rgb.x());
  set.features[latent::kGreen] = static_cast<float>(rgb.y());
  set.features[latent::kBlue] = static_cast<float>(rgb.z());
  set.features[latent::kWeight] = static_cast<float>(weight);
  set.features[latent::kSourceDepth] = static_cast<float>(source_depth);
  set.tags = {{0, 0}};
  return set;
}

}  // namespace

TEST_CASE("decode_triplets: default decode reads the latent head") {
  const TripletSet set = one_triplet({1.0, 0.0, 0.0}, 0.9, 2.0);
  const Intrinsics intr = testutil::simple_intrinsics(100, 100, 100.0);
  const GaussianPrimitiveSet prims = decode_triplets(set, intr);

  REQUIRE(prims.size() == 1);
  CHECK(prims.sh_degree == 0);
  CHECK((prims.center(0) - set.centers[0]).norm() == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(prims.opacity(0) == doctest::Approx(0.9));
  // Isotropic footprint of one source pixel: kappa * d / fx = 2/100.
  const Eigen::Vector3d scale = prims.scale(0);
  CHECK(scale.x() == doctest::Approx(0.02));
  CHECK(scale.y() == doctest::Approx(0.02));
  CHECK(scale.z() == doctest::Approx(0.02));
  CHECK(prims.rotation(0).w() == doctest::Approx(1.0));
  CHECK(prims.rotation(0).x() == doctest::Approx(0.0));
  // DC coefficients invert the constant SH band: (c - 0.5) / Y00.
  CHECK(prims.sh[0] == doctest::Approx((1.0 - 0.5) / kShC0));
  CHECK(prims.sh[1] == doctest::Approx((0.0 - 0.5) / kShC0));
  CHECK_NOTHROW(prims.validate());
}

TEST_CASE("decode_triplets: kappa scales the footprint, opacity clamps") {
  const Intrinsics intr = testutil::simple_intrinsics(100, 100, 100.0);
  const GaussianPrimitiveSet wide = decode_triplets(one_triplet({0.5, 0.5, 0.5}, 0.9, 2.0),
                                                    intr, 2.0);
  CHECK(wide.scale(0).x() == doctest::Approx(0.04));

  const GaussianPrimitiveSet high = decode_triplets(one_triplet({0, 0, 0}, 3.0, 2.0), intr);
  CHECK(high.opacity(0) == doctest::Approx(0.99));
  const GaussianPrimitiveSet low =
      decode_triplets(one_triplet({0, 0, 0}, 1e-4, 2.0), intr);
  CHECK(low.opacity(0) == doctest::Approx(0.01));

  CHECK_THROWS_AS(decode_triplets(one_triplet({0, 0, 0}, 0.5, 2.0), intr, 0.0),
                  std::invalid_argument);
}

TEST_CASE("decode_triplets: one primitive per triplet") {
  TripletSet set;
  set.feature_dim = latent_dim(kMinMatchingDim);
  const int n = 37;
  for (int i = 0; i < n; ++i) {
    const TripletSet t = one_triplet({0.2, 0.4, 0.6}, 0.5, 1.0 + 0.1 * i);
    set.centers.push_back(t.centers[0]);
    set.weights.push_back(t.weights[0]);
    set.features.insert(set.features.end(), t.features.begin(), t.features.end());
    set.tags.push_back({0, i});
  }
  const Intrinsics intr = testutil::simple_intrinsics(64, 64, 50.0);
  CHECK(decode_triplets(set, intr).size() == n);
}

TEST_CASE("decode_triplets: loaded affine decoder") {
  // W = 0 makes the raw outputs equal b: softplus(0) scales, an unnormalized
  // identity quaternion, a zero opacity logit, and pass-through DC values.
  const int dim = latent_dim(kMinMatchingDim);
  DecoderParams params;
  params.W = Eigen::MatrixXf::Zero(11, dim);
  params.b = Eigen::VectorXf::Zero(11);
  params.b.segment(3, 4) << 2.0f, 0.0f, 0.0f, 0.0f;  // normalizes to identity
  params.b.segment(8, 3) << 0.3f, 0.4f, 0.5f;
  CHECK(params.sh_degree() == 0);
  CHECK_NOTHROW(params.validate(dim));

  const TripletSet set = one_triplet({1, 1, 1}, 0.7, 2.0);
  const Intrinsics intr = testutil::simple_intrinsics(100, 100, 100.0);
  const GaussianPrimitiveSet prims = decode_triplets(set, intr, 1.0, &params);
  CHECK(prims.scale(0).x() == doctest::Approx(std::log(2.0)));  // softplus(0)
  CHECK(prims.rotation(0).w() == doctest::Approx(1.0));
  CHECK(prims.opacity(0) == doctest::Approx(0.5));
  CHECK(prims.sh[0] == doctest::Approx(0.3));
  CHECK(prims.sh[2] == doctest::Approx(0.5));

  DecoderParams degree1;
  degree1.W = Eigen::MatrixXf::Zero(20, dim);
  degree1.b = Eigen::VectorXf::Zero(20);
  degree1.b[3] = 1.0f;
  CHECK(degree1.sh_degree() == 1);
  CHECK(decode_triplets(set, intr, 1.0, &degree1).sh_coeff_count() == 12);

  DecoderParams bad;
  bad.W = Eigen::MatrixXf::Zero(13, dim);
  bad.b = Eigen::VectorXf::Zero(13);
  CHECK_THROWS_AS(bad.sh_degree(), std::invalid_argument);
  DecoderParams mismatched = params;
  CHECK_THROWS_AS(mismatched.validate(dim + 2), std::invalid_argument);
}

TEST_CASE("covariance_from_scale_rotation: principal axes") {
  const Eigen::Matrix3d diag = covariance_from_scale_rotation(
      {1.0, 2.0, 3.0}, Eigen::Quaterniond::Identity());
  CHECK((diag - Eigen::Vector3d(1.0, 4.0, 9.0).asDiagonal().toDenseMatrix()).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));

  // A 90 degree turn about z swaps the x and y variances.
  const Eigen::Quaterniond qz(Eigen::AngleAxisd(std::numbers::pi / 2,
                                                Eigen::Vector3d::UnitZ()));
  const Eigen::Matrix3d turned = covariance_from_scale_rotation({1.0, 2.0, 1.0}, qz);
  CHECK(turned(0, 0) == doctest::Approx(4.0));
  CHECK(turned(1, 1) == doctest::Approx(1.0));
  CHECK(turned(2, 2) == doctest::Approx(1.0));
  CHECK(turned(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("covariance_from_scale_rotation: symmetric positive definite") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> s(0.05, 3.0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Quaterniond q =
        Eigen::Quaterniond(unit(rng), unit(rng), unit(rng), unit(rng)).normalized();
    const Eigen::Vector3d scale(s(rng), s(rng), s(rng));
    const Eigen::Matrix3d cov = covariance_from_scale_rotation(scale, q);
    CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::Vector3d eig = cov.selfadjointView<Eigen::Lower>().eigenvalues();
    CHECK(eig.minCoeff() > 0.0);
    // The eigenvalues are the squared scales.
    Eigen::Vector3d squared = scale.cwiseProduct(scale);
    std::sort(squared.data(), squared.data() + 3);
    CHECK((eig - squared).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-9));
  }

  CHECK_THROWS_AS(covariance_from_scale_rotation({0.0, 1.0, 1.0},
                                                 Eigen::Quaterniond::Identity()),
                  std::invalid_argument);
  const Eigen::Quaterniond long_q(2.0, 0.0, 0.0, 0.0);
  CHECK_THROWS_AS(covariance_from_scale_rotation({1.0, 1.0, 1.0}, long_q),
                  std::invalid_argument);
}

TEST_CASE("GaussianPrimitiveSet::validate") {
  GaussianPrimitiveSet prims;
  prims.sh_degree = 0;
  prims.centers = {0.0f, 0.0f, 1.0f};
  prims.log_scales = {-2.0f, -2.0f, -2.0f};
  prims.rotations = {1.0f, 0.0f, 0.0f, 0.0f};
  prims.opacity_logits = {0.0f};
  prims.sh = {0.1f, 0.2f, 0.3f};
  CHECK_NOTHROW(prims.validate());
  CHECK(prims.opacity(0) == doctest::Approx(0.5));

  GaussianPrimitiveSet bad_quat = prims;
  bad_quat.rotations[0] = 1.1f;
  CHECK_THROWS_AS(bad_quat.validate(), std::invalid_argument);

  GaussianPrimitiveSet bad_size = prims;
  bad_size.sh.pop_back();
  CHECK_THROWS_AS(bad_size.validate(), std::invalid_argument);
}
