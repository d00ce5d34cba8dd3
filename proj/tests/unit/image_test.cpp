// SPDX-License-Identifier: Apache-2.0
#include "splatfuse/image.hpp"

#include <doctest.h>

#include <array>

#include "test_util.hpp"

using namespace splatfuse;

TEST_CASE("luma averages channels") {
  Image rgb(2, 1, 3);
  rgb.at(0, 0, 0) = 0.3f;
  rgb.at(0, 0, 1) = 0.6f;
  rgb.at(0, 0, 2) = 0.9f;
  rgb.at(0, 1, 0) = rgb.at(0, 1, 1) = rgb.at(0, 1, 2) = 0.25f;
  const Image l = luma(rgb);
  CHECK(l.channels == 1);
  CHECK(l.at(0, 0) == doctest::Approx(0.6));
  CHECK(l.at(0, 1) == doctest::Approx(0.25));

  const Image gray = testutil::random_image(3, 2, 1, 5);
  CHECK(luma(gray).data == gray.data);
}

TEST_CASE("downsample_mean box-averages cells") {
  Image img(4, 2, 1);
  // Left 2x2 cell: 0,1,2,3 -> mean 1.5. Right cell: constant 4.
  img.at(0, 0) = 0.0f;
  img.at(0, 1) = 1.0f;
  img.at(1, 0) = 2.0f;
  img.at(1, 1) = 3.0f;
  for (int y = 0; y < 2; ++y)
    for (int x = 2; x < 4; ++x) img.at(y, x) = 4.0f;
  const Image down = downsample_mean(img, 2);
  CHECK(down.width == 2);
  CHECK(down.height == 1);
  CHECK(down.at(0, 0) == doctest::Approx(1.5));
  CHECK(down.at(0, 1) == doctest::Approx(4.0));
  CHECK_THROWS(downsample_mean(img, 3));
}

TEST_CASE("sample_bilinear: integer coordinates are exact, borders clamp") {
  const Image img = testutil::random_image(5, 4, 3, 17);
  std::array<float, 3> out{};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      sample_bilinear(img, x, y, out);
      for (int c = 0; c < 3; ++c) CHECK(out[c] == img.at(y, x, c));
    }
  }
  sample_bilinear(img, -3.0, -3.0, out);
  CHECK(out[0] == img.at(0, 0, 0));
  sample_bilinear(img, 100.0, 100.0, out);
  CHECK(out[2] == img.at(3, 4, 2));
  // Midpoint between two pixels is their average.
  sample_bilinear(img, 0.5, 0.0, out);
  CHECK(out[1] == doctest::Approx(0.5 * (img.at(0, 0, 1) + img.at(0, 1, 1))));
}

TEST_CASE("upsample_bilinear uses the corner-anchored mapping") {
  Image ramp(4, 1, 1);
  for (int x = 0; x < 4; ++x) ramp.at(0, x) = static_cast<float>(x);
  const Image up = upsample_bilinear(ramp, 16, 1);
  REQUIRE(up.width == 16);
  // x_src = x_dst * (4/16); knots at multiples of 4 reproduce the input,
  // interior samples are linear, and samples past the last knot clamp.
  for (int x = 0; x < 4; ++x) CHECK(up.at(0, 4 * x) == doctest::Approx(x));
  CHECK(up.at(0, 6) == doctest::Approx(1.5));
  CHECK(up.at(0, 13) == doctest::Approx(3.0));
  CHECK(up.at(0, 15) == doctest::Approx(3.0));
}

TEST_CASE("Image fill constructor and shape") {
  const Image img(3, 2, 2, 0.75f);
  CHECK(img.pixel_count() == 6);
  CHECK(img.data.size() == 12);
  for (float v : img.data) CHECK(v == 0.75f);
  CHECK(img.same_shape(Image(3, 2, 2)));
  CHECK_FALSE(img.same_shape(Image(2, 3, 2)));
}
