#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "uwsynth/filters.hpp"

using namespace uwsynth;
using namespace uwsynth::filters;

TEST_CASE("Gaussian support reaches four sigma") {
  CHECK(gaussian_radius(1.0) == 4);
  CHECK(gaussian_radius(1.5) == 6);
  CHECK(gaussian_radius(7.0) == 28);
  CHECK(gaussian_radius(0.3) == 2);
}

TEST_CASE("Gaussian kernel equals the directly evaluated 2-D Gaussian") {
  for (double sigma : {0.8, 3.0, 4.0, 7.0}) {
    const Kernel k = gaussian_kernel(sigma);
    CHECK(k.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int dy = -k.radius; dy <= k.radius; dy += 3) {
      for (int dx = -k.radius; dx <= k.radius; dx += 2) {
        CHECK(k.at(dx, dy) ==
              doctest::Approx(testsupport::gaussian_weight(sigma, k.radius, dx, dy)).epsilon(1e-12));
        CHECK(k.at(dx, dy) == k.at(-dx, dy));
        CHECK(k.at(dx, dy) == k.at(dy, dx));
      }
    }
  }
  CHECK_THROWS_AS(gaussian_kernel(0.0), Error);
}

TEST_CASE("Laplacian stencil") {
  const Kernel five = laplacian_kernel(0.0);
  CHECK(five.at(0, 0) == -4.0);
  CHECK(five.at(1, 0) == 1.0);
  CHECK(five.at(1, 1) == 0.0);

  const Kernel k = laplacian_kernel(0.2);
  CHECK(k.at(0, 0) == doctest::Approx(-4.0 / 1.2));
  CHECK(k.at(0, 1) == doctest::Approx(4.0 / 1.2 * 0.8 / 4.0));
  CHECK(k.at(-1, -1) == doctest::Approx(4.0 / 1.2 * 0.2 / 4.0));
  CHECK(k.sum() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(laplacian_kernel(1.5), Error);
}

TEST_CASE("Laplacian of a quadratic is its constant curvature") {
  ImageF f(9, 9, 1);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 9; ++x) f.at(x, y) = 0.5 * (x * x + y * y);
  for (double alpha : {0.0, 0.2, 1.0}) {
    const ImageF l = convolve(f, laplacian_kernel(alpha));
    // Interior only: the border sees zero padding.
    for (int y = 1; y < 8; ++y)
      for (int x = 1; x < 8; ++x) CHECK(l.at(x, y) == doctest::Approx(2.0));
  }
}

TEST_CASE("stamping clips at the border") {
  ImageF img(5, 5, 1);
  const Kernel k = gaussian_kernel(1.0);
  stamp(img, k, 0, 0, 2.0);
  CHECK(img.at(0, 0) == doctest::Approx(2.0 * k.at(0, 0)));
  CHECK(img.at(4, 4) == doctest::Approx(2.0 * k.at(4, 4)));
  double inside = 0.0;
  for (int dy = 0; dy <= 4; ++dy)
    for (int dx = 0; dx <= 4; ++dx) inside += k.at(dx, dy);
  double total = 0.0;
  for (double v : img.data()) total += v;
  CHECK(total == doctest::Approx(2.0 * inside));
}

TEST_CASE("stamping equals convolving an impulse") {
  ImageF impulse(31, 31, 1);
  impulse.at(12, 17) = 1.0;
  const Kernel k = gaussian_kernel(2.5);
  ImageF stamped(31, 31, 1);
  stamp(stamped, k, 12, 17, 1.0);
  const ImageF conv = convolve(impulse, k);
  for (std::size_t i = 0; i < conv.data().size(); ++i) {
    CHECK(conv.data()[i] == doctest::Approx(stamped.data()[i]).epsilon(1e-15));
  }
}
