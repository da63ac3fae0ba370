#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "support.hpp"
#include "uwsynth/marinesnow.hpp"

using namespace uwsynth;
using namespace uwsynth::marinesnow;

namespace {

ErrorCategory category_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("no error thrown");
  return ErrorCategory::usage;
}

ParticleField single(int w, int h, int x, int y, double r, SnowKind kind) {
  return ParticleField{w, h, {{x, y, r, kind}}};
}

// Blurred unit impulse of one particle, from the directly evaluated Gaussian.
double blob(double sigma, int dx, int dy) {
  const int r = filters::gaussian_radius(sigma);
  if (std::abs(dx) > r || std::abs(dy) > r) return 0.0;
  return testsupport::gaussian_weight(sigma, r, dx, dy);
}

}  // namespace

TEST_CASE("default bin tables") {
  const auto h = default_type_h_bins();
  CHECK(h.edges == std::vector<double>{0, 64, 128, 192});
  CHECK(h.sigmas == std::vector<double>{7, 5, 3, 3});
  CHECK(h.gains == std::vector<double>{80, 100, 150, 200});
  CHECK(h.threshold == doctest::Approx(80.0 / 255.0));
  const auto v = default_type_v_bins();
  CHECK(v.sigmas == std::vector<double>{7, 5, 4, 4});
  CHECK(v.gains == std::vector<double>{70, 80, 120, 150});
  CHECK(v.threshold == doctest::Approx(28.0 / 255.0));
  CHECK(v.laplacian_alpha == 0.2);
}

TEST_CASE("distance bins partition the range") {
  const auto bins = default_type_h_bins();
  CHECK(bins.bin_of(70) == 2);
  CHECK(bins.bin_of(64) == 1);
  CHECK(bins.bin_of(64.000001) == 2);
  CHECK(bins.bin_of(1e-9) == 1);
  CHECK(bins.bin_of(192) == 3);
  CHECK(bins.bin_of(256) == 4);
  CHECK(bins.bin_of(5000) == 4);
  CHECK(category_of([&] { bins.bin_of(0.0); }) == ErrorCategory::domain);

  Rng rng(2);
  for (int i = 0; i < 5000; ++i) {
    const double r = 256.0 * (1.0 - rng.uniform01());
    int expect = 0;
    for (std::size_t n = 1; n <= bins.size(); ++n) {
      const double lo = bins.edges[n - 1];
      const bool last = n == bins.size();
      if (r > lo && (last || r <= bins.edges[n])) expect = static_cast<int>(n);
    }
    REQUIRE(bins.bin_of(r) == expect);
  }
}

TEST_CASE("bin validation") {
  auto bins = default_type_h_bins();
  bins.edges = {0, 64, 64, 192};
  CHECK(category_of([&] { bins.validate(); }) == ErrorCategory::config);
  bins = default_type_h_bins();
  bins.gains.pop_back();
  CHECK(category_of([&] { bins.validate(); }) == ErrorCategory::config);
  bins = default_type_h_bins();
  bins.sigmas[0] = 0.0;
  CHECK(category_of([&] { bins.validate(); }) == ErrorCategory::config);
}

TEST_CASE("particle irradiance equals the un-merged chain") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const double a_prime = rng.uniform(0.1, 10.0);
    const double m = rng.uniform(0.1, 1.0);
    const double t_l = rng.uniform(0.5, 1.0);
    const double f_n = rng.uniform(1.0, 8.0);
    const double focal = rng.uniform(0.01, 2.0);
    const double beta = rng.uniform(0.0, 0.5);
    const double r = rng.uniform(0.1, 20.0);
    ScatterParams p;
    p.amplitude = a_prime * m * t_l / (4.0 * f_n);
    p.focal_length = focal;
    p.beta = beta;
    const double expect =
        testsupport::irradiance_chain_oracle(r, a_prime, m, t_l, f_n, focal, beta, 1.0);
    CHECK(particle_irradiance(r, p) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("particle irradiance vanishes at the focal length") {
  ScatterParams p;
  p.amplitude = 3.0;
  p.focal_length = 1.7;
  p.beta = 0.1;
  CHECK(particle_irradiance(1.7, p) == 0.0);
  CHECK(particle_irradiance(3.0, p) > 0.0);
  CHECK(category_of([&] { particle_irradiance(0.0, p); }) == ErrorCategory::domain);
  p.amplitude = 0.0;
  CHECK(category_of([&] { particle_irradiance(1.0, p); }) == ErrorCategory::domain);
}

TEST_CASE("particles land on distinct pixels with R in range") {
  Rng rng(5);
  const auto field = place_particles(rng, 500, 40, 30, 0.0, 256.0, SnowKind::V);
  CHECK(field.particles.size() == 500);
  std::set<std::pair<int, int>> seen;
  for (const auto& p : field.particles) {
    CHECK(p.kind == SnowKind::V);
    CHECK(p.distance > 0.0);
    CHECK(p.distance <= 256.0);
    CHECK(p.x >= 0);
    CHECK(p.x < 40);
    CHECK(p.y < 30);
    seen.insert({p.x, p.y});
  }
  CHECK(seen.size() == 500);
  CHECK(place_particles(rng, 12, 3, 4, 0, 1, SnowKind::H).particles.size() == 12);
  CHECK(category_of([&] { place_particles(rng, 13, 3, 4, 0, 1, SnowKind::H); }) ==
        ErrorCategory::capacity);
}

TEST_CASE("particle counts follow the configured Gaussians") {
  SnowConfig cfg;
  Rng rng(6);
  double sh = 0.0, sv = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto [h, v] = sample_particle_counts(rng, cfg);
    sh += static_cast<double>(h);
    sv += static_cast<double>(v);
  }
  CHECK(sh / n == doctest::Approx(40.0).epsilon(0.003));
  CHECK(sv / n == doctest::Approx(30.0).epsilon(0.003));

  cfg.count_h_mean = -50.0;
  CHECK(sample_particle_counts(rng, cfg).first == 0);
}

TEST_CASE("binning splits particles by distance") {
  ParticleField field{10, 10, {{1, 1, 10, SnowKind::H}, {2, 2, 100, SnowKind::H}, {3, 3, 250, SnowKind::H}}};
  const auto masks = bin_particles(field, default_type_h_bins(), 0.5);
  REQUIRE(masks.size() == 4);
  CHECK(masks[0].points.size() == 1);
  CHECK(masks[1].points.size() == 1);
  CHECK(masks[2].points.empty());
  CHECK(masks[3].points.size() == 1);
  CHECK(masks[3].value == 0.5);
  field.particles.push_back({10, 0, 5, SnowKind::H});
  CHECK(category_of([&] { bin_particles(field, default_type_h_bins()); }) ==
        ErrorCategory::contract);
}

TEST_CASE("type H follows the thresholded gain rule") {
  const auto bins = default_type_h_bins();
  for (double r : {30.0, 100.0, 150.0, 240.0}) {
    const int n = bins.bin_of(r);
    const double sigma = bins.sigmas[n - 1];
    const double gain = bins.gains[n - 1];
    const auto layer =
        render_type_h(bin_particles(single(80, 80, 40, 40, r, SnowKind::H), bins), bins, 80, 80);
    for (int dy = -30; dy <= 30; dy += 3) {
      for (int dx = -30; dx <= 30; dx += 2) {
        const double s = blob(sigma, dx, dy);
        const double expect = s == 0.0 ? 0.0 : (s < bins.threshold ? gain * s : gain * bins.threshold);
        CHECK(layer.values.at(40 + dx, 40 + dy) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("type V is the rectified, clipped Laplacian of the amplified blob") {
  const auto bins = default_type_v_bins();
  const auto lap = filters::laplacian_kernel(bins.laplacian_alpha);
  for (double r : {30.0, 100.0, 200.0}) {
    const int n = bins.bin_of(r);
    const double sigma = bins.sigmas[n - 1];
    const double gain = bins.gains[n - 1];
    const auto layer =
        render_type_v(bin_particles(single(90, 90, 45, 45, r, SnowKind::V), bins), bins, 90, 90);
    for (int dy = -32; dy <= 32; ++dy) {
      for (int dx = -32; dx <= 32; dx += 3) {
        double l = 0.0;
        for (int j = -1; j <= 1; ++j)
          for (int i = -1; i <= 1; ++i) l += lap.at(i, j) * gain * blob(sigma, dx + i, dy + j);
        const double expect = std::min(std::max(l, 0.0), bins.threshold);
        CHECK(layer.values.at(45 + dx, 45 + dy) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("type V is dark in the middle with a bright rim") {
  const auto bins = default_type_v_bins();
  const auto layer =
      render_type_v(bin_particles(single(90, 90, 45, 45, 150, SnowKind::V), bins), bins, 90, 90);
  CHECK(layer.values.at(45, 45) == 0.0);
  double rim = 0.0;
  for (int dx = 0; dx < 20; ++dx) rim = std::max(rim, layer.values.at(45 + dx, 45));
  CHECK(rim > 0.0);
  // The rim peaks around two sigma.
  int argmax = 0;
  for (int dx = 0; dx < 15; ++dx)
    if (layer.values.at(45 + dx, 45) > layer.values.at(45 + argmax, 45)) argmax = dx;
  CHECK(argmax == 8);
}

TEST_CASE("layers stay below their saturation") {
  SnowConfig cfg;
  Rng rng(13);
  for (int i = 0; i < 5; ++i) {
    const auto h = place_particles(rng, 400, 64, 48, 0, 256, SnowKind::H);
    const auto v = place_particles(rng, 400, 64, 48, 0, 256, SnowKind::V);
    const auto lh = render_type_h(bin_particles(h, cfg.type_h), cfg.type_h, 64, 48);
    const auto lv = render_type_v(bin_particles(v, cfg.type_v), cfg.type_v, 64, 48);
    for (double x : lh.values.data()) REQUIRE(x <= lh.saturation + 1e-12);
    for (double x : lv.values.data()) REQUIRE(x <= lv.saturation + 1e-12);
    for (double x : lv.values.data()) REQUIRE(x >= 0.0);
  }
}

TEST_CASE("render matches a full-frame reference") {
  // Bounding-box rendering against stamping into a full frame.
  SnowConfig cfg;
  Rng rng(17);
  const auto field = place_particles(rng, 25, 70, 50, 0, 256, SnowKind::H);
  const auto layer = render_type_h(bin_particles(field, cfg.type_h), cfg.type_h, 70, 50);
  ImageF reference(70, 50, 1);
  for (const auto& mask : bin_particles(field, cfg.type_h)) {
    ImageF s(70, 50, 1);
    const auto k = filters::gaussian_kernel(cfg.type_h.sigmas[mask.bin - 1]);
    for (const auto& [x, y] : mask.points) filters::stamp(s, k, x, y, mask.value);
    const double a = cfg.type_h.gains[mask.bin - 1];
    for (std::size_t i = 0; i < s.data().size(); ++i) {
      const double v = s.data()[i];
      reference.data()[i] += v < cfg.type_h.threshold ? a * v : a * cfg.type_h.threshold;
    }
  }
  for (std::size_t i = 0; i < reference.data().size(); ++i) {
    CHECK(layer.values.data()[i] == doctest::Approx(reference.data()[i]).epsilon(1e-12));
  }
}

TEST_CASE("compositing adds and clips") {
  ImageF base(3, 1, 3, 0.5);
  SnowLayer h{SnowKind::H, ImageF(3, 1, 1), 1.0};
  SnowLayer v{SnowKind::V, ImageF(3, 1, 1), 1.0};
  h.values.at(1, 0) = 0.2;
  v.values.at(1, 0) = 0.1;
  h.values.at(2, 0) = 0.9;
  const ImageF out = composite(base, h, v);
  for (int c = 0; c < 3; ++c) {
    CHECK(out.at(0, 0, c) == 0.5);
    CHECK(out.at(1, 0, c) == doctest::Approx(0.8));
    CHECK(out.at(2, 0, c) == 1.0);
  }
  CHECK(category_of([&] { composite(ImageF(4, 1, 3), h, v); }) == ErrorCategory::contract);
}

TEST_CASE("snow config validation") {
  SnowConfig cfg;
  cfg.distance_max = 0.0;
  CHECK(category_of([&] { cfg.validate(); }) == ErrorCategory::config);
  cfg = {};
  cfg.count_v_variance = -1.0;
  CHECK(category_of([&] { cfg.validate(); }) == ErrorCategory::config);
  cfg = {};
  cfg.brightness = -0.1;
  CHECK(category_of([&] { cfg.validate(); }) == ErrorCategory::config);
}
