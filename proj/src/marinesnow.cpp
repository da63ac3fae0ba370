#include "uwsynth/marinesnow.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_set>

namespace uwsynth::marinesnow {
namespace {

struct Box {
  int x0, y0, x1, y1;  // inclusive
};

std::optional<Box> bounding_box(const SparseMask& mask, int margin, int width, int height) {
  if (mask.points.empty()) return std::nullopt;
  Box box{width, height, -1, -1};
  for (const auto& [x, y] : mask.points) {
    box.x0 = std::min(box.x0, x);
    box.y0 = std::min(box.y0, y);
    box.x1 = std::max(box.x1, x);
    box.y1 = std::max(box.y1, y);
  }
  box.x0 = std::max(0, box.x0 - margin);
  box.y0 = std::max(0, box.y0 - margin);
  box.x1 = std::min(width - 1, box.x1 + margin);
  box.y1 = std::min(height - 1, box.y1 + margin);
  return box;
}

// S_n: the bin's particles blurred with g(sigma_n), restricted to `box`.
ImageF blurred_mask(const SparseMask& mask, double sigma, const Box& box) {
  const auto kernel = filters::gaussian_kernel(sigma);
  ImageF region(box.x1 - box.x0 + 1, box.y1 - box.y0 + 1, 1);
  for (const auto& [x, y] : mask.points) {
    filters::stamp(region, kernel, x - box.x0, y - box.y0, mask.value);
  }
  return region;
}

void check_mask(const SparseMask& mask, const DistanceBins& bins) {
  if (mask.bin < 1 || mask.bin > static_cast<int>(bins.size())) {
    throw Error(ErrorCategory::contract, "mask bin index outside the configured bins");
  }
}

SnowLayer empty_layer(SnowKind kind, const DistanceBins& bins, int width, int height) {
  bins.validate();
  SnowLayer layer{kind, ImageF(width, height, 1), 0.0};
  for (std::size_t n = 1; n <= bins.size(); ++n) {
    layer.saturation += bins.saturation(static_cast<int>(n), kind);
  }
  return layer;
}

}  // namespace

void DistanceBins::validate() const {
  if (edges.empty()) throw Error(ErrorCategory::config, "snow bins need at least one edge");
  if (sigmas.size() != edges.size() || gains.size() != edges.size()) {
    throw Error(ErrorCategory::config, "snow bins: edges, sigmas and gains must have equal length");
  }
  if (edges.front() < 0.0) throw Error(ErrorCategory::config, "snow bin edges must be >= 0");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw Error(ErrorCategory::config, "snow bin edges must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0)) throw Error(ErrorCategory::config, "snow sigmas must be positive");
    if (!(gains[i] >= 0.0)) throw Error(ErrorCategory::config, "snow gains must be non-negative");
  }
  if (!(threshold > 0.0)) throw Error(ErrorCategory::config, "snow threshold must be positive");
  if (!(laplacian_alpha >= 0.0 && laplacian_alpha <= 1.0)) {
    throw Error(ErrorCategory::config, "Laplacian shape parameter must lie in [0, 1]");
  }
}

int DistanceBins::bin_of(double distance) const {
  if (!(distance > edges.front())) {
    throw Error(ErrorCategory::domain, "particle distance below the first bin edge");
  }
  // The first edge >= R closes the bin from above; past the top edge the
  // search returns size(), which is the open last bin.
  const auto it = std::lower_bound(edges.begin(), edges.end(), distance);
  return static_cast<int>(it - edges.begin());
}

double DistanceBins::saturation(int bin, SnowKind kind) const {
  return kind == SnowKind::H ? gains.at(bin - 1) * threshold : threshold;
}

DistanceBins default_type_h_bins() {
  return DistanceBins{{0, 64, 128, 192}, {7, 5, 3, 3}, {80, 100, 150, 200}, 80.0 / 255.0, 0.2};
}

DistanceBins default_type_v_bins() {
  return DistanceBins{{0, 64, 128, 192}, {7, 5, 4, 4}, {70, 80, 120, 150}, 28.0 / 255.0, 0.2};
}

void SnowConfig::validate() const {
  type_h.validate();
  type_v.validate();
  if (!(brightness >= 0.0)) throw Error(ErrorCategory::config, "snow brightness must be >= 0");
  if (!(distance_min >= 0.0) || !(distance_max > distance_min)) {
    throw Error(ErrorCategory::config, "particle distance range must satisfy 0 <= min < max");
  }
  if (distance_min < type_h.edges.front() || distance_min < type_v.edges.front()) {
    throw Error(ErrorCategory::config, "particle distance range starts below the first bin edge");
  }
  if (!(count_h_variance >= 0.0) || !(count_v_variance >= 0.0)) {
    throw Error(ErrorCategory::config, "particle count variances must be >= 0");
  }
}

void ScatterParams::validate() const {
  if (!(amplitude > 0.0) || !(focal_length > 0.0) || !(beta >= 0.0)) {
    throw Error(ErrorCategory::domain, "scatter parameters need A > 0, F_l > 0, beta >= 0");
  }
  if (std::abs(psf.sum() - 1.0) > 1e-9) {
    throw Error(ErrorCategory::domain, "point spread function must sum to 1");
  }
}

double particle_irradiance(double distance, const ScatterParams& params) {
  if (!(distance > 0.0)) throw Error(ErrorCategory::domain, "particle distance must be positive");
  params.validate();
  const double direct =
      params.amplitude * std::exp(-2.0 * params.beta * distance) / (distance * distance);
  const double forward = params.psf.sum() * direct;
  const double defocus = (distance - params.focal_length) / distance;
  return (forward + direct) * defocus * defocus;
}

ParticleField place_particles(Rng& rng, std::size_t count, int width, int height, double r_min,
                              double r_max, SnowKind kind) {
  if (width <= 0 || height <= 0) throw Error(ErrorCategory::contract, "empty particle extent");
  if (!(r_max > r_min) || r_min < 0.0) {
    throw Error(ErrorCategory::domain, "particle distance range must satisfy 0 <= min < max");
  }
  const auto capacity = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (count > capacity) {
    throw Error(ErrorCategory::capacity, "cannot place " + std::to_string(count) +
                                             " particles on " + std::to_string(capacity) +
                                             " pixels");
  }
  ParticleField field{width, height, {}};
  field.particles.reserve(count);
  std::unordered_set<std::size_t> occupied;
  while (field.particles.size() < count) {
    const auto x = static_cast<int>(rng.uniform_index(width));
    const auto y = static_cast<int>(rng.uniform_index(height));
    if (!occupied.insert(static_cast<std::size_t>(y) * width + x).second) continue;
    // (r_min, r_max]: 1 - u lies in (0, 1].
    const double r = r_min + (r_max - r_min) * (1.0 - rng.uniform01());
    field.particles.push_back({x, y, r, kind});
  }
  return field;
}

std::pair<std::size_t, std::size_t> sample_particle_counts(Rng& rng, const SnowConfig& config) {
  const auto draw = [&](double mean, double variance) {
    const double v = std::round(rng.normal(mean, std::sqrt(variance)));
    return v <= 0.0 ? std::size_t{0} : static_cast<std::size_t>(v);
  };
  const std::size_t n_h = draw(config.count_h_mean, config.count_h_variance);
  const std::size_t n_v = draw(config.count_v_mean, config.count_v_variance);
  return {n_h, n_v};
}

std::vector<SparseMask> bin_particles(const ParticleField& field, const DistanceBins& bins,
                                      double brightness) {
  bins.validate();
  std::vector<SparseMask> masks(bins.size());
  for (std::size_t n = 0; n < masks.size(); ++n) {
    masks[n].bin = static_cast<int>(n + 1);
    masks[n].value = brightness;
  }
  for (const auto& p : field.particles) {
    if (p.x < 0 || p.y < 0 || p.x >= field.width || p.y >= field.height) {
      throw Error(ErrorCategory::contract, "particle outside the field extent");
    }
    masks[bins.bin_of(p.distance) - 1].points.emplace_back(p.x, p.y);
  }
  return masks;
}

SnowLayer render_type_h(const std::vector<SparseMask>& masks, const DistanceBins& bins, int width,
                        int height) {
  SnowLayer layer = empty_layer(SnowKind::H, bins, width, height);
  for (const auto& mask : masks) {
    check_mask(mask, bins);
    const double sigma = bins.sigmas[mask.bin - 1];
    const auto box = bounding_box(mask, filters::gaussian_radius(sigma), width, height);
    if (!box) continue;
    const ImageF s = blurred_mask(mask, sigma, *box);
    const double gain = bins.gains[mask.bin - 1];
    const double knee = gain * bins.threshold;
    for (int y = 0; y < s.height(); ++y) {
      for (int x = 0; x < s.width(); ++x) {
        const double v = s.at(x, y);
        if (v == 0.0) continue;
        layer.values.at(box->x0 + x, box->y0 + y) += v < bins.threshold ? gain * v : knee;
      }
    }
  }
  return layer;
}

SnowLayer render_type_v(const std::vector<SparseMask>& masks, const DistanceBins& bins, int width,
                        int height) {
  SnowLayer layer = empty_layer(SnowKind::V, bins, width, height);
  const auto laplacian = filters::laplacian_kernel(bins.laplacian_alpha);
  for (const auto& mask : masks) {
    check_mask(mask, bins);
    const double sigma = bins.sigmas[mask.bin - 1];
    // One extra pixel so the Laplacian sees the blob's zero surround.
    const auto box =
        bounding_box(mask, filters::gaussian_radius(sigma) + laplacian.radius, width, height);
    if (!box) continue;
    ImageF s = blurred_mask(mask, sigma, *box);
    const double gain = bins.gains[mask.bin - 1];
    for (double& v : s.data()) v *= gain;
    const ImageF edges = filters::convolve(s, laplacian);
    for (int y = 0; y < edges.height(); ++y) {
      for (int x = 0; x < edges.width(); ++x) {
        const double v = std::max(0.0, edges.at(x, y));
        if (v == 0.0) continue;
        layer.values.at(box->x0 + x, box->y0 + y) += v < bins.threshold ? v : bins.threshold;
      }
    }
  }
  return layer;
}

ImageF composite(const ImageF& base, const SnowLayer& h_layer, const SnowLayer& v_layer) {
  if (!base.same_extent(h_layer.values) || !base.same_extent(v_layer.values)) {
    throw Error(ErrorCategory::contract, "snow layer extent differs from the base image");
  }
  ImageF out = base;
  const auto h = h_layer.values.data();
  const auto v = v_layer.values.data();
  auto dst = out.data();
  const int channels = base.channels();
  for (std::size_t p = 0; p < h.size(); ++p) {
    const double snow = h[p] + v[p];
    if (snow == 0.0) continue;
    for (int c = 0; c < channels; ++c) {
      auto& value = dst[p * channels + c];
      value = std::clamp(value + snow, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace uwsynth::marinesnow
