#include "uwsynth/colorshift.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace uwsynth::colorshift {
namespace {

constexpr double kMidDistance = 0.5 * (kMinDistance + kMaxDistance);

bool is_hole(double v) { return v == 0.0; }

}  // namespace

DepthMap normalize_depth(const ImageF& raw) {
  if (raw.empty() || raw.channels() != 1) {
    throw Error(ErrorCategory::contract, "depth map must be a non-empty single-channel image");
  }
  const int w = raw.width();
  const int h = raw.height();
  const auto src = raw.data();

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<int> source(src.size(), -1);  // index of the valid pixel each pixel copies
  std::deque<int> frontier;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (!std::isfinite(src[i]) || src[i] < 0.0) {
      throw Error(ErrorCategory::domain, "depth map contains negative or non-finite values");
    }
    if (is_hole(src[i])) continue;
    lo = std::min(lo, src[i]);
    hi = std::max(hi, src[i]);
    source[i] = static_cast<int>(i);
    frontier.push_back(static_cast<int>(i));
  }
  if (frontier.empty()) {
    throw Error(ErrorCategory::domain, "unusable depth: every pixel is a hole");
  }

  // Multi-source BFS fills each hole from its nearest valid pixel.
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop_front();
    const int x = i % w;
    const int y = i / w;
    const int neighbours[4][2] = {{x, y - 1}, {x - 1, y}, {x + 1, y}, {x, y + 1}};
    for (const auto& n : neighbours) {
      if (n[0] < 0 || n[1] < 0 || n[0] >= w || n[1] >= h) continue;
      const int j = n[1] * w + n[0];
      if (source[j] >= 0) continue;
      source[j] = source[i];
      frontier.push_back(j);
    }
  }

  DepthMap out{ImageF(w, h, 1)};
  auto dst = out.distances.data();
  const double range = hi - lo;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (range == 0.0) {
      dst[i] = kMidDistance;
      continue;
    }
    const double t = (src[source[i]] - lo) / range;
    dst[i] = std::clamp(kMinDistance + t * (kMaxDistance - kMinDistance), kMinDistance,
                        kMaxDistance);
  }
  return out;
}

DepthMap normalize_depth(const Image16& raw) {
  ImageF values(raw.width(), raw.height(), raw.channels());
  std::copy(raw.data().begin(), raw.data().end(), values.data().begin());
  return normalize_depth(values);
}

void ColorShiftConfig::validate() const {
  if (!(d_vert_min > 0.0) || !(d_vert_min <= d_vert_max)) {
    throw Error(ErrorCategory::config, "d_vert range must satisfy 0 < min <= max");
  }
  for (int c = 0; c < 3; ++c) {
    if (!(background_min[c] <= background_max[c]) || background_min[c] < 0.0 ||
        background_max[c] > 1.0) {
      throw Error(ErrorCategory::config,
                  "background light range must satisfy 0 <= min <= max <= 1");
    }
  }
  if (lut_size < 2) throw Error(ErrorCategory::config, "lut_size must be at least 2");
}

SceneParams sample_scene_params(Rng& rng, const ColorShiftConfig& config,
                                const SpectralLibrary& library, WaterType type) {
  config.validate();
  if (library.cameras().empty()) {
    throw Error(ErrorCategory::config, "camera library is empty");
  }
  SceneParams params;
  params.water_type = type;
  params.d_vert = rng.uniform(config.d_vert_min, config.d_vert_max);
  for (int c = 0; c < 3; ++c) {
    params.background[c] = rng.uniform(config.background_min[c], config.background_max[c]);
  }
  params.camera_id = library.cameras()[rng.uniform_index(library.cameras().size())].id;
  return params;
}

double transmission(double beta, double distance) {
  if (beta < 0.0 || distance < 0.0) {
    throw Error(ErrorCategory::domain, "transmission requires beta >= 0 and d >= 0");
  }
  return std::exp(-beta * distance);
}

HorizontalBetaTable::HorizontalBetaTable(const SpectralLibrary& library, WaterType type,
                                         const spectra::CameraResponse& camera, double d_vert,
                                         int entries)
    : entries_(entries), step_((kMaxDistance - kMinDistance) / (entries - 1)) {
  if (entries < 2) throw Error(ErrorCategory::config, "lookup table needs at least 2 entries");
  for (auto channel : spectra::kChannels) {
    const spectra::ChannelIntegrator integrator(library, type, camera, channel);
    auto& table = betas_[static_cast<int>(channel)];
    table.resize(entries);
    for (int i = 0; i < entries; ++i) {
      const double d = i + 1 == entries ? kMaxDistance : kMinDistance + i * step_;
      table[i] = integrator.beta_horiz(d_vert, d);
    }
  }
}

double HorizontalBetaTable::lookup(Channel channel, double d_horiz) const {
  const auto& table = betas_[static_cast<int>(channel)];
  const double pos = (std::clamp(d_horiz, kMinDistance, kMaxDistance) - kMinDistance) / step_;
  const int i = std::min(static_cast<int>(pos), entries_ - 2);
  const double t = pos - i;
  return table[i] + t * (table[i + 1] - table[i]);
}

SceneTransmission prepare_transmission(const SpectralLibrary& library, const SceneParams& params,
                                       int lut_entries) {
  const auto& camera = library.camera(params.camera_id);
  SceneTransmission out{{}, {},
                        HorizontalBetaTable(library, params.water_type, camera, params.d_vert,
                                            lut_entries)};
  for (auto channel : spectra::kChannels) {
    const int c = static_cast<int>(channel);
    out.beta_vert[c] = spectra::effective_beta_vert(library, params.water_type, camera, channel,
                                                    params.d_vert);
    out.t_vert[c] = transmission(out.beta_vert[c], params.d_vert);
  }
  return out;
}

ImageF apply_color_shift(const ImageF& clean, const DepthMap& depth, const SceneParams& params,
                         const SpectralLibrary& library, const ColorShiftConfig& config) {
  if (clean.channels() != 3) {
    throw Error(ErrorCategory::contract, "colour shift expects a 3-channel image");
  }
  if (!clean.same_extent(depth.distances)) {
    throw Error(ErrorCategory::contract, "image and depth map extents differ");
  }
  const SceneTransmission scene = prepare_transmission(library, params, config.lut_size);

  ImageF out(clean.width(), clean.height(), 3);
  const auto phi = clean.data();
  const auto dist = depth.distances.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < dist.size(); ++p) {
    for (int c = 0; c < 3; ++c) {
      const double beta_h = scene.horizontal.lookup(static_cast<Channel>(c), dist[p]);
      const double t_h = std::exp(-beta_h * dist[p]);
      const double u = scene.t_vert[c] * (t_h * phi[3 * p + c] + params.background[c] * (1.0 - t_h));
      dst[3 * p + c] = std::clamp(u, 0.0, 1.0);
    }
  }
  return out;
}

std::uint64_t derive_pair_seed(std::uint64_t master_seed, std::string_view image_id,
                               WaterType type) {
  return SeedHasher(master_seed).add(image_id).add(spectra::to_string(type)).finish();
}

std::vector<WaterTypeResult> synthesize_water_types(const ImageF& clean, const DepthMap& depth,
                                                    const SpectralLibrary& library,
                                                    const ColorShiftConfig& config,
                                                    std::uint64_t master_seed,
                                                    std::string_view image_id) {
  std::vector<WaterTypeResult> results;
  results.reserve(spectra::kAllWaterTypes.size());
  for (auto type : spectra::kAllWaterTypes) {
    const std::uint64_t seed = derive_pair_seed(master_seed, image_id, type);
    Rng rng(seed);
    SceneParams params = sample_scene_params(rng, config, library, type);
    params.seed = seed;
    ImageF image = apply_color_shift(clean, depth, params, library, config);
    results.push_back({std::move(params), std::move(image)});
  }
  return results;
}

}  // namespace uwsynth::colorshift
