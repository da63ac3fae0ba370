#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uwsynth/image.hpp"
#include "uwsynth/rng.hpp"
#include "uwsynth/spectra.hpp"

namespace uwsynth::colorshift {

using spectra::Channel;
using spectra::SpectralLibrary;
using spectra::WaterType;

inline constexpr double kMinDistance = 0.5;   // m
inline constexpr double kMaxDistance = 14.0;  // m

/// Per-pixel horizontal camera-to-scene distance in metres, every value in
/// [kMinDistance, kMaxDistance].
struct DepthMap {
  ImageF distances;  // 1 channel

  int width() const noexcept { return distances.width(); }
  int height() const noexcept { return distances.height(); }
  double at(int x, int y) const { return distances.at(x, y); }
};

/// Maps raw sensor depth affinely onto [0.5, 14] m. Zero-valued pixels are
/// holes: each takes the value of its nearest valid pixel (breadth-first over
/// 4-neighbours, i.e. city-block distance; ties resolved by visiting order,
/// seeded in row-major order). A constant map becomes 7.25 m.
DepthMap normalize_depth(const ImageF& raw);
DepthMap normalize_depth(const Image16& raw);

struct ColorShiftConfig {
  double d_vert_min = 0.5;
  double d_vert_max = 1.0;
  std::array<double, 3> background_min = {0.4, 0.7, 0.7};
  std::array<double, 3> background_max = {0.5, 0.8, 0.8};
  int lut_size = 256;

  /// Throws a config error on inverted or out-of-range settings.
  void validate() const;
};

/// One sampled degradation configuration.
struct SceneParams {
  WaterType water_type = WaterType::I;
  double d_vert = 0.5;
  std::array<double, 3> background = {};
  std::string camera_id;
  std::uint64_t seed = 0;

  friend bool operator==(const SceneParams&, const SceneParams&) = default;
};

/// Draws d_vert, then B_R, B_G, B_B, then the camera, in that order.
SceneParams sample_scene_params(Rng& rng, const ColorShiftConfig& config,
                                const SpectralLibrary& library, WaterType type);

/// exp(-beta * d); domain error for negative inputs.
double transmission(double beta, double distance);

/// β_horiz(d) per channel, tabulated at uniformly spaced distances over
/// [0.5, 14] m for one (water type, camera, d_vert) and interpolated linearly.
class HorizontalBetaTable {
 public:
  HorizontalBetaTable(const SpectralLibrary& library, WaterType type,
                      const spectra::CameraResponse& camera, double d_vert, int entries = 256);

  /// Distances outside [0.5, 14] are clamped to the table range.
  double lookup(Channel channel, double d_horiz) const;
  int entries() const noexcept { return entries_; }

 private:
  int entries_;
  double step_;
  std::array<std::vector<double>, 3> betas_;
};

/// Vertical transmission and β_horiz table for a scene.
struct SceneTransmission {
  std::array<double, 3> beta_vert = {};
  std::array<double, 3> t_vert = {};
  HorizontalBetaTable horizontal;
};

SceneTransmission prepare_transmission(const SpectralLibrary& library, const SceneParams& params,
                                       int lut_entries = 256);

/// Underwater observation model per pixel and channel:
///   U = T_v * (T_h * Φ + B * (1 - T_h)),  clipped to [0, 1].
ImageF apply_color_shift(const ImageF& clean, const DepthMap& depth, const SceneParams& params,
                         const SpectralLibrary& library, const ColorShiftConfig& config = {});

/// Seed for one (image, water type) task; stable across runs and platforms.
std::uint64_t derive_pair_seed(std::uint64_t master_seed, std::string_view image_id,
                               WaterType type);

struct WaterTypeResult {
  SceneParams params;
  ImageF image;
};

/// Degrades one clean image under all seven water types, drawing fresh scene
/// parameters per type from derive_pair_seed(master_seed, image_id, type).
std::vector<WaterTypeResult> synthesize_water_types(const ImageF& clean, const DepthMap& depth,
                                                    const SpectralLibrary& library,
                                                    const ColorShiftConfig& config,
                                                    std::uint64_t master_seed,
                                                    std::string_view image_id);

}  // namespace uwsynth::colorshift
