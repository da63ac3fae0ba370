#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uwsynth::spectra {

/// The seven Jerlov water types used for synthesis, ordered from low to
/// high attenuation. Coastal types 5C, 7C and 9C are deliberately absent.
enum class WaterType { I, IA, IB, II, III, C1, C3 };

inline constexpr std::array<WaterType, 7> kAllWaterTypes = {
    WaterType::I,  WaterType::IA, WaterType::IB, WaterType::II,
    WaterType::III, WaterType::C1, WaterType::C3};

std::string_view to_string(WaterType type);
/// Accepts the canonical labels (I, IA, IB, II, III, 1C, 3C). The excluded
/// coastal types and unknown labels raise a parse error.
WaterType parse_water_type(std::string_view label);

enum class Channel { R = 0, G = 1, B = 2 };
inline constexpr std::array<Channel, 3> kChannels = {Channel::R, Channel::G, Channel::B};
std::string_view to_string(Channel channel);

inline constexpr double kBandMinNm = 400.0;
inline constexpr double kBandMaxNm = 700.0;
inline constexpr double kDefaultGridStepNm = 1.0;

/// Sampled function of wavelength.
class SpectralCurve {
 public:
  SpectralCurve() = default;
  /// Throws a domain error unless wavelengths are strictly increasing, at
  /// least two samples exist and all values are finite.
  SpectralCurve(std::vector<double> wavelengths_nm, std::vector<double> values);

  static SpectralCurve constant(std::span<const double> grid, double value);

  std::span<const double> wavelengths() const noexcept { return wavelengths_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Piecewise-linear evaluation. Outside the sampled range the curve is
  /// held at `outside` when given, otherwise at its end values.
  double evaluate(double wavelength_nm, std::optional<double> outside = std::nullopt) const;

  /// Linear resampling onto `grid`; identity when the grids coincide.
  SpectralCurve resample(std::span<const double> grid,
                         std::optional<double> outside = std::nullopt) const;

  bool shares_grid(const SpectralCurve& other) const noexcept {
    return wavelengths_ == other.wavelengths_;
  }

  friend bool operator==(const SpectralCurve&, const SpectralCurve&) = default;

 private:
  std::vector<double> wavelengths_;
  std::vector<double> values_;
};

/// Uniform grid over the visible band, both ends included.
std::vector<double> make_grid(double step_nm = kDefaultGridStepNm);

struct CameraResponse {
  std::string id;
  std::array<SpectralCurve, 3> channels;  // R, G, B

  const SpectralCurve& channel(Channel c) const {
    return channels[static_cast<int>(c)];
  }
};

/// Spectral inputs of the colour model, all on one common grid.
class SpectralLibrary {
 public:
  /// Validates that all seven water types and at least one camera are
  /// present and that every curve lies on `grid`.
  SpectralLibrary(std::vector<double> grid, std::map<WaterType, SpectralCurve> attenuation,
                  SpectralCurve irradiance, std::vector<CameraResponse> cameras,
                  std::optional<SpectralCurve> reflectance = std::nullopt);

  /// Library whose attenuation is the constant `beta` (1/m) for every water
  /// type. Useful as a debugging and testing fixture.
  static SpectralLibrary uniform(double beta, double step_nm = kDefaultGridStepNm);

  std::span<const double> grid() const noexcept { return grid_; }
  const SpectralCurve& attenuation(WaterType type) const { return attenuation_.at(type); }
  const SpectralCurve& irradiance() const noexcept { return irradiance_; }
  const SpectralCurve& reflectance() const noexcept { return reflectance_; }
  const std::vector<CameraResponse>& cameras() const noexcept { return cameras_; }
  /// Throws a lookup error naming the available ids.
  const CameraResponse& camera(std::string_view id) const;

 private:
  std::vector<double> grid_;
  std::map<WaterType, SpectralCurve> attenuation_;
  SpectralCurve irradiance_;
  SpectralCurve reflectance_;
  std::vector<CameraResponse> cameras_;
};

/// Loads the CSV data set. `cameras_path` is either one camera CSV or a
/// directory whose *.csv files are cameras (id = file stem, sorted by id).
SpectralLibrary load_library(const std::filesystem::path& attenuation_path,
                             const std::filesystem::path& irradiance_path,
                             const std::filesystem::path& cameras_path,
                             const std::optional<std::filesystem::path>& reflectance_path = std::nullopt,
                             double grid_step_nm = kDefaultGridStepNm);

/// Loads `attenuation.csv`-style files from a data directory laid out as
/// jerlov_attenuation.csv, solar_irradiance.csv, cameras/, and optionally
/// reflectance.csv.
SpectralLibrary load_library_dir(const std::filesystem::path& dir,
                                 double grid_step_nm = kDefaultGridStepNm);

/// Trapezoid integral over the common grid of the pointwise product of
/// `factors`, optionally weighted by exp(exponent_scale * exponent_curve).
double product_integral(std::span<const SpectralCurve* const> factors,
                        const SpectralCurve* exponent_curve = nullptr,
                        double exponent_scale = 0.0);

/// Effective attenuation along the vertical path of length d_vert (m).
double effective_beta_vert(const SpectralLibrary& library, WaterType type,
                           const CameraResponse& camera, Channel channel, double d_vert);

/// Effective attenuation along a horizontal path of d_horiz (m) at depth d_vert.
double effective_beta_horiz(const SpectralLibrary& library, WaterType type,
                            const CameraResponse& camera, Channel channel,
                            double d_vert, double d_horiz);

/// Precomputed integrand weights SR(λ)ρ(λ)Θ₀(λ) for one camera channel, so
/// repeated evaluations (lookup-table construction) skip the product.
class ChannelIntegrator {
 public:
  ChannelIntegrator(const SpectralLibrary& library, WaterType type,
                    const CameraResponse& camera, Channel channel);

  /// ∫ w(λ) exp(-β(λ) path) dλ.
  double attenuated_power(double path_length) const;

  double beta_vert(double d_vert) const;
  double beta_horiz(double d_vert, double d_horiz) const;

 private:
  SpectralCurve weight_;
  SpectralCurve beta_;
};

}  // namespace uwsynth::spectra
