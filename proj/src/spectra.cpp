#include "uwsynth/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "csv.hpp"
#include "uwsynth/error.hpp"

namespace uwsynth::spectra {
namespace {

constexpr double kGridTolerance = 1e-9;

// Column of a CSV table as a curve; row indices in errors are data rows.
SpectralCurve column_curve(const detail::CsvTable& table, std::size_t column,
                           const std::filesystem::path& path) {
  std::vector<double> wl, values;
  wl.reserve(table.rows.size());
  values.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double w = table.rows[r][0];
    if (!wl.empty() && !(w > wl.back())) {
      throw ParseError(r + 1,
                       path.filename().string() +
                           ": wavelengths must be strictly increasing",
                       "row");
    }
    wl.push_back(w);
    values.push_back(table.rows[r][column]);
  }
  if (wl.size() < 2) {
    throw Error(ErrorCategory::load,
                "'" + path.string() + "' needs at least two wavelength rows");
  }
  return SpectralCurve(std::move(wl), std::move(values));
}

void require_header(const detail::CsvTable& table, std::span<const std::string_view> expected,
                    const std::filesystem::path& path) {
  bool ok = table.header.size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) ok = table.header[i] == expected[i];
  if (!ok) {
    std::string want;
    for (auto e : expected) want += (want.empty() ? "" : ",") + std::string(e);
    throw ParseError(1, path.filename().string() + ": header must be '" + want + "'", "line");
  }
}

void require_band_coverage(const SpectralCurve& curve, const std::string& what) {
  const auto wl = curve.wavelengths();
  if (wl.front() > kBandMinNm + kGridTolerance || wl.back() < kBandMaxNm - kGridTolerance) {
    throw Error(ErrorCategory::load, what + " must cover 400-700 nm");
  }
}

void require_non_negative(const SpectralCurve& curve, const std::string& what) {
  for (double v : curve.values()) {
    if (v < 0.0) throw Error(ErrorCategory::load, what + " contains negative values");
  }
}

std::vector<CameraResponse> load_cameras(const std::filesystem::path& cameras_path,
                                         std::span<const double> grid) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(cameras_path)) {
    for (const auto& entry : std::filesystem::directory_iterator(cameras_path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(cameras_path);
  }

  static constexpr std::string_view kHeader[] = {"wavelength_nm", "r", "g", "b"};
  std::vector<CameraResponse> cameras;
  for (const auto& file : files) {
    const auto table = detail::read_csv(file);
    require_header(table, kHeader, file);
    CameraResponse camera;
    camera.id = file.stem().string();
    for (int c = 0; c < 3; ++c) {
      auto curve = column_curve(table, c + 1, file);
      require_non_negative(curve, "camera '" + camera.id + "'");
      // Out-of-band samples are dropped by the resampling; missing in-band
      // coverage reads as zero response.
      camera.channels[c] = curve.resample(grid, 0.0);
    }
    cameras.push_back(std::move(camera));
  }
  return cameras;
}

}  // namespace

std::string_view to_string(WaterType type) {
  switch (type) {
    case WaterType::I: return "I";
    case WaterType::IA: return "IA";
    case WaterType::IB: return "IB";
    case WaterType::II: return "II";
    case WaterType::III: return "III";
    case WaterType::C1: return "1C";
    case WaterType::C3: return "3C";
  }
  return "?";
}

WaterType parse_water_type(std::string_view label) {
  for (auto type : kAllWaterTypes) {
    if (to_string(type) == label) return type;
  }
  if (label == "5C" || label == "7C" || label == "9C") {
    throw Error(ErrorCategory::parse,
                "water type '" + std::string(label) +
                    "' is excluded (objects are almost invisible); valid types: "
                    "I, IA, IB, II, III, 1C, 3C");
  }
  throw Error(ErrorCategory::parse, "unknown water type '" + std::string(label) +
                                        "'; valid types: I, IA, IB, II, III, 1C, 3C");
}

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::R: return "R";
    case Channel::G: return "G";
    case Channel::B: return "B";
  }
  return "?";
}

SpectralCurve::SpectralCurve(std::vector<double> wavelengths_nm, std::vector<double> values)
    : wavelengths_(std::move(wavelengths_nm)), values_(std::move(values)) {
  if (wavelengths_.size() != values_.size()) {
    throw Error(ErrorCategory::domain, "wavelength and value counts differ");
  }
  if (wavelengths_.size() < 2) {
    throw Error(ErrorCategory::domain, "a spectral curve needs at least two samples");
  }
  for (std::size_t i = 0; i < wavelengths_.size(); ++i) {
    if (!std::isfinite(wavelengths_[i]) || !std::isfinite(values_[i])) {
      throw Error(ErrorCategory::domain, "spectral curve contains non-finite samples");
    }
    if (i > 0 && !(wavelengths_[i] > wavelengths_[i - 1])) {
      throw Error(ErrorCategory::domain, "wavelengths must be strictly increasing");
    }
  }
}

SpectralCurve SpectralCurve::constant(std::span<const double> grid, double value) {
  return SpectralCurve(std::vector<double>(grid.begin(), grid.end()),
                       std::vector<double>(grid.size(), value));
}

double SpectralCurve::evaluate(double wavelength_nm, std::optional<double> outside) const {
  if (wavelength_nm < wavelengths_.front() || wavelength_nm > wavelengths_.back()) {
    if (outside) return *outside;
    return wavelength_nm < wavelengths_.front() ? values_.front() : values_.back();
  }
  const auto it = std::lower_bound(wavelengths_.begin(), wavelengths_.end(), wavelength_nm);
  const auto hi = static_cast<std::size_t>(it - wavelengths_.begin());
  if (wavelengths_[hi] == wavelength_nm) return values_[hi];
  const std::size_t lo = hi - 1;
  const double t = (wavelength_nm - wavelengths_[lo]) / (wavelengths_[hi] - wavelengths_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

SpectralCurve SpectralCurve::resample(std::span<const double> grid,
                                      std::optional<double> outside) const {
  if (std::equal(grid.begin(), grid.end(), wavelengths_.begin(), wavelengths_.end())) {
    return *this;
  }
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = evaluate(grid[i], outside);
  return SpectralCurve(std::vector<double>(grid.begin(), grid.end()), std::move(values));
}

std::vector<double> make_grid(double step_nm) {
  if (!(step_nm > 0.0)) throw Error(ErrorCategory::domain, "grid step must be positive");
  const double span = kBandMaxNm - kBandMinNm;
  const auto intervals = static_cast<std::size_t>(std::llround(span / step_nm));
  if (intervals == 0 || std::abs(intervals * step_nm - span) > kGridTolerance) {
    throw Error(ErrorCategory::domain, "grid step must divide the 400-700 nm band");
  }
  std::vector<double> grid(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) grid[i] = kBandMinNm + i * step_nm;
  grid.back() = kBandMaxNm;
  return grid;
}

SpectralLibrary::SpectralLibrary(std::vector<double> grid,
                                 std::map<WaterType, SpectralCurve> attenuation,
                                 SpectralCurve irradiance, std::vector<CameraResponse> cameras,
                                 std::optional<SpectralCurve> reflectance)
    : grid_(std::move(grid)),
      attenuation_(std::move(attenuation)),
      irradiance_(std::move(irradiance)),
      cameras_(std::move(cameras)) {
  reflectance_ = reflectance ? std::move(*reflectance) : SpectralCurve::constant(grid_, 1.0);
  const auto on_grid = [&](const SpectralCurve& c) {
    return std::equal(grid_.begin(), grid_.end(), c.wavelengths().begin(), c.wavelengths().end());
  };
  for (auto type : kAllWaterTypes) {
    const auto it = attenuation_.find(type);
    if (it == attenuation_.end()) {
      throw Error(ErrorCategory::load,
                  "attenuation data missing water type " + std::string(to_string(type)));
    }
    if (!on_grid(it->second)) {
      throw Error(ErrorCategory::contract, "attenuation curve not on the common grid");
    }
    for (double v : it->second.values()) {
      if (v < 0.0) {
        throw Error(ErrorCategory::load, "negative attenuation for water type " +
                                             std::string(to_string(type)));
      }
    }
  }
  if (cameras_.empty()) throw Error(ErrorCategory::load, "no camera responses loaded");
  if (!on_grid(irradiance_) || !on_grid(reflectance_)) {
    throw Error(ErrorCategory::contract, "irradiance/reflectance not on the common grid");
  }
  std::set<std::string> ids;
  for (const auto& cam : cameras_) {
    if (!ids.insert(cam.id).second) {
      throw Error(ErrorCategory::load, "duplicate camera id '" + cam.id + "'");
    }
    for (const auto& ch : cam.channels) {
      if (!on_grid(ch)) throw Error(ErrorCategory::contract, "camera curve not on the common grid");
    }
  }
}

SpectralLibrary SpectralLibrary::uniform(double beta, double step_nm) {
  auto grid = make_grid(step_nm);
  std::map<WaterType, SpectralCurve> attenuation;
  for (auto type : kAllWaterTypes) attenuation[type] = SpectralCurve::constant(grid, beta);
  // A smooth, distinct response per channel so that nothing about the
  // constant-attenuation results depends on flat weights.
  CameraResponse camera;
  camera.id = "uniform";
  const double centres[3] = {600.0, 540.0, 460.0};
  for (int c = 0; c < 3; ++c) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double z = (grid[i] - centres[c]) / 35.0;
      v[i] = std::exp(-0.5 * z * z);
    }
    camera.channels[c] = SpectralCurve(grid, std::move(v));
  }
  auto irradiance = SpectralCurve::constant(grid, 1.0);
  return SpectralLibrary(std::move(grid), std::move(attenuation), std::move(irradiance),
                         {std::move(camera)});
}

const CameraResponse& SpectralLibrary::camera(std::string_view id) const {
  for (const auto& cam : cameras_) {
    if (cam.id == id) return cam;
  }
  std::string known;
  for (const auto& cam : cameras_) known += (known.empty() ? "" : ", ") + cam.id;
  throw Error(ErrorCategory::lookup,
              "unknown camera '" + std::string(id) + "'; available: " + known);
}

SpectralLibrary load_library(const std::filesystem::path& attenuation_path,
                             const std::filesystem::path& irradiance_path,
                             const std::filesystem::path& cameras_path,
                             const std::optional<std::filesystem::path>& reflectance_path,
                             double grid_step_nm) {
  auto grid = make_grid(grid_step_nm);

  const auto att_table = detail::read_csv(attenuation_path);
  if (att_table.header.empty() || att_table.header[0] != "wavelength_nm") {
    throw ParseError(1, attenuation_path.filename().string() +
                            ": first column must be 'wavelength_nm'");
  }
  std::map<WaterType, SpectralCurve> attenuation;
  for (std::size_t col = 1; col < att_table.header.size(); ++col) {
    const WaterType type = parse_water_type(att_table.header[col]);
    if (attenuation.count(type) != 0) {
      throw ParseError(1, "duplicate water type column " + att_table.header[col]);
    }
    auto curve = column_curve(att_table, col, attenuation_path);
    const std::string what = "attenuation for " + att_table.header[col];
    require_band_coverage(curve, what);
    require_non_negative(curve, what);
    attenuation[type] = curve.resample(grid);
  }

  static constexpr std::string_view kIrradianceHeader[] = {"wavelength_nm", "irradiance"};
  const auto irr_table = detail::read_csv(irradiance_path);
  require_header(irr_table, kIrradianceHeader, irradiance_path);
  auto irradiance = column_curve(irr_table, 1, irradiance_path);
  require_band_coverage(irradiance, "irradiance");
  require_non_negative(irradiance, "irradiance");

  std::optional<SpectralCurve> reflectance;
  if (reflectance_path) {
    static constexpr std::string_view kReflectanceHeader[] = {"wavelength_nm", "reflectance"};
    const auto table = detail::read_csv(*reflectance_path);
    require_header(table, kReflectanceHeader, *reflectance_path);
    auto curve = column_curve(table, 1, *reflectance_path);
    require_band_coverage(curve, "reflectance");
    require_non_negative(curve, "reflectance");
    reflectance = curve.resample(grid);
  }

  auto cameras = load_cameras(cameras_path, grid);
  auto irradiance_on_grid = irradiance.resample(grid);
  return SpectralLibrary(std::move(grid), std::move(attenuation), std::move(irradiance_on_grid),
                         std::move(cameras), std::move(reflectance));
}

SpectralLibrary load_library_dir(const std::filesystem::path& dir, double grid_step_nm) {
  std::optional<std::filesystem::path> reflectance;
  if (std::filesystem::exists(dir / "reflectance.csv")) reflectance = dir / "reflectance.csv";
  return load_library(dir / "jerlov_attenuation.csv", dir / "solar_irradiance.csv",
                      dir / "cameras", reflectance, grid_step_nm);
}

double product_integral(std::span<const SpectralCurve* const> factors,
                        const SpectralCurve* exponent_curve, double exponent_scale) {
  if (factors.empty()) throw Error(ErrorCategory::contract, "product_integral needs factors");
  const SpectralCurve& first = *factors.front();
  for (const auto* f : factors) {
    if (!f->shares_grid(first)) {
      throw Error(ErrorCategory::contract, "product_integral: curves on different grids");
    }
  }
  if (exponent_curve != nullptr && !exponent_curve->shares_grid(first)) {
    throw Error(ErrorCategory::contract, "product_integral: exponent curve on a different grid");
  }
  const auto wl = first.wavelengths();
  const auto sample = [&](std::size_t i) {
    double v = 1.0;
    for (const auto* f : factors) v *= f->values()[i];
    if (exponent_curve != nullptr) v *= std::exp(exponent_scale * exponent_curve->values()[i]);
    return v;
  };
  double total = 0.0;
  double left = sample(0);
  for (std::size_t i = 1; i < wl.size(); ++i) {
    const double right = sample(i);
    total += 0.5 * (wl[i] - wl[i - 1]) * (left + right);
    left = right;
  }
  return total;
}

ChannelIntegrator::ChannelIntegrator(const SpectralLibrary& library, WaterType type,
                                     const CameraResponse& camera, Channel channel)
    : beta_(library.attenuation(type)) {
  const auto sr = camera.channel(channel).values();
  const auto rho = library.reflectance().values();
  const auto theta = library.irradiance().values();
  std::vector<double> w(sr.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = sr[i] * rho[i] * theta[i];
  weight_ = SpectralCurve(std::vector<double>(library.grid().begin(), library.grid().end()),
                          std::move(w));
}

double ChannelIntegrator::attenuated_power(double path_length) const {
  const SpectralCurve* factors[] = {&weight_};
  return product_integral(factors, &beta_, -path_length);
}

namespace {

double log_ratio(double numerator, double denominator) {
  if (!(numerator > 0.0) || !(denominator > 0.0) || !std::isfinite(numerator) ||
      !std::isfinite(denominator)) {
    throw Error(ErrorCategory::numerical,
                "degenerate spectra: attenuation integrals must be positive and finite");
  }
  return std::log(numerator) - std::log(denominator);
}

}  // namespace

double ChannelIntegrator::beta_vert(double d_vert) const {
  if (!(d_vert > 0.0)) throw Error(ErrorCategory::domain, "d_vert must be positive");
  const SpectralCurve* factors[] = {&weight_};
  const double unattenuated = product_integral(factors);
  return std::max(0.0, log_ratio(unattenuated, attenuated_power(d_vert)) / d_vert);
}

double ChannelIntegrator::beta_horiz(double d_vert, double d_horiz) const {
  if (!(d_vert >= 0.0)) throw Error(ErrorCategory::domain, "d_vert must be non-negative");
  if (!(d_horiz > 0.0)) throw Error(ErrorCategory::domain, "d_horiz must be positive");
  return std::max(0.0, log_ratio(attenuated_power(d_vert), attenuated_power(d_vert + d_horiz)) /
                           d_horiz);
}

double effective_beta_vert(const SpectralLibrary& library, WaterType type,
                           const CameraResponse& camera, Channel channel, double d_vert) {
  return ChannelIntegrator(library, type, camera, channel).beta_vert(d_vert);
}

double effective_beta_horiz(const SpectralLibrary& library, WaterType type,
                            const CameraResponse& camera, Channel channel, double d_vert,
                            double d_horiz) {
  return ChannelIntegrator(library, type, camera, channel).beta_horiz(d_vert, d_horiz);
}

}  // namespace uwsynth::spectra
