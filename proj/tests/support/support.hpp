#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "uwsynth/filters.hpp"
#include "uwsynth/image.hpp"

namespace testsupport {

namespace fs = std::filesystem;

/// Fresh directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "uwsynth");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const noexcept { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

fs::path data_dir();
fs::path cli_path();

/// Textured colour image (multi-octave value noise).
uwsynth::Image8 procedural_rgb(int width, int height, std::uint64_t seed);
/// 16-bit depth: a receding floor, a few near objects and a sprinkling of
/// zero-valued holes.
uwsynth::Image16 procedural_depth(int width, int height, std::uint64_t seed);

/// Writes `<dir>/rgb/img_NNN.png` and `<dir>/depth/img_NNN.png`.
std::vector<std::string> write_corpus(const fs::path& dir, int count, int width, int height,
                                      std::uint64_t seed);

std::string read_bytes(const fs::path& path);

// ---- independent oracles ----

/// Raw spectral table: wavelengths plus named columns, read straight from CSV.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // columns[0] = wavelengths
  std::vector<double> column(const std::string& name) const;
};
Table read_table(const fs::path& path);

/// Linear interpolation of (xs, ys) at x; `outside` beyond the samples.
double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x,
              double outside);

struct FineBetas {
  double vert = 0.0;
  double horiz = 0.0;
};

/// Effective attenuation from the raw CSVs with a trapezoid rule at `step`
/// nm over 400-700 nm, camera response zero outside its table.
FineBetas fine_effective_betas(const fs::path& data, const std::string& water_label,
                               const std::string& camera_id, int channel, double d_vert,
                               double d_horiz, double step = 0.5);

/// One pixel of the colour-shift model, written from scalar transmissions.
double observation_oracle(double phi, double background, double beta_vert, double d_vert,
                          double beta_horiz, double d_horiz);

/// E_d built step by step from the un-simplified direct-scatter chain with
/// explicit constants, the convolution done on a constant image.
double irradiance_chain_oracle(double distance, double a_prime, double m, double t_l, double f_n,
                               double focal_length, double beta, double psf_sigma);

/// Direct evaluation of a normalised 2-D Gaussian over a (2r+1)^2 support.
double gaussian_weight(double sigma, int radius, int dx, int dy);

double mse_oracle(const uwsynth::Image8& a, const uwsynth::Image8& b);
/// Window-by-window SSIM on single-channel 0..255 planes.
double ssim_oracle(const uwsynth::ImageF& a, const uwsynth::ImageF& b, int window = 11,
                   double sigma = 1.5);

/// 8-connected components of pixels with value >= threshold.
int count_components(const uwsynth::ImageF& layer, double threshold);

}  // namespace testsupport
