#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uwsynth/image.hpp"
#include "uwsynth/manifest.hpp"

namespace uwsynth::metrics {

inline constexpr double kPeak = 255.0;

/// Mean squared error over all samples of two 8-bit images.
double mse(const Image8& a, const Image8& b);
/// 10 log10(255^2 / MSE); +infinity for identical images.
double psnr(const Image8& a, const Image8& b);

/// BT.601 luma on the 0..255 scale, one channel. Grey images pass through.
ImageF luma(const Image8& image);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = kPeak;
};

/// Mean SSIM over every position where the Gaussian window fits.
double ssim(const ImageF& a, const ImageF& b, const SsimParams& params = {});
/// SSIM of the luma planes.
double ssim(const Image8& a, const Image8& b, const SsimParams& params = {});

struct PairMetrics {
  std::string id;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

struct PairFailure {
  std::string id;
  std::string message;
};

struct MetricReport {
  std::vector<PairMetrics> pairs;  // sorted by id
  std::vector<PairFailure> errors;
  std::optional<double> mean_psnr;  // empty when no pair was evaluated
  std::optional<double> mean_ssim;
};

/// Loads each pair relative to `base_dir`. Unreadable pairs go to the error
/// list and are left out of the means.
MetricReport evaluate_pairs(const PairManifest& manifest, const std::filesystem::path& base_dir,
                            int workers = 1);

/// Infinite PSNR is written as the string "inf", missing means as null.
nlohmann::ordered_json report_to_json(const MetricReport& report);
std::string report_to_table(const MetricReport& report);

}  // namespace uwsynth::metrics
