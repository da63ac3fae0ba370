#include "uwsynth/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

#include "uwsynth/png_io.hpp"

namespace uwsynth::metrics {
namespace {

void require_same_shape(const Image8& a, const Image8& b) {
  if (!a.same_extent(b) || a.channels() != b.channels()) {
    throw Error(ErrorCategory::contract, "images differ in extent or channel count");
  }
}

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> w(static_cast<std::size_t>(size));
  const double centre = (size - 1) / 2.0;
  double total = 0.0;
  for (int i = 0; i < size; ++i) {
    w[i] = std::exp(-(i - centre) * (i - centre) / (2.0 * sigma * sigma));
    total += w[i];
  }
  for (auto& v : w) v /= total;
  return w;
}

// Separable weighted sum over every fully contained window position.
std::vector<double> filter_valid(const std::vector<double>& src, int width, int height,
                                 const std::vector<double>& w) {
  const int n = static_cast<int>(w.size());
  const int out_w = width - n + 1;
  const int out_h = height - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(out_w) * height);
  for (int y = 0; y < height; ++y) {
    const double* line = src.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += w[k] * line[x + k];
      rows[static_cast<std::size_t>(y) * out_w + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(out_w) * out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += w[k] * rows[static_cast<std::size_t>(y + k) * out_w + x];
      out[static_cast<std::size_t>(y) * out_w + x] = acc;
    }
  }
  return out;
}

std::string format_psnr(double value) {
  if (std::isinf(value)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

}  // namespace

double mse(const Image8& a, const Image8& b) {
  require_same_shape(a, b);
  const auto da = a.data();
  const auto db = b.data();
  if (da.empty()) throw Error(ErrorCategory::contract, "empty image");
  double sum = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - db[i];
    sum += d * d;
  }
  return sum / static_cast<double>(da.size());
}

double psnr(const Image8& a, const Image8& b) {
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPeak * kPeak / e);
}

ImageF luma(const Image8& image) {
  ImageF out(image.width(), image.height(), 1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (image.channels() < 3) {
        out.at(x, y) = image.at(x, y, 0);
      } else {
        out.at(x, y) = 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) +
                       0.114 * image.at(x, y, 2);
      }
    }
  }
  return out;
}

double ssim(const ImageF& a, const ImageF& b, const SsimParams& params) {
  if (!a.same_extent(b) || a.channels() != 1 || b.channels() != 1) {
    throw Error(ErrorCategory::contract, "SSIM needs two single-channel images of equal extent");
  }
  if (params.window < 1 || params.sigma <= 0.0) {
    throw Error(ErrorCategory::contract, "invalid SSIM window");
  }
  const int width = a.width();
  const int height = a.height();
  if (width < params.window || height < params.window) {
    throw Error(ErrorCategory::contract, "image is smaller than the " +
                                             std::to_string(params.window) + "x" +
                                             std::to_string(params.window) + " SSIM window");
  }
  const std::size_t n = a.pixel_count();
  std::vector<double> x(a.data().begin(), a.data().end());
  std::vector<double> y(b.data().begin(), b.data().end());
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto w = gaussian_window(params.window, params.sigma);
  const auto mu_x = filter_valid(x, width, height, w);
  const auto mu_y = filter_valid(y, width, height, w);
  const auto m_xx = filter_valid(xx, width, height, w);
  const auto m_yy = filter_valid(yy, width, height, w);
  const auto m_xy = filter_valid(xy, width, height, w);

  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double vx = m_xx[i] - mx * mx;
    const double vy = m_yy[i] - my * my;
    const double cov = m_xy[i] - mx * my;
    total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mu_x.size());
}

double ssim(const Image8& a, const Image8& b, const SsimParams& params) {
  require_same_shape(a, b);
  return ssim(luma(a), luma(b), params);
}

MetricReport evaluate_pairs(const PairManifest& manifest, const std::filesystem::path& base_dir,
                            int workers) {
  struct Slot {
    std::optional<PairMetrics> metrics;
    std::string error;
  };
  std::vector<ManifestRow> rows = manifest.rows;
  std::sort(rows.begin(), rows.end(),
            [](const ManifestRow& l, const ManifestRow& r) { return l.id < r.id; });
  std::vector<Slot> slots(rows.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      const auto& row = rows[i];
      try {
        const Image8 clean = png::read_rgb8(base_dir / row.clean_path);
        const Image8 degraded = png::read_rgb8(base_dir / row.degraded_path);
        if (!clean.same_extent(degraded)) {
          throw Error(ErrorCategory::validation, "clean and degraded extents differ");
        }
        slots[i].metrics = PairMetrics{row.id, psnr(clean, degraded), ssim(clean, degraded)};
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    }
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(rows.size())));
  std::vector<std::thread> threads;
  for (int t = 1; t < count; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  MetricReport report;
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (slots[i].metrics) {
      psnr_sum += slots[i].metrics->psnr_db;
      ssim_sum += slots[i].metrics->ssim;
      report.pairs.push_back(*slots[i].metrics);
    } else {
      report.errors.push_back({rows[i].id, slots[i].error});
    }
  }
  if (!report.pairs.empty()) {
    const auto n = static_cast<double>(report.pairs.size());
    report.mean_psnr = psnr_sum / n;
    report.mean_ssim = ssim_sum / n;
  }
  return report;
}

nlohmann::ordered_json report_to_json(const MetricReport& report) {
  using nlohmann::ordered_json;
  const auto psnr_value = [](double v) -> ordered_json {
    return std::isinf(v) ? ordered_json("inf") : ordered_json(v);
  };
  ordered_json pairs = ordered_json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"id", p.id}, {"psnr_db", psnr_value(p.psnr_db)}, {"ssim", p.ssim}});
  }
  ordered_json errors = ordered_json::array();
  for (const auto& e : report.errors) errors.push_back({{"id", e.id}, {"error", e.message}});
  ordered_json doc;
  doc["pairs"] = std::move(pairs);
  doc["errors"] = std::move(errors);
  doc["mean"] = {
      {"psnr_db", report.mean_psnr ? psnr_value(*report.mean_psnr) : ordered_json(nullptr)},
      {"ssim", report.mean_ssim ? ordered_json(*report.mean_ssim) : ordered_json(nullptr)}};
  doc["count"] = report.pairs.size();
  doc["error_count"] = report.errors.size();
  return doc;
}

std::string report_to_table(const MetricReport& report) {
  std::size_t id_width = 4;
  for (const auto& p : report.pairs) id_width = std::max(id_width, p.id.size());
  for (const auto& e : report.errors) id_width = std::max(id_width, e.id.size());
  const int w = static_cast<int>(id_width);

  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %10s  %8s\n", w, "pair", "psnr_db", "ssim");
  out << line;
  for (const auto& p : report.pairs) {
    std::snprintf(line, sizeof line, "%-*s  %10s  %8.4f\n", w, p.id.c_str(),
                  format_psnr(p.psnr_db).c_str(), p.ssim);
    out << line;
  }
  if (report.mean_psnr) {
    std::snprintf(line, sizeof line, "%-*s  %10s  %8.4f\n", w, "mean",
                  format_psnr(*report.mean_psnr).c_str(), *report.mean_ssim);
  } else {
    std::snprintf(line, sizeof line, "%-*s  %10s  %8s\n", w, "mean", "-", "-");
  }
  out << line;
  for (const auto& e : report.errors) {
    out << "error " << e.id << ": " << e.message << '\n';
  }
  return out.str();
}

}  // namespace uwsynth::metrics
