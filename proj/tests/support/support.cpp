#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "uwsynth/png_io.hpp"
#include "uwsynth/rng.hpp"

namespace testsupport {

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  const auto base = fs::temp_directory_path();
  for (;;) {
    path_ = base / (tag + "-" + std::to_string(rd()) + "-" + std::to_string(++counter));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path data_dir() { return UWSYNTH_TEST_DATA_DIR; }
fs::path cli_path() { return UWSYNTH_TEST_CLI; }

namespace {

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Value noise on a lattice of `cell` pixels.
std::vector<double> value_noise(int width, int height, int cell, uwsynth::Rng& rng) {
  const int gw = width / cell + 2;
  const int gh = height / cell + 2;
  std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
  for (auto& v : lattice) v = rng.uniform01();
  std::vector<double> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double fx = static_cast<double>(x) / cell;
      const double fy = static_cast<double>(y) / cell;
      const int ix = static_cast<int>(fx);
      const int iy = static_cast<int>(fy);
      const double tx = smoothstep(fx - ix);
      const double ty = smoothstep(fy - iy);
      const auto g = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * gw + i]; };
      const double top = g(ix, iy) + tx * (g(ix + 1, iy) - g(ix, iy));
      const double bottom = g(ix, iy + 1) + tx * (g(ix + 1, iy + 1) - g(ix, iy + 1));
      out[static_cast<std::size_t>(y) * width + x] = top + ty * (bottom - top);
    }
  }
  return out;
}

}  // namespace

uwsynth::Image8 procedural_rgb(int width, int height, std::uint64_t seed) {
  uwsynth::Rng rng(seed);
  uwsynth::Image8 out(width, height, 3);
  for (int c = 0; c < 3; ++c) {
    std::vector<double> acc(static_cast<std::size_t>(width) * height, 0.0);
    double amplitude = 0.5;
    for (int cell : {64, 16, 4, 2}) {
      const auto octave = value_noise(width, height, cell, rng);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += amplitude * octave[i];
      amplitude *= 0.5;
    }
    const double lift = rng.uniform(0.05, 0.2);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double v = std::clamp(lift + acc[static_cast<std::size_t>(y) * width + x] * 1.1,
                                    0.0, 1.0);
        out.at(x, y, c) = static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
    }
  }
  return out;
}

uwsynth::Image16 procedural_depth(int width, int height, std::uint64_t seed) {
  uwsynth::Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const auto ripple = value_noise(width, height, 32, rng);
  struct Blob {
    double cx, cy, r, depth;
  };
  std::vector<Blob> blobs;
  for (int i = 0; i < 4; ++i) {
    blobs.push_back({rng.uniform(0, width), rng.uniform(height * 0.3, height),
                     rng.uniform(0.05, 0.2) * width, rng.uniform(600, 2500)});
  }
  uwsynth::Image16 out(width, height, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      // Far at the top, near at the bottom.
      const double t = static_cast<double>(y) / std::max(1, height - 1);
      double d = 12000.0 - 10500.0 * t + 600.0 * ripple[static_cast<std::size_t>(y) * width + x];
      for (const auto& b : blobs) {
        if (std::hypot(x - b.cx, y - b.cy) < b.r) d = std::min(d, b.depth);
      }
      out.at(x, y) = static_cast<std::uint16_t>(std::clamp(d, 1.0, 65535.0));
    }
  }
  const int holes = std::max(1, width * height / 400);
  for (int i = 0; i < holes; ++i) {
    out.at(static_cast<int>(rng.uniform_index(width)), static_cast<int>(rng.uniform_index(height))) =
        0;
  }
  return out;
}

std::vector<std::string> write_corpus(const fs::path& dir, int count, int width, int height,
                                      std::uint64_t seed) {
  fs::create_directories(dir / "rgb");
  fs::create_directories(dir / "depth");
  std::vector<std::string> ids;
  for (int i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "img_%03d", i);
    uwsynth::png::write(dir / "rgb" / (std::string(id) + ".png"),
                        procedural_rgb(width, height, seed + 2 * i));
    uwsynth::png::write(dir / "depth" / (std::string(id) + ".png"),
                        procedural_depth(width, height, seed + 2 * i + 1));
    ids.emplace_back(id);
  }
  return ids;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<double> Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  throw std::runtime_error("no column " + name);
}

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Table table;
  std::string line;
  std::getline(in, line);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) table.header.push_back(cell);
  table.columns.resize(table.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t i = 0;
    for (std::string cell; std::getline(ls, cell, ',');) table.columns.at(i++).push_back(std::stod(cell));
  }
  return table;
}

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x,
              double outside) {
  if (x < xs.front() || x > xs.back()) return outside;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (x <= xs[i]) {
      const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
      return ys[i - 1] + t * (ys[i] - ys[i - 1]);
    }
  }
  return ys.back();
}

FineBetas fine_effective_betas(const fs::path& data, const std::string& water_label,
                               const std::string& camera_id, int channel, double d_vert,
                               double d_horiz, double step) {
  const Table att = read_table(data / "jerlov_attenuation.csv");
  const Table sun = read_table(data / "solar_irradiance.csv");
  const Table cam = read_table(data / "cameras" / (camera_id + ".csv"));
  const auto beta = att.column(water_label);
  const auto irr = sun.column("irradiance");
  const auto resp = cam.column(std::string(1, "rgb"[channel]));

  const int n = static_cast<int>(std::lround(300.0 / step));
  double p0 = 0.0, pv = 0.0, pvh = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wl = 400.0 + i * step;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    const double s = interp(cam.columns[0], resp, wl, 0.0) * interp(sun.columns[0], irr, wl, 0.0);
    const double b = interp(att.columns[0], beta, wl, 0.0);
    p0 += w * s;
    pv += w * s * std::exp(-b * d_vert);
    pvh += w * s * std::exp(-b * (d_vert + d_horiz));
  }
  return {std::log(p0 / pv) / d_vert, std::log(pv / pvh) / d_horiz};
}

double observation_oracle(double phi, double background, double beta_vert, double d_vert,
                          double beta_horiz, double d_horiz) {
  const double t_v = std::exp(-beta_vert * d_vert);
  const double t_h = std::exp(-beta_horiz * d_horiz);
  const double u = t_v * phi * t_h + t_v * background * (1.0 - t_h);
  return std::min(1.0, std::max(0.0, u));
}

double irradiance_chain_oracle(double distance, double a_prime, double m, double t_l, double f_n,
                               double focal_length, double beta, double psf_sigma) {
  const double r = distance;
  // Incident irradiance with cos(gamma) = 1, before forward scatter.
  const double incident = a_prime * std::exp(-beta * r) / (r * r);
  // Convolve the (spatially constant) incident field with the PSF and read
  // the centre of the image.
  const int radius = static_cast<int>(std::ceil(4.0 * psf_sigma));
  const int side = 4 * radius + 1;
  double total = 0.0;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) total += gaussian_weight(psf_sigma, radius, dx, dy);
  }
  std::vector<double> field(static_cast<std::size_t>(side) * side, incident);
  double convolved = 0.0;
  const int c = side / 2;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      convolved += gaussian_weight(psf_sigma, radius, dx, dy) / total *
                   field[static_cast<std::size_t>(c + dy) * side + (c + dx)];
    }
  }
  const double e_i = convolved + incident;
  // theta = 0: cos^4 = 1.
  const double defocus = std::pow((r - focal_length) / r, 2);
  return e_i * std::exp(-beta * r) * m * (1.0 * t_l / (4.0 * f_n)) * defocus;
}

double gaussian_weight(double sigma, int radius, int dx, int dy) {
  double total = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    for (int i = -radius; i <= radius; ++i) total += std::exp(-(i * i + j * j) / (2 * sigma * sigma));
  }
  return std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)) / total;
}

double mse_oracle(const uwsynth::Image8& a, const uwsynth::Image8& b) {
  double sum = 0.0;
  long count = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      for (int c = 0; c < a.channels(); ++c) {
        const double d = double(a.at(x, y, c)) - double(b.at(x, y, c));
        sum += d * d;
        ++count;
      }
    }
  }
  return sum / count;
}

double ssim_oracle(const uwsynth::ImageF& a, const uwsynth::ImageF& b, int window, double sigma) {
  const double c1 = std::pow(0.01 * 255, 2);
  const double c2 = std::pow(0.03 * 255, 2);
  std::vector<double> w(static_cast<std::size_t>(window) * window);
  double wsum = 0.0;
  const double mid = (window - 1) / 2.0;
  for (int j = 0; j < window; ++j) {
    for (int i = 0; i < window; ++i) {
      const double v = std::exp(-((i - mid) * (i - mid) + (j - mid) * (j - mid)) / (2 * sigma * sigma));
      w[static_cast<std::size_t>(j) * window + i] = v;
      wsum += v;
    }
  }
  for (auto& v : w) v /= wsum;
  double total = 0.0;
  int count = 0;
  for (int y0 = 0; y0 + window <= a.height(); ++y0) {
    for (int x0 = 0; x0 + window <= a.width(); ++x0) {
      double mx = 0, my = 0;
      for (int j = 0; j < window; ++j) {
        for (int i = 0; i < window; ++i) {
          const double wt = w[static_cast<std::size_t>(j) * window + i];
          mx += wt * a.at(x0 + i, y0 + j);
          my += wt * b.at(x0 + i, y0 + j);
        }
      }
      double vx = 0, vy = 0, cov = 0;
      for (int j = 0; j < window; ++j) {
        for (int i = 0; i < window; ++i) {
          const double wt = w[static_cast<std::size_t>(j) * window + i];
          const double dx = a.at(x0 + i, y0 + j) - mx;
          const double dy = b.at(x0 + i, y0 + j) - my;
          vx += wt * dx * dx;
          vy += wt * dy * dy;
          cov += wt * dx * dy;
        }
      }
      total += (2 * mx * my + c1) * (2 * cov + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / count;
}

int count_components(const uwsynth::ImageF& layer, double threshold) {
  const int w = layer.width();
  const int h = layer.height();
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  int components = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (seen[static_cast<std::size_t>(y) * w + x] || layer.at(x, y) < threshold) continue;
      ++components;
      stack.assign(1, {x, y});
      seen[static_cast<std::size_t>(y) * w + x] = 1;
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            auto& s = seen[static_cast<std::size_t>(ny) * w + nx];
            if (s || layer.at(nx, ny) < threshold) continue;
            s = 1;
            stack.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  return components;
}

}  // namespace testsupport
