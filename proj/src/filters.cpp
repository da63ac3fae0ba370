#include "uwsynth/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace uwsynth::filters {

double Kernel::sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

int gaussian_radius(double sigma) { return static_cast<int>(std::ceil(4.0 * sigma)); }

Kernel gaussian_kernel(double sigma) { return gaussian_kernel(sigma, gaussian_radius(sigma)); }

Kernel gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0.0) || radius < 0) {
    throw Error(ErrorCategory::domain, "Gaussian kernel needs sigma > 0");
  }
  // Separable: normalised 1-D profile, outer product.
  std::vector<double> profile(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) {
    profile[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
  }
  const double norm = std::accumulate(profile.begin(), profile.end(), 0.0);
  for (double& v : profile) v /= norm;

  Kernel kernel{radius, std::vector<double>(profile.size() * profile.size())};
  for (std::size_t y = 0; y < profile.size(); ++y) {
    for (std::size_t x = 0; x < profile.size(); ++x) {
      kernel.weights[y * profile.size() + x] = profile[y] * profile[x];
    }
  }
  return kernel;
}

Kernel laplacian_kernel(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCategory::domain, "Laplacian shape parameter must lie in [0, 1]");
  }
  const double scale = 4.0 / (alpha + 1.0);
  const double corner = scale * alpha / 4.0;
  const double edge = scale * (1.0 - alpha) / 4.0;
  return Kernel{1, {corner, edge, corner, edge, -scale, edge, corner, edge, corner}};
}

void stamp(ImageF& target, const Kernel& kernel, int x, int y, double value) {
  const int r = kernel.radius;
  const int y0 = std::max(0, y - r), y1 = std::min(target.height() - 1, y + r);
  const int x0 = std::max(0, x - r), x1 = std::min(target.width() - 1, x + r);
  for (int yy = y0; yy <= y1; ++yy) {
    for (int xx = x0; xx <= x1; ++xx) {
      target.at(xx, yy) += value * kernel.at(xx - x, yy - y);
    }
  }
}

ImageF convolve(const ImageF& image, const Kernel& kernel) {
  if (image.channels() != 1) throw Error(ErrorCategory::contract, "convolve expects 1 channel");
  ImageF out(image.width(), image.height(), 1);
  const int r = kernel.radius;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= image.height()) continue;
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= image.width()) continue;
          acc += kernel.at(dx, dy) * image.at(xx, yy);
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

}  // namespace uwsynth::filters
