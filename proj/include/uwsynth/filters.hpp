#pragma once

#include <vector>

#include "uwsynth/image.hpp"

namespace uwsynth::filters {

/// Square 2-D kernel of side 2 * radius + 1, row-major.
struct Kernel {
  int radius = 0;
  std::vector<double> weights;

  int side() const noexcept { return 2 * radius + 1; }
  double at(int dx, int dy) const {
    return weights[static_cast<std::size_t>(dy + radius) * side() + (dx + radius)];
  }
  double sum() const;
};

/// Truncation radius used for Gaussian kernels: ceil(4 sigma).
int gaussian_radius(double sigma);

/// Sampled 2-D Gaussian normalised to unit sum over its support.
Kernel gaussian_kernel(double sigma);
Kernel gaussian_kernel(double sigma, int radius);

/// 3x3 Laplacian stencil with shape parameter alpha in [0, 1]: alpha = 0 is
/// the 5-point stencil, alpha = 1 weights the diagonals equally. Centre
/// weight is -4 / (alpha + 1); weights sum to zero.
Kernel laplacian_kernel(double alpha);

/// Adds value * kernel centred at (x, y) into a 1-channel image; parts of
/// the kernel outside the image are dropped (zero padding).
void stamp(ImageF& target, const Kernel& kernel, int x, int y, double value);

/// Zero-padded 2-D correlation of a 1-channel image (kernels used here are
/// symmetric, so this equals convolution).
ImageF convolve(const ImageF& image, const Kernel& kernel);

}  // namespace uwsynth::filters
