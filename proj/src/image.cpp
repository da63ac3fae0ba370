#include "uwsynth/image.hpp"

#include <algorithm>
#include <cmath>

namespace uwsynth {

ImageF to_unit(const Image8& image) {
  ImageF out(image.width(), image.height(), image.channels());
  auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / 255.0;
  return out;
}

Image8 to_8bit(const ImageF& image) {
  Image8 out(image.width(), image.height(), image.channels());
  auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = std::clamp(src[i], 0.0, 1.0);
    dst[i] = static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
  }
  return out;
}

// Pixel-centre aligned sampling, clamped at the borders.
ImageF resize_bilinear(const ImageF& image, int width, int height) {
  if (image.width() == width && image.height() == height) return image;
  if (image.empty() || width <= 0 || height <= 0) {
    throw Error(ErrorCategory::contract, "cannot resize an empty image");
  }
  ImageF out(width, height, image.channels());
  const double sx = static_cast<double>(image.width()) / width;
  const double sy = static_cast<double>(image.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const double wx = fx - x0;
      for (int c = 0; c < image.channels(); ++c) {
        const double top = image.at(x0, y0, c) * (1 - wx) + image.at(x1, y0, c) * wx;
        const double bottom = image.at(x0, y1, c) * (1 - wx) + image.at(x1, y1, c) * wx;
        out.at(x, y, c) = top * (1 - wy) + bottom * wy;
      }
    }
  }
  return out;
}

template <typename T>
Image<T> resize_nearest(const Image<T>& image, int width, int height) {
  if (image.width() == width && image.height() == height) return image;
  if (image.empty() || width <= 0 || height <= 0) {
    throw Error(ErrorCategory::contract, "cannot resize an empty image");
  }
  Image<T> out(width, height, image.channels());
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(static_cast<int>((y + 0.5) * image.height() / height),
                            image.height() - 1);
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(static_cast<int>((x + 0.5) * image.width() / width),
                              image.width() - 1);
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = image.at(sx, sy, c);
    }
  }
  return out;
}

template Image8 resize_nearest(const Image8&, int, int);
template Image16 resize_nearest(const Image16&, int, int);
template ImageF resize_nearest(const ImageF&, int, int);

}  // namespace uwsynth
