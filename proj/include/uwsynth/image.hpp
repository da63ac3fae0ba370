#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uwsynth/error.hpp"

namespace uwsynth {

/// Interleaved row-major image with a fixed channel count.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, T fill = T{})
      : width_(width), height_(height), channels_(channels) {
    if (width < 0 || height < 0 || channels <= 0) {
      throw Error(ErrorCategory::contract, "invalid image extent");
    }
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }

  T& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  const T& at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  bool same_extent(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<T> data_;
};

using Image8 = Image<std::uint8_t>;
using Image16 = Image<std::uint16_t>;
/// Real-valued image; colour images hold linear values in [0, 1].
using ImageF = Image<double>;

/// 8-bit to [0, 1] by division by 255.
ImageF to_unit(const Image8& image);
/// [0, 1] to 8-bit: clip, scale by 255, round half up.
Image8 to_8bit(const ImageF& image);

ImageF resize_bilinear(const ImageF& image, int width, int height);
template <typename T>
Image<T> resize_nearest(const Image<T>& image, int width, int height);

extern template Image8 resize_nearest(const Image8&, int, int);
extern template Image16 resize_nearest(const Image16&, int, int);
extern template ImageF resize_nearest(const ImageF&, int, int);

}  // namespace uwsynth
