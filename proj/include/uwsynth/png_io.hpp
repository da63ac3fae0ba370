#pragma once

#include <filesystem>

#include "uwsynth/image.hpp"

namespace uwsynth::png {

/// Decodes any PNG into 8-bit RGB (palette, grey and alpha are converted,
/// 16-bit samples are reduced to their high byte).
Image8 read_rgb8(const std::filesystem::path& path);

/// Decodes a single-channel PNG, keeping full 16-bit precision. 8-bit grey
/// inputs keep their raw values (0..255), they are not rescaled.
Image16 read_gray16(const std::filesystem::path& path);

/// Encodes 1- or 3-channel 8-bit images.
void write(const std::filesystem::path& path, const Image8& image);
/// Encodes a 1-channel 16-bit image.
void write(const std::filesystem::path& path, const Image16& image);

}  // namespace uwsynth::png
