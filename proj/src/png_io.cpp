#include "uwsynth/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace uwsynth::png {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void on_png_error(png_structp png_ptr, png_const_charp msg) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png_ptr));
  if (text != nullptr) *text = msg;
  longjmp(png_jmpbuf(png_ptr), 1);
}

void on_png_warning(png_structp, png_const_charp) {}

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path) {
    file_.reset(std::fopen(path.c_str(), "rb"));
    if (!file_) fail("cannot open file");
    png_byte signature[8] = {};
    if (std::fread(signature, 1, 8, file_.get()) != 8 ||
        png_sig_cmp(signature, 0, 8) != 0) {
      fail("not a PNG file");
    }
    png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message_, on_png_error,
                                  on_png_warning);
    if (png_ == nullptr) fail("libpng initialisation failed");
    info_ = png_create_info_struct(png_);
    if (info_ == nullptr) fail("libpng initialisation failed");
  }

  ~Reader() { png_destroy_read_struct(&png_, &info_, nullptr); }

  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCategory::ingest, "cannot decode '" + path_.string() + "': " + why);
  }

  png_structp png() { return png_; }
  png_infop info() { return info_; }
  std::FILE* file() { return file_.get(); }
  const std::string& message() const { return message_; }

 private:
  std::filesystem::path path_;
  FilePtr file_;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
  std::string message_;
};

// Runs the common decode sequence. `configure` applies libpng transforms and
// returns the expected channel count after them.
template <typename Sample, typename Configure>
Image<Sample> decode(const std::filesystem::path& path, Configure configure) {
  Reader reader(path);
  Image<Sample> image;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(reader.png()))) {
    reader.fail(reader.message().empty() ? "corrupt data" : reader.message());
  }
  png_init_io(reader.png(), reader.file());
  png_set_sig_bytes(reader.png(), 8);
  png_read_info(reader.png(), reader.info());

  const int channels = configure(reader);
  png_read_update_info(reader.png(), reader.info());

  const auto width = png_get_image_width(reader.png(), reader.info());
  const auto height = png_get_image_height(reader.png(), reader.info());
  if (png_get_channels(reader.png(), reader.info()) != channels ||
      png_get_rowbytes(reader.png(), reader.info()) != width * channels * sizeof(Sample)) {
    reader.fail("unexpected sample layout");
  }
  image = Image<Sample>(static_cast<int>(width), static_cast<int>(height), channels);
  rows.resize(height);
  auto* base = reinterpret_cast<png_bytep>(image.data().data());
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = base + static_cast<std::size_t>(y) * width * channels * sizeof(Sample);
  }
  png_read_image(reader.png(), rows.data());
  png_read_end(reader.png(), nullptr);
  return image;
}

bool little_endian_host() {
  const std::uint16_t probe = 1;
  return *reinterpret_cast<const std::uint8_t*>(&probe) == 1;
}

template <typename Sample>
void encode(const std::filesystem::path& path, const Image<Sample>& image,
            int color_type) {
  const auto fail = [&](const std::string& why) {
    throw Error(ErrorCategory::io, "cannot write '" + path.string() + "': " + why);
  };
  if (image.empty()) fail("empty image");
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) fail("cannot open for writing");

  std::string message;
  png_structp png_ptr = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message,
                                                on_png_error, on_png_warning);
  png_infop info_ptr = png_ptr ? png_create_info_struct(png_ptr) : nullptr;
  if (info_ptr == nullptr) {
    png_destroy_write_struct(&png_ptr, nullptr);
    fail("libpng initialisation failed");
  }
  std::vector<png_bytep> rows(image.height());
  volatile bool ok = false;
  if (setjmp(png_jmpbuf(png_ptr)) == 0) {
    png_init_io(png_ptr, file.get());
    png_set_compression_level(png_ptr, 3);
    png_set_IHDR(png_ptr, info_ptr, image.width(), image.height(),
                 sizeof(Sample) * 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png_ptr, info_ptr);
    if (sizeof(Sample) == 2 && little_endian_host()) png_set_swap(png_ptr);
    auto* base = reinterpret_cast<png_bytep>(const_cast<Sample*>(image.data().data()));
    const std::size_t stride =
        static_cast<std::size_t>(image.width()) * image.channels() * sizeof(Sample);
    for (int y = 0; y < image.height(); ++y) rows[y] = base + y * stride;
    png_write_image(png_ptr, rows.data());
    png_write_end(png_ptr, nullptr);
    ok = true;
  }
  png_destroy_write_struct(&png_ptr, &info_ptr);
  if (!ok) fail(message.empty() ? "encoder error" : message);
  if (std::fflush(file.get()) != 0) fail("flush failed");
}

int probe_bit_depth(const std::filesystem::path& path) {
  Reader reader(path);
  if (setjmp(png_jmpbuf(reader.png()))) {
    reader.fail(reader.message().empty() ? "corrupt header" : reader.message());
  }
  png_init_io(reader.png(), reader.file());
  png_set_sig_bytes(reader.png(), 8);
  png_read_info(reader.png(), reader.info());
  return png_get_bit_depth(reader.png(), reader.info());
}

void require_gray(Reader& r) {
  const int color = png_get_color_type(r.png(), r.info());
  if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_GRAY_ALPHA) {
    r.fail("depth map must be a single-channel (grey) PNG");
  }
  if (color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_strip_alpha(r.png());
}

}  // namespace

Image8 read_rgb8(const std::filesystem::path& path) {
  return decode<std::uint8_t>(path, [](Reader& r) {
    const int color = png_get_color_type(r.png(), r.info());
    const int depth = png_get_bit_depth(r.png(), r.info());
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png());
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(r.png());
    if (png_get_valid(r.png(), r.info(), PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png());
    if (depth == 16) png_set_strip_16(r.png());
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(r.png());
    }
    png_set_strip_alpha(r.png());
    return 3;
  });
}

Image16 read_gray16(const std::filesystem::path& path) {
  if (probe_bit_depth(path) == 16) {
    return decode<std::uint16_t>(path, [](Reader& r) {
      require_gray(r);
      if (little_endian_host()) png_set_swap(r.png());
      return 1;
    });
  }
  const Image8 narrow = decode<std::uint8_t>(path, [](Reader& r) {
    require_gray(r);
    if (png_get_bit_depth(r.png(), r.info()) < 8) png_set_expand_gray_1_2_4_to_8(r.png());
    return 1;
  });
  Image16 wide(narrow.width(), narrow.height(), 1);
  std::copy(narrow.data().begin(), narrow.data().end(), wide.data().begin());
  return wide;
}

void write(const std::filesystem::path& path, const Image8& image) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw Error(ErrorCategory::contract, "PNG writer supports 1 or 3 channels");
  }
  encode(path, image, image.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB);
}

void write(const std::filesystem::path& path, const Image16& image) {
  if (image.channels() != 1) {
    throw Error(ErrorCategory::contract, "16-bit PNG writer supports 1 channel");
  }
  encode(path, image, PNG_COLOR_TYPE_GRAY);
}

}  // namespace uwsynth::png
