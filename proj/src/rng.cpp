#include "uwsynth/rng.hpp"

#include <cmath>
#include <limits>

namespace uwsynth {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  // Rejection keeps the result unbiased for any n.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % n;
}

double Rng::normal(double mean, double stddev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + stddev * spare_;
  }
  double u = 0.0, v = 0.0, s = 0.0;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return mean + stddev * u * factor;
}

SeedHasher& SeedHasher::add(std::uint64_t value) {
  for (int i = 0; i < 8; ++i) add_byte(static_cast<unsigned char>(value >> (8 * i)));
  return *this;
}

SeedHasher& SeedHasher::add(std::string_view text) {
  add(static_cast<std::uint64_t>(text.size()));
  for (char c : text) add_byte(static_cast<unsigned char>(c));
  return *this;
}

void SeedHasher::add_byte(unsigned char byte) {
  state_ ^= byte;
  state_ *= 0x100000001b3ULL;
}

std::uint64_t SeedHasher::finish() const {
  std::uint64_t z = state_ + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace uwsynth
