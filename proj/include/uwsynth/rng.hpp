#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace uwsynth {

/// Seeded random source with platform-stable draws.
///
/// std::mt19937_64 has a fully specified output sequence, but the standard
/// distributions do not, so the value transforms below are written out to
/// keep (seed -> output bytes) identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Normal variate via the Marsaglia polar method.
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Stable 64-bit mixing hash (FNV-1a over the bytes, splitmix64 finalizer).
/// Used for derived per-task seeds; never changes between releases.
class SeedHasher {
 public:
  explicit SeedHasher(std::uint64_t seed) { add(seed); }

  SeedHasher& add(std::uint64_t value);
  SeedHasher& add(std::string_view text);

  std::uint64_t finish() const;

 private:
  void add_byte(unsigned char byte);

  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace uwsynth
