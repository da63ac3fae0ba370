#pragma once

#include <utility>
#include <vector>

#include "uwsynth/filters.hpp"
#include "uwsynth/image.hpp"
#include "uwsynth/rng.hpp"

namespace uwsynth::marinesnow {

/// Type H ("highland") particles render as Gaussian blobs, type V ("volcanic
/// crater") as their Laplacian-enhanced rims.
enum class SnowKind { H, V };

struct Particle {
  int x = 0;
  int y = 0;
  double distance = 0.0;  // R, metres from the camera
  SnowKind kind = SnowKind::H;

  friend bool operator==(const Particle&, const Particle&) = default;
};

struct ParticleField {
  int width = 0;
  int height = 0;
  std::vector<Particle> particles;
};

/// Distance binning and per-bin rendering parameters for one snow type.
///
/// Bin n (1-based) covers (edges[n-1], edges[n]]; the last bin is open above
/// its lower edge. sigmas/gains hold one entry per bin.
struct DistanceBins {
  std::vector<double> edges;
  std::vector<double> sigmas;  // pixels
  std::vector<double> gains;   // a_n (type H) or a'_n (type V)
  double threshold = 0.0;      // normalised intensity (8-bit value / 255)
  double laplacian_alpha = 0.2;

  std::size_t size() const noexcept { return edges.size(); }
  /// Throws a config error when edges are not strictly increasing, sizes
  /// differ, or any sigma is non-positive.
  void validate() const;
  /// 1-based bin of a particle at distance R > edges.front().
  int bin_of(double distance) const;
  /// Upper bound of the per-bin output of bin n (1-based).
  double saturation(int bin, SnowKind kind) const;
};

DistanceBins default_type_h_bins();
DistanceBins default_type_v_bins();

struct SnowConfig {
  DistanceBins type_h = default_type_h_bins();
  DistanceBins type_v = default_type_v_bins();
  double brightness = 1.0;  // D
  double distance_min = 0.0;    // R sampled in (distance_min, distance_max]
  double distance_max = 256.0;
  double count_h_mean = 40.0;
  double count_h_variance = 5.0;
  double count_v_mean = 30.0;
  double count_v_variance = 5.0;

  void validate() const;
};

/// Merged constants of the simplified direct-scatter model for a particle
/// lit by a light source co-located with the camera.
struct ScatterParams {
  double amplitude = 1.0;     // A
  double focal_length = 0.0;  // F_l, metres
  double beta = 0.0;          // β_c, 1/m
  filters::Kernel psf = filters::gaussian_kernel(1.0);

  void validate() const;
};

/// Irradiance of a particle at distance R:
///   E_d(R) = (A e^{-2βR} / R² * p + A e^{-2βR} / R²) · ((R - F_l) / R)²
/// The convolution acts on a term that is constant over the image, so it
/// contributes the PSF's total weight times that term.
double particle_irradiance(double distance, const ScatterParams& params);

/// Uniformly places `count` particles on distinct pixels with R uniform in
/// (r_min, r_max]. Collisions are redrawn.
ParticleField place_particles(Rng& rng, std::size_t count, int width, int height, double r_min,
                              double r_max, SnowKind kind);

/// Draws (n_H, n_V) from the configured Gaussians, rounded and clamped at 0.
std::pair<std::size_t, std::size_t> sample_particle_counts(Rng& rng, const SnowConfig& config);

struct SparseMask {
  int bin = 0;  // 1-based
  double value = 0.0;
  std::vector<std::pair<int, int>> points;
};

/// Splits the particles into one mask per bin, each point carrying value D.
std::vector<SparseMask> bin_particles(const ParticleField& field, const DistanceBins& bins,
                                      double brightness = 1.0);

struct SnowLayer {
  SnowKind kind = SnowKind::H;
  ImageF values;            // 1 channel, normalised intensity
  double saturation = 0.0;  // upper bound on any value
};

SnowLayer render_type_h(const std::vector<SparseMask>& masks, const DistanceBins& bins, int width,
                        int height);
SnowLayer render_type_v(const std::vector<SparseMask>& masks, const DistanceBins& bins, int width,
                        int height);

/// I_c = clip(U_c + H + V) for every channel.
ImageF composite(const ImageF& base, const SnowLayer& h_layer, const SnowLayer& v_layer);

}  // namespace uwsynth::marinesnow
