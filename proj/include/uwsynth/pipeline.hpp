#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uwsynth/colorshift.hpp"
#include "uwsynth/config.hpp"
#include "uwsynth/image.hpp"
#include "uwsynth/manifest.hpp"
#include "uwsynth/marinesnow.hpp"
#include "uwsynth/spectra.hpp"

namespace uwsynth::pipeline {

struct RGBDImage {
  std::string id;
  Image8 rgb;       // 3 channels
  Image16 raw_depth;  // 1 channel, sensor units
};

/// Decodes an RGB/depth PNG pair. With `resolution`, colour is resized
/// bilinearly and depth by nearest neighbour; without it the extents must
/// already match. The id defaults to the RGB file stem.
RGBDImage load_rgbd(const std::filesystem::path& rgb_path,
                    const std::filesystem::path& depth_path,
                    std::optional<std::pair<int, int>> resolution = std::nullopt,
                    std::string id = {});

struct CorpusEntry {
  std::string id;
  std::filesystem::path rgb_path;
  std::filesystem::path depth_path;
};

/// Lists `<dir>/rgb/<id>.png` with matching `<dir>/depth/<id>.png`, sorted by id.
std::vector<CorpusEntry> scan_corpus(const std::filesystem::path& dir);

/// Water types to synthesise for one source image under the config's policy.
std::vector<spectra::WaterType> select_water_types(const GenerationConfig& config,
                                                   std::string_view image_id);

/// Every random quantity of one pair, drawn from its derived seed in a fixed
/// order: scene parameters, particle counts, type-H field, type-V field.
struct PairPlan {
  colorshift::SceneParams scene;
  marinesnow::ParticleField h_particles;
  marinesnow::ParticleField v_particles;
  ManifestRow row;
};

PairPlan plan_pair(std::string_view source_id, const GenerationConfig& config,
                   const spectra::SpectralLibrary& library, spectra::WaterType water_type,
                   std::uint64_t derived_seed);

struct GeneratedPair {
  Image8 clean;
  Image8 degraded;
  ManifestRow row;
  marinesnow::SnowLayer h_layer;
  marinesnow::SnowLayer v_layer;
};

/// Colour shift followed by marine snow; the image must already be at the
/// config resolution.
GeneratedPair generate_pair(const RGBDImage& rgbd, const GenerationConfig& config,
                            const spectra::SpectralLibrary& library,
                            spectra::WaterType water_type, std::uint64_t derived_seed);

inline constexpr std::string_view kManifestFileName = "manifest.jsonl";

struct DatasetOptions {
  std::filesystem::path out_dir;
  int workers = 1;
  /// Called from worker threads (serialised) with one line per finished image.
  std::function<void(const std::string&)> progress;
};

struct DatasetResult {
  PairManifest manifest;
  std::size_t generated = 0;  // pairs rendered in this run
  std::size_t skipped = 0;    // pairs already present and verified
};

/// Renders every selected pair, writing `clean/<id>.png`,
/// `degraded/<id>_<type>.png` and finally `manifest.jsonl`. Pairs whose
/// files already exist and decode at the configured resolution are kept.
DatasetResult generate_dataset(const std::vector<CorpusEntry>& corpus,
                               const GenerationConfig& config,
                               const spectra::SpectralLibrary& library,
                               const DatasetOptions& options);

}  // namespace uwsynth::pipeline
