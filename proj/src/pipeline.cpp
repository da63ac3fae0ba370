#include "uwsynth/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "uwsynth/png_io.hpp"

namespace uwsynth::pipeline {
namespace fs = std::filesystem;
namespace {

std::string clean_rel_path(std::string_view source_id) {
  return "clean/" + std::string(source_id) + ".png";
}

std::string pair_id(std::string_view source_id, spectra::WaterType type) {
  return std::string(source_id) + "_" + std::string(spectra::to_string(type));
}

std::string degraded_rel_path(std::string_view source_id, spectra::WaterType type) {
  return "degraded/" + pair_id(source_id, type) + ".png";
}

void write_png_atomic(const fs::path& path, const Image8& image) {
  auto tmp = path;
  tmp += ".tmp";
  png::write(tmp, image);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCategory::io, "cannot rename onto '" + path.string() + "'");
}

// An existing output counts as done when it decodes at the expected extent.
bool verified(const fs::path& path, const GenerationConfig& config) {
  if (!fs::is_regular_file(path)) return false;
  try {
    const Image8 image = png::read_rgb8(path);
    return image.width() == config.width && image.height() == config.height;
  } catch (const Error&) {
    return false;
  }
}

void ensure_writable(const fs::path& out_dir) {
  std::error_code ec;
  for (const auto& dir : {out_dir, out_dir / "clean", out_dir / "degraded"}) {
    fs::create_directories(dir, ec);
    if (ec) {
      throw Error(ErrorCategory::io, "cannot create '" + dir.string() + "': " + ec.message());
    }
  }
  const fs::path probe = out_dir / ".uwsynth-write-probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "probe")) {
      throw Error(ErrorCategory::io, "output directory '" + out_dir.string() + "' is not writable");
    }
  }
  fs::remove(probe, ec);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

RGBDImage load_rgbd(const fs::path& rgb_path, const fs::path& depth_path,
                    std::optional<std::pair<int, int>> resolution, std::string id) {
  for (const auto& p : {rgb_path, depth_path}) {
    if (!fs::exists(p)) throw Error(ErrorCategory::ingest, "missing input file '" + p.string() + "'");
  }
  RGBDImage out;
  out.id = id.empty() ? rgb_path.stem().string() : std::move(id);
  out.rgb = png::read_rgb8(rgb_path);
  out.raw_depth = png::read_gray16(depth_path);
  if (resolution) {
    const auto [w, h] = *resolution;
    if (w <= 0 || h <= 0) throw Error(ErrorCategory::config, "resolution must be positive");
    if (out.rgb.width() != w || out.rgb.height() != h) {
      out.rgb = to_8bit(resize_bilinear(to_unit(out.rgb), w, h));
    }
    out.raw_depth = resize_nearest(out.raw_depth, w, h);
  }
  if (!out.rgb.same_extent(out.raw_depth)) {
    throw Error(ErrorCategory::ingest,
                "extent mismatch for '" + out.id + "': rgb " + std::to_string(out.rgb.width()) +
                    "x" + std::to_string(out.rgb.height()) + ", depth " +
                    std::to_string(out.raw_depth.width()) + "x" +
                    std::to_string(out.raw_depth.height()));
  }
  return out;
}

std::vector<CorpusEntry> scan_corpus(const fs::path& dir) {
  const fs::path rgb_dir = dir / "rgb";
  const fs::path depth_dir = dir / "depth";
  if (!fs::is_directory(rgb_dir)) {
    throw Error(ErrorCategory::ingest, "corpus '" + dir.string() + "' has no rgb/ directory");
  }
  std::vector<CorpusEntry> corpus;
  for (const auto& entry : fs::directory_iterator(rgb_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    const std::string id = entry.path().stem().string();
    const fs::path depth = depth_dir / (id + ".png");
    if (!fs::exists(depth)) {
      throw Error(ErrorCategory::ingest, "missing depth map '" + depth.string() + "'");
    }
    corpus.push_back({id, entry.path(), depth});
  }
  std::sort(corpus.begin(), corpus.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
  if (corpus.empty()) throw Error(ErrorCategory::ingest, "corpus '" + dir.string() + "' is empty");
  return corpus;
}

std::vector<spectra::WaterType> select_water_types(const GenerationConfig& config,
                                                   std::string_view image_id) {
  if (config.policy == WaterTypePolicy::all_seven) {
    return {spectra::kAllWaterTypes.begin(), spectra::kAllWaterTypes.end()};
  }
  Rng rng(SeedHasher(config.master_seed).add(image_id).add("water-type").finish());
  return {spectra::kAllWaterTypes[rng.uniform_index(spectra::kAllWaterTypes.size())]};
}

PairPlan plan_pair(std::string_view source_id, const GenerationConfig& config,
                   const spectra::SpectralLibrary& library, spectra::WaterType water_type,
                   std::uint64_t derived_seed) {
  using marinesnow::SnowKind;
  Rng rng(derived_seed);
  PairPlan plan;
  plan.scene = colorshift::sample_scene_params(rng, config.color, library, water_type);
  plan.scene.seed = derived_seed;
  const auto [n_h, n_v] = marinesnow::sample_particle_counts(rng, config.snow);
  plan.h_particles = marinesnow::place_particles(rng, n_h, config.width, config.height,
                                                 config.snow.distance_min,
                                                 config.snow.distance_max, SnowKind::H);
  plan.v_particles = marinesnow::place_particles(rng, n_v, config.width, config.height,
                                                 config.snow.distance_min,
                                                 config.snow.distance_max, SnowKind::V);

  auto& row = plan.row;
  row.id = pair_id(source_id, water_type);
  row.source_id = std::string(source_id);
  row.water_type = water_type;
  row.d_vert = plan.scene.d_vert;
  row.background = plan.scene.background;
  row.camera_id = plan.scene.camera_id;
  row.particles_h = n_h;
  row.particles_v = n_v;
  row.seed = derived_seed;
  row.clean_path = clean_rel_path(source_id);
  row.degraded_path = degraded_rel_path(source_id, water_type);
  return plan;
}

GeneratedPair generate_pair(const RGBDImage& rgbd, const GenerationConfig& config,
                            const spectra::SpectralLibrary& library,
                            spectra::WaterType water_type, std::uint64_t derived_seed) {
  if (rgbd.rgb.width() != config.width || rgbd.rgb.height() != config.height ||
      !rgbd.rgb.same_extent(rgbd.raw_depth)) {
    throw Error(ErrorCategory::contract, "RGB-D image is not at the configured resolution");
  }
  PairPlan plan = plan_pair(rgbd.id, config, library, water_type, derived_seed);

  const auto depth = colorshift::normalize_depth(rgbd.raw_depth);
  const ImageF shifted =
      colorshift::apply_color_shift(to_unit(rgbd.rgb), depth, plan.scene, library, config.color);

  const auto& snow = config.snow;
  auto h_layer = marinesnow::render_type_h(
      marinesnow::bin_particles(plan.h_particles, snow.type_h, snow.brightness), snow.type_h,
      config.width, config.height);
  auto v_layer = marinesnow::render_type_v(
      marinesnow::bin_particles(plan.v_particles, snow.type_v, snow.brightness), snow.type_v,
      config.width, config.height);

  GeneratedPair out;
  out.clean = rgbd.rgb;
  out.degraded = to_8bit(marinesnow::composite(shifted, h_layer, v_layer));
  out.row = std::move(plan.row);
  out.h_layer = std::move(h_layer);
  out.v_layer = std::move(v_layer);
  return out;
}

DatasetResult generate_dataset(const std::vector<CorpusEntry>& corpus,
                               const GenerationConfig& config,
                               const spectra::SpectralLibrary& library,
                               const DatasetOptions& options) {
  config.validate();
  if (corpus.empty()) throw Error(ErrorCategory::ingest, "corpus is empty");
  ensure_writable(options.out_dir);

  std::vector<CorpusEntry> items = corpus;
  std::sort(items.begin(), items.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (items[i].id == items[i - 1].id) {
      throw Error(ErrorCategory::ingest, "duplicate image id '" + items[i].id + "'");
    }
  }

  struct ImageOutcome {
    std::vector<ManifestRow> rows;
    std::size_t generated = 0;
    std::size_t skipped = 0;
    std::exception_ptr error;
  };
  std::vector<ImageOutcome> outcomes(items.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;

  const auto process = [&](const CorpusEntry& entry, ImageOutcome& outcome) {
    const fs::path clean_path = options.out_dir / clean_rel_path(entry.id);
    bool have_clean = verified(clean_path, config);
    std::optional<RGBDImage> rgbd;
    for (auto type : select_water_types(config, entry.id)) {
      const std::uint64_t seed = colorshift::derive_pair_seed(config.master_seed, entry.id, type);
      const fs::path degraded_path = options.out_dir / degraded_rel_path(entry.id, type);
      if (have_clean && verified(degraded_path, config)) {
        outcome.rows.push_back(plan_pair(entry.id, config, library, type, seed).row);
        ++outcome.skipped;
        continue;
      }
      if (!rgbd) {
        rgbd = load_rgbd(entry.rgb_path, entry.depth_path,
                         std::pair{config.width, config.height}, entry.id);
      }
      GeneratedPair pair = generate_pair(*rgbd, config, library, type, seed);
      if (!have_clean) {
        write_png_atomic(clean_path, pair.clean);
        have_clean = true;
      }
      write_png_atomic(degraded_path, pair.degraded);
      outcome.rows.push_back(std::move(pair.row));
      ++outcome.generated;
    }
  };

  const auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        process(items[i], outcomes[i]);
      } catch (...) {
        outcomes[i].error = std::current_exception();
      }
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        const auto& o = outcomes[i];
        options.progress(items[i].id + ": " +
                         (o.error ? std::string("failed")
                                  : std::to_string(o.generated) + " generated, " +
                                        std::to_string(o.skipped) + " kept"));
      }
    }
  };

  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(items.size())));
  std::vector<std::thread> threads;
  for (int t = 1; t < workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  DatasetResult result;
  for (auto& outcome : outcomes) {
    if (outcome.error) std::rethrow_exception(outcome.error);
    result.generated += outcome.generated;
    result.skipped += outcome.skipped;
    for (auto& row : outcome.rows) result.manifest.rows.push_back(std::move(row));
  }

  const fs::path manifest_path = options.out_dir / kManifestFileName;
  const std::string text = serialize_manifest(result.manifest);
  if (read_text(manifest_path) != text) write_file_atomic(manifest_path, text);
  return result;
}

}  // namespace uwsynth::pipeline
