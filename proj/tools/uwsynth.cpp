// uwsynth: underwater image pair synthesis from the command line.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uwsynth/colorshift.hpp"
#include "uwsynth/config.hpp"
#include "uwsynth/error.hpp"
#include "uwsynth/manifest.hpp"
#include "uwsynth/metrics.hpp"
#include "uwsynth/pipeline.hpp"
#include "uwsynth/png_io.hpp"
#include "uwsynth/spectra.hpp"

#ifndef UWSYNTH_DEFAULT_DATA_DIR
#define UWSYNTH_DEFAULT_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace uwsynth;

namespace {

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::usage: return 2;
    case ErrorCategory::ingest: return 3;
    case ErrorCategory::config: return 4;
    case ErrorCategory::io: return 5;
    case ErrorCategory::lookup: return 6;
    case ErrorCategory::parse: return 7;
    default: return 1;
  }
}

int report(ErrorCategory category, const std::string& message) {
  std::cerr << "error[" << to_string(category) << "]: " << message << '\n';
  return exit_code(category);
}

fs::path data_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("UWSYNTH_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return UWSYNTH_DEFAULT_DATA_DIR;
}

spectra::WaterType water_type_flag(const std::string& label) {
  try {
    return spectra::parse_water_type(label);
  } catch (const Error& e) {
    throw Error(ErrorCategory::usage, std::string("--water-type: ") + e.what());
  }
}

GenerationConfig config_flag(const std::string& path) {
  return path.empty() ? GenerationConfig{} : load_config(path);
}

struct Options {
  std::string data_dir;

  std::string rgb, depth, config, out;
  std::uint64_t seed = 0;
  std::string water_type;

  std::string corpus, policy;
  std::optional<std::uint64_t> batch_seed;
  int workers = 1;

  std::string camera;
  double d_vert = 0.0;
  double d_horiz = 0.0;
  std::optional<double> uniform_beta;

  std::string manifest;
};

int cmd_synth(const Options& o) {
  std::optional<spectra::WaterType> requested;
  if (!o.water_type.empty()) requested = water_type_flag(o.water_type);
  GenerationConfig config = config_flag(o.config);
  config.master_seed = o.seed;
  const auto library = spectra::load_library_dir(data_dir(o.data_dir));
  const std::string id = fs::path(o.rgb).stem().string();
  const auto rgbd =
      pipeline::load_rgbd(o.rgb, o.depth, std::pair{config.width, config.height}, id);
  spectra::WaterType type;
  if (requested) {
    type = *requested;
  } else {
    config.policy = WaterTypePolicy::random_one;
    type = pipeline::select_water_types(config, id).front();
  }
  const std::uint64_t seed = colorshift::derive_pair_seed(config.master_seed, id, type);
  auto pair = pipeline::generate_pair(rgbd, config, library, type, seed);

  const fs::path out(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  png::write(out, pair.degraded);
  pair.row.clean_path = o.rgb;
  pair.row.degraded_path = o.out;
  std::cout << serialize_row(pair.row) << '\n';
  return 0;
}

int cmd_batch(const Options& o) {
  GenerationConfig config = config_flag(o.config);
  if (!o.policy.empty()) config.policy = parse_policy(o.policy);
  if (o.batch_seed) config.master_seed = *o.batch_seed;
  const auto library = spectra::load_library_dir(data_dir(o.data_dir));
  const auto corpus = pipeline::scan_corpus(o.corpus);

  pipeline::DatasetOptions options;
  options.out_dir = o.out;
  options.workers = o.workers;
  options.progress = [](const std::string& line) { std::cerr << line << '\n'; };
  const auto result = pipeline::generate_dataset(corpus, config, library, options);
  std::cerr << result.manifest.rows.size() << " pairs (" << result.generated << " rendered, "
            << result.skipped << " already present)\n";
  std::cout << (fs::path(o.out) / pipeline::kManifestFileName).string() << '\n';
  return 0;
}

int cmd_spectra(const Options& o) {
  const auto type = water_type_flag(o.water_type);
  const auto library = o.uniform_beta ? spectra::SpectralLibrary::uniform(*o.uniform_beta)
                                      : spectra::load_library_dir(data_dir(o.data_dir));
  const auto& camera = library.camera(o.camera);
  std::cout << "channel,beta_vert,beta_horiz,t_vert,t_horiz\n";
  std::cout.precision(10);
  for (auto channel : spectra::kChannels) {
    const double bv = spectra::effective_beta_vert(library, type, camera, channel, o.d_vert);
    const double bh =
        spectra::effective_beta_horiz(library, type, camera, channel, o.d_vert, o.d_horiz);
    std::cout << spectra::to_string(channel) << ',' << bv << ',' << bh << ','
              << colorshift::transmission(bv, o.d_vert) << ','
              << colorshift::transmission(bh, o.d_horiz) << '\n';
  }
  return 0;
}

int cmd_eval(const Options& o) {
  const fs::path manifest_path(o.manifest);
  const auto manifest = read_manifest(manifest_path);
  const auto report = metrics::evaluate_pairs(manifest, manifest_path.parent_path(), 4);

  const fs::path out(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  const std::string table = metrics::report_to_table(report);
  write_file_atomic(out, metrics::report_to_json(report).dump(2) + "\n");
  fs::path table_path = out;
  table_path.replace_extension(".txt");
  if (table_path != out) write_file_atomic(table_path, table);

  std::cout << table;
  if (!report.errors.empty()) {
    std::cerr << "warning: " << report.errors.size() << " pair(s) could not be evaluated\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize paired underwater images from atmospheric RGB-D data"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--data-dir", o.data_dir, "Spectral data directory (overrides UWSYNTH_DATA_DIR)");

  auto* synth = app.add_subcommand("synth", "Degrade one RGB-D image");
  synth->add_option("--rgb", o.rgb, "8-bit RGB PNG")->required();
  synth->add_option("--depth", o.depth, "16-bit depth PNG")->required();
  synth->add_option("--config", o.config, "JSON generation config");
  synth->add_option("--seed", o.seed, "Master seed")->required();
  synth->add_option("--water-type", o.water_type, "I, IA, IB, II, III, 1C or 3C");
  synth->add_option("--out", o.out, "Degraded PNG to write")->required();

  auto* batch = app.add_subcommand("batch", "Generate a paired dataset from a corpus");
  batch->add_option("--corpus", o.corpus, "Directory with rgb/ and depth/")->required();
  batch->add_option("--config", o.config, "JSON generation config");
  batch->add_option("--out", o.out, "Output directory")->required();
  batch->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  batch->add_option("--policy", o.policy, "all-seven or random-one")
      ->check(CLI::IsMember({"all-seven", "random-one"}));
  batch->add_option("--seed", o.batch_seed, "Master seed (overrides the config)");

  auto* spec = app.add_subcommand("spectra", "Print effective attenuation per channel");
  spec->add_option("--water-type", o.water_type, "Water type")->required();
  spec->add_option("--camera", o.camera, "Camera id")->required();
  spec->add_option("--d-vert", o.d_vert, "Vertical distance in metres")
      ->required()
      ->check(CLI::PositiveNumber);
  spec->add_option("--d-horiz", o.d_horiz, "Horizontal distance in metres")
      ->required()
      ->check(CLI::PositiveNumber);
  spec->add_option("--uniform-beta", o.uniform_beta,
                   "Use a flat test library with this attenuation (camera 'uniform')")
      ->check(CLI::NonNegativeNumber);

  auto* eval = app.add_subcommand("eval", "PSNR and SSIM of every pair in a manifest");
  eval->add_option("--manifest", o.manifest, "manifest.jsonl")->required();
  eval->add_option("--out", o.out, "JSON report to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(ErrorCategory::usage, e.what());
  }

  try {
    if (*synth) return cmd_synth(o);
    if (*batch) return cmd_batch(o);
    if (*spec) return cmd_spectra(o);
    if (*eval) return cmd_eval(o);
  } catch (const Error& e) {
    return report(e.category(), e.what());
  } catch (const fs::filesystem_error& e) {
    return report(ErrorCategory::io, e.what());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
