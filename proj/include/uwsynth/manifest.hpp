#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uwsynth/spectra.hpp"

namespace uwsynth {

/// Provenance of one clean/degraded pair. Paths are relative to the
/// directory holding the manifest.
struct ManifestRow {
  std::string id;
  std::string source_id;
  spectra::WaterType water_type = spectra::WaterType::I;
  double d_vert = 0.0;
  std::array<double, 3> background = {};
  std::string camera_id;
  std::size_t particles_h = 0;
  std::size_t particles_v = 0;
  std::uint64_t seed = 0;
  std::string clean_path;
  std::string degraded_path;

  friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

struct PairManifest {
  std::vector<ManifestRow> rows;

  friend bool operator==(const PairManifest&, const PairManifest&) = default;
};

/// First line of every manifest file.
inline constexpr std::string_view kManifestHeader =
    R"({"format":"uwsynth-manifest","version":1})";

/// One JSON object (no trailing newline).
std::string serialize_row(const ManifestRow& row);
/// JSON Lines text: header line, then one line per row.
std::string serialize_manifest(const PairManifest& manifest);
/// Parse errors carry the 1-based line number.
PairManifest parse_manifest(std::string_view text);

/// Writes through a temporary file and a rename.
void write_manifest(const PairManifest& manifest, const std::filesystem::path& path);
PairManifest read_manifest(const std::filesystem::path& path);

/// Throws a validation error listing every referenced file that is missing
/// under `base_dir`.
void validate_manifest(const PairManifest& manifest, const std::filesystem::path& base_dir);

/// Writes `contents` to `path` via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace uwsynth
