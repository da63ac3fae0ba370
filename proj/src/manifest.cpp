#include "uwsynth/manifest.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uwsynth/error.hpp"

namespace uwsynth {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json row_to_json(const ManifestRow& row) {
  ordered_json j;
  j["id"] = row.id;
  j["source_id"] = row.source_id;
  j["water_type"] = std::string(spectra::to_string(row.water_type));
  j["d_vert"] = row.d_vert;
  j["background"] = row.background;
  j["camera_id"] = row.camera_id;
  j["particles_h"] = row.particles_h;
  j["particles_v"] = row.particles_v;
  j["seed"] = row.seed;
  j["clean_path"] = row.clean_path;
  j["degraded_path"] = row.degraded_path;
  return j;
}

ManifestRow row_from_json(const nlohmann::json& j) {
  ManifestRow row;
  row.id = j.at("id").get<std::string>();
  row.source_id = j.at("source_id").get<std::string>();
  row.water_type = spectra::parse_water_type(j.at("water_type").get<std::string>());
  row.d_vert = j.at("d_vert").get<double>();
  row.background = j.at("background").get<std::array<double, 3>>();
  row.camera_id = j.at("camera_id").get<std::string>();
  row.particles_h = j.at("particles_h").get<std::size_t>();
  row.particles_v = j.at("particles_v").get<std::size_t>();
  row.seed = j.at("seed").get<std::uint64_t>();
  row.clean_path = j.at("clean_path").get<std::string>();
  row.degraded_path = j.at("degraded_path").get<std::string>();
  if (j.size() != 11) throw Error(ErrorCategory::parse, "unexpected extra fields");
  return row;
}

}  // namespace

std::string serialize_row(const ManifestRow& row) { return row_to_json(row).dump(); }

std::string serialize_manifest(const PairManifest& manifest) {
  std::string out(kManifestHeader);
  out += '\n';
  for (const auto& row : manifest.rows) {
    out += serialize_row(row);
    out += '\n';
  }
  return out;
}

PairManifest parse_manifest(std::string_view text) {
  PairManifest manifest;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool saw_header = false;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kManifestHeader) {
        throw ParseError(line_no, "missing manifest header");
      }
      saw_header = true;
      continue;
    }
    try {
      manifest.rows.push_back(row_from_json(nlohmann::json::parse(line)));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(line_no, std::string("malformed manifest row: ") + e.what());
    }
  }
  if (!saw_header) throw ParseError(1, "missing manifest header");
  return manifest;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCategory::io, "cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCategory::io, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCategory::io, "cannot rename onto '" + path.string() + "': " + ec.message());
}

void write_manifest(const PairManifest& manifest, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_manifest(manifest));
}

PairManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io, "cannot open manifest '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str());
}

void validate_manifest(const PairManifest& manifest, const std::filesystem::path& base_dir) {
  std::string missing;
  std::size_t count = 0;
  for (const auto& row : manifest.rows) {
    for (const auto* rel : {&row.clean_path, &row.degraded_path}) {
      if (!std::filesystem::exists(base_dir / *rel)) {
        missing += (count++ == 0 ? "" : ", ") + (base_dir / *rel).string();
      }
    }
  }
  if (count != 0) {
    throw Error(ErrorCategory::validation,
                std::to_string(count) + " referenced file(s) missing: " + missing);
  }
}

}  // namespace uwsynth
