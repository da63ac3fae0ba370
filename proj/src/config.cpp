#include "uwsynth/config.hpp"

#include <fstream>
#include <set>
#include <string>

namespace uwsynth {
namespace {

using nlohmann::json;

void reject_unknown(const json& object, std::initializer_list<std::string_view> known,
                    std::string_view where) {
  if (!object.is_object()) {
    throw Error(ErrorCategory::config, std::string(where) + " must be a JSON object");
  }
  const std::set<std::string_view> allowed(known);
  for (const auto& [key, value] : object.items()) {
    if (allowed.count(key) == 0) {
      throw Error(ErrorCategory::config,
                  "unknown config key '" + std::string(where) + "." + key + "'");
    }
  }
}

template <typename T>
void read(const json& object, const char* key, T& out, std::string_view where) {
  if (!object.contains(key)) return;
  try {
    out = object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::config,
                "config key '" + std::string(where) + "." + key + "': " + e.what());
  }
}

void read_bins(const json& object, marinesnow::DistanceBins& bins, std::string_view where,
               bool with_laplacian) {
  if (with_laplacian) {
    reject_unknown(object, {"edges", "sigmas", "gains", "threshold", "laplacian_alpha"}, where);
    read(object, "laplacian_alpha", bins.laplacian_alpha, where);
  } else {
    reject_unknown(object, {"edges", "sigmas", "gains", "threshold"}, where);
  }
  read(object, "edges", bins.edges, where);
  read(object, "sigmas", bins.sigmas, where);
  read(object, "gains", bins.gains, where);
  double threshold_8bit = bins.threshold * 255.0;
  read(object, "threshold", threshold_8bit, where);
  bins.threshold = threshold_8bit / 255.0;
}

void read_count(const json& object, double& mean, double& variance, std::string_view where) {
  reject_unknown(object, {"mean", "variance"}, where);
  read(object, "mean", mean, where);
  read(object, "variance", variance, where);
}

json bins_to_json(const marinesnow::DistanceBins& bins, bool with_laplacian) {
  nlohmann::ordered_json out;
  out["edges"] = bins.edges;
  out["sigmas"] = bins.sigmas;
  out["gains"] = bins.gains;
  out["threshold"] = bins.threshold * 255.0;
  if (with_laplacian) out["laplacian_alpha"] = bins.laplacian_alpha;
  return out;
}

}  // namespace

std::string_view to_string(WaterTypePolicy policy) {
  return policy == WaterTypePolicy::all_seven ? "all-seven" : "random-one";
}

WaterTypePolicy parse_policy(std::string_view text) {
  if (text == "all-seven") return WaterTypePolicy::all_seven;
  if (text == "random-one") return WaterTypePolicy::random_one;
  throw Error(ErrorCategory::usage,
              "unknown policy '" + std::string(text) + "'; expected all-seven or random-one");
}

void GenerationConfig::validate() const {
  if (width <= 0 || height <= 0) throw Error(ErrorCategory::config, "resolution must be positive");
  color.validate();
  snow.validate();
}

GenerationConfig config_from_json(const nlohmann::json& doc) {
  GenerationConfig config;
  reject_unknown(doc, {"seed", "policy", "resolution", "color_shift", "snow"}, "config");
  read(doc, "seed", config.master_seed, "config");
  if (doc.contains("policy")) {
    std::string policy;
    read(doc, "policy", policy, "config");
    try {
      config.policy = parse_policy(policy);
    } catch (const Error& e) {
      throw Error(ErrorCategory::config, e.what());
    }
  }
  if (doc.contains("resolution")) {
    std::array<int, 2> res{};
    read(doc, "resolution", res, "config");
    config.width = res[0];
    config.height = res[1];
  }
  if (doc.contains("color_shift")) {
    const auto& cs = doc.at("color_shift");
    reject_unknown(cs, {"d_vert_min", "d_vert_max", "background_min", "background_max", "lut_size"},
                   "color_shift");
    read(cs, "d_vert_min", config.color.d_vert_min, "color_shift");
    read(cs, "d_vert_max", config.color.d_vert_max, "color_shift");
    read(cs, "background_min", config.color.background_min, "color_shift");
    read(cs, "background_max", config.color.background_max, "color_shift");
    read(cs, "lut_size", config.color.lut_size, "color_shift");
  }
  if (doc.contains("snow")) {
    const auto& snow = doc.at("snow");
    reject_unknown(snow, {"brightness", "distance_range", "count_h", "count_v", "type_h", "type_v"},
                   "snow");
    read(snow, "brightness", config.snow.brightness, "snow");
    if (snow.contains("distance_range")) {
      std::array<double, 2> range{};
      read(snow, "distance_range", range, "snow");
      config.snow.distance_min = range[0];
      config.snow.distance_max = range[1];
    }
    if (snow.contains("count_h")) {
      read_count(snow.at("count_h"), config.snow.count_h_mean, config.snow.count_h_variance,
                 "snow.count_h");
    }
    if (snow.contains("count_v")) {
      read_count(snow.at("count_v"), config.snow.count_v_mean, config.snow.count_v_variance,
                 "snow.count_v");
    }
    if (snow.contains("type_h")) read_bins(snow.at("type_h"), config.snow.type_h, "snow.type_h", false);
    if (snow.contains("type_v")) read_bins(snow.at("type_v"), config.snow.type_v, "snow.type_v", true);
  }
  config.validate();
  return config;
}

GenerationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::config, "cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCategory::config, "config '" + path.string() + "': " + e.what());
  }
  return config_from_json(doc);
}

nlohmann::ordered_json config_to_json(const GenerationConfig& config) {
  nlohmann::ordered_json out;
  out["seed"] = config.master_seed;
  out["policy"] = std::string(to_string(config.policy));
  out["resolution"] = {config.width, config.height};
  out["color_shift"] = {
      {"d_vert_min", config.color.d_vert_min},
      {"d_vert_max", config.color.d_vert_max},
      {"background_min", config.color.background_min},
      {"background_max", config.color.background_max},
      {"lut_size", config.color.lut_size},
  };
  nlohmann::ordered_json snow;
  snow["brightness"] = config.snow.brightness;
  snow["distance_range"] = {config.snow.distance_min, config.snow.distance_max};
  snow["count_h"] = {{"mean", config.snow.count_h_mean}, {"variance", config.snow.count_h_variance}};
  snow["count_v"] = {{"mean", config.snow.count_v_mean}, {"variance", config.snow.count_v_variance}};
  snow["type_h"] = bins_to_json(config.snow.type_h, false);
  snow["type_v"] = bins_to_json(config.snow.type_v, true);
  out["snow"] = std::move(snow);
  return out;
}

}  // namespace uwsynth
