#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include <nlohmann/json.hpp>

#include "uwsynth/colorshift.hpp"
#include "uwsynth/marinesnow.hpp"

namespace uwsynth {

enum class WaterTypePolicy { all_seven, random_one };

std::string_view to_string(WaterTypePolicy policy);
WaterTypePolicy parse_policy(std::string_view text);

struct GenerationConfig {
  std::uint64_t master_seed = 0;
  WaterTypePolicy policy = WaterTypePolicy::random_one;
  int width = 1344;
  int height = 756;
  colorshift::ColorShiftConfig color;
  marinesnow::SnowConfig snow;

  void validate() const;
};

/// Reads a JSON config. Every key is optional and falls back to the
/// built-in defaults; unknown keys are rejected. Snow thresholds are given
/// on the 8-bit scale.
GenerationConfig config_from_json(const nlohmann::json& doc);
GenerationConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json config_to_json(const GenerationConfig& config);

}  // namespace uwsynth
