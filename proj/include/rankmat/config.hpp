#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rankmat/models.hpp"

namespace rankmat {

struct TrainConfig {
  ModelKind kind = ModelKind::vanilla;
  std::size_t k = 10;
  double learning_rate = 0.01;
  std::size_t epochs = 100;
  std::uint64_t seed = 42;
  double init_scale = 0.1;
  bool shuffle_each_epoch = true;

  // Throws std::invalid_argument naming the first bad field.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j,
                                   TrainConfig defaults = {});

// 8 log-spaced rates from 1e-4 to 5e-2.
std::vector<double> default_learning_rate_grid();

// Parses "1e-4,0.001, 0.01" into rates; each must be a finite positive real.
std::vector<double> parse_rate_list(std::string_view text);

// A run configuration read from disk: TrainConfig fields plus an optional
// learning-rate grid. Accepts either a JSON object or `key = value` lines
// (`#` starts a comment). Keys: kind, k, learning_rate, epochs, seed,
// init_scale, shuffle_each_epoch, grid.
struct ConfigFile {
  TrainConfig train;
  std::optional<std::vector<double>> grid;
};

ConfigFile parse_config(std::string_view text, TrainConfig defaults = {});
ConfigFile load_config(const std::filesystem::path& path,
                       TrainConfig defaults = {});

}  // namespace rankmat
