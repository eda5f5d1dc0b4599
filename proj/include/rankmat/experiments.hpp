#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankmat/config.hpp"
#include "rankmat/dataset.hpp"
#include "rankmat/metrics.hpp"
#include "rankmat/models.hpp"
#include "rankmat/ranking.hpp"

namespace rankmat {

struct ComparisonOptions {
  std::filesystem::path data_path;
  TrainConfig base;  // kind and learning_rate are overridden per cell
  std::vector<double> grid = default_learning_rate_grid();
  double split_ratio = kDefaultSplitRatio;
  std::uint64_t split_seed = kDefaultSplitSeed;
  std::size_t top_n = kDefaultTopN;
  RankBasis basis = RankBasis::rating_sum;
  std::size_t jobs = 1;  // 0 = hardware concurrency
};

struct DatasetFingerprint {
  std::string path;
  std::size_t user_count = 0;
  std::size_t item_count = 0;
  std::size_t triplet_count = 0;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::uint64_t split_seed = kDefaultSplitSeed;
  double split_ratio = kDefaultSplitRatio;
};

struct ComparisonRow {
  double learning_rate;
  ModelKind kind;
  std::optional<double> mae;
  std::optional<double> matthew_degree;
  bool diverged;
  std::size_t epochs_run;
  std::string error;  // non-empty when evaluation itself failed
};

// One row per (learning rate, model kind): rates in grid order, kinds in
// vanilla, glovemat, rankmat order within each rate.
struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  DatasetFingerprint dataset;
  TrainConfig base;
  std::size_t top_n = kDefaultTopN;
  RankBasis basis = RankBasis::rating_sum;

  const ComparisonRow& at(double learning_rate, ModelKind kind) const;
};

// Loads, splits and ranks once, then trains and evaluates every model kind at
// every rate from the same seed and split. A cell that fails is recorded as
// diverged with its error text; the sweep itself does not abort.
ComparisonTable run_comparison(const ComparisonOptions& options);

// Same sweep on an already-loaded dataset.
ComparisonTable run_comparison(const RatingDataset& data,
                               const ComparisonOptions& options);

nlohmann::json to_json(const ComparisonTable& table);

// Writes mae.csv, matthew.csv (`learning_rate,vanilla,glovemat,rankmat`,
// rates ascending, NaN for missing cells) and comparison.json.
void emit_plot_data(const ComparisonTable& table,
                    const std::filesystem::path& out_dir);

}  // namespace rankmat
