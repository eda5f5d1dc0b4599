#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "rankmat/config.hpp"
#include "rankmat/dataset.hpp"
#include "rankmat/metrics.hpp"
#include "rankmat/models.hpp"
#include "rankmat/ranking.hpp"

namespace rankmat {

// Training stops once the epoch loss is non-finite or above this.
inline constexpr double kDivergenceLossCap = 1e12;

struct TrainTrace {
  std::vector<double> epoch_loss;
  bool diverged = false;
  EmbeddingModel model;
};

// Entries i.i.d. uniform on [0, scale), user matrix first, from a generator
// seeded by `seed`.
EmbeddingModel init_embeddings(ModelKind kind, std::size_t user_count,
                               std::size_t item_count, std::size_t k,
                               std::uint64_t seed, double scale);

// Plain SGD on the squared error of every training rating, one pass per
// epoch in seeded shuffled order. Single-threaded; bit-for-bit deterministic
// for a given kernel table.
TrainTrace train(const TrainConfig& config, const RatingDataset& train_set,
                 const RankTable& ranks);

// Options shared by every evaluation in a sweep.
struct EvalOptions {
  std::size_t top_n = kDefaultTopN;
  // Worker threads for independent grid points; 0 picks the hardware count.
  std::size_t jobs = 1;
};

MetricReport evaluate(const TrainConfig& config, const TrainTrace& trace,
                      const RatingDataset& train_set,
                      const RatingDataset& test_set, const RankTable& ranks,
                      std::size_t top_n);

struct GridPoint {
  double learning_rate;
  MetricReport report;
};

// One independent run per learning rate, all from `base` otherwise. The
// result order follows `learning_rates` whatever order runs finish in.
std::vector<GridPoint> grid_search(const TrainConfig& base,
                                   std::span<const double> learning_rates,
                                   const RatingDataset& train_set,
                                   const RatingDataset& test_set,
                                   const RankTable& ranks,
                                   const EvalOptions& options = {});

// Model checkpoint: the model JSON plus the producing config under "config"
// and any extra provenance fields in `extra`.
void save_checkpoint(const std::filesystem::path& path,
                     const EmbeddingModel& model, const TrainConfig& config,
                     const nlohmann::json& extra = nlohmann::json::object());

struct Checkpoint {
  EmbeddingModel model;
  TrainConfig config;
  nlohmann::json extra;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rankmat
