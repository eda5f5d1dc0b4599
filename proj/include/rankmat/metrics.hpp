#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "rankmat/config.hpp"
#include "rankmat/dataset.hpp"
#include "rankmat/models.hpp"
#include "rankmat/ranking.hpp"

namespace rankmat {

inline constexpr std::size_t kDefaultTopN = 10;

inline ClampRange clamp_of(const RatingDataset& data) {
  return {data.rating_min(), data.rating_max()};
}

// Accuracy and fairness of one trained model. Both metrics are empty when
// training diverged.
struct MetricReport {
  std::optional<double> mae;
  std::optional<double> matthew_degree;
  std::size_t top_n = kDefaultTopN;
  bool diverged = false;
  std::size_t epochs_run = 0;
  std::optional<double> final_train_loss;
  TrainConfig config;
};

nlohmann::json to_json(const MetricReport& report);

// Mean over `test` of |predict_rating(...) - r|.
double mae(const EmbeddingModel& model, const RatingDataset& test,
           const RankTable& ranks, ClampRange clamp);

// For every user, the n items with the highest predicted rating among those
// the user did not rate in `train`. Clamped predictions tie at the rating
// bounds, so ties are ordered by the unclamped prediction and then by
// ascending item index.
std::vector<std::vector<std::uint32_t>> top_n_recommend(
    const EmbeddingModel& model, const RatingDataset& train,
    const RankTable& ranks, std::size_t n, ClampRange clamp);

// How often each item was recommended, most frequent first (ties by item
// index). Zero counts are dropped. rank is 1-based position. Frequencies are
// stored as reals so synthetic (non-integral) power laws can be fitted too.
struct FreqDistribution {
  struct Entry {
    std::uint32_t item;
    double frequency;
    std::uint32_t rank;
  };
  std::vector<Entry> entries;

  static FreqDistribution from_counts(std::span<const std::uint64_t> counts);
  static FreqDistribution from_frequencies(std::span<const double> frequencies);
  static FreqDistribution from_recommendations(
      std::span<const std::vector<std::uint32_t>> lists, std::size_t item_count);
};

// `item_index,frequency,rank`
void write_freq_csv(const FreqDistribution& dist,
                    const std::filesystem::path& path);

// OLS slope of log(frequency) against log(rank).
double zipf_slope(const FreqDistribution& dist);

// Slope of the log-log rank/frequency curve of top-n recommendation counts.
// Closer to 0 means exposure is spread more evenly across items.
double degree_of_matthew_effect(const EmbeddingModel& model,
                                const RatingDataset& train,
                                const RankTable& ranks, std::size_t n,
                                ClampRange clamp);

}  // namespace rankmat
