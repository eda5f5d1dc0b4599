#include "rankmat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "rankmat/format.hpp"
#include "rankmat/kernels.hpp"

namespace rankmat {

nlohmann::json to_json(const MetricReport& r) {
  auto opt = [](const std::optional<double>& x) -> nlohmann::json {
    if (x && std::isfinite(*x)) return *x;
    return nullptr;
  };
  return {{"mae", opt(r.mae)},
          {"matthew_degree", opt(r.matthew_degree)},
          {"top_n", r.top_n},
          {"diverged", r.diverged},
          {"epochs_run", r.epochs_run},
          {"final_train_loss", opt(r.final_train_loss)},
          {"config", to_json(r.config)}};
}

double mae(const EmbeddingModel& model, const RatingDataset& test,
           const RankTable& ranks, ClampRange clamp) {
  check_dimensions(model, test, ranks);
  if (test.empty()) throw std::invalid_argument("mae: empty test set");
  double total = 0.0;
  for (const Rating& r : test.ratings()) {
    const double predicted =
        predict_rating(model.kind(), model.score(r.user, r.item),
                       ranks.user_rank[r.user], ranks.item_rank[r.item], clamp);
    total += std::abs(predicted - r.value);
  }
  return total / static_cast<double>(test.size());
}

std::vector<std::vector<std::uint32_t>> top_n_recommend(
    const EmbeddingModel& model, const RatingDataset& train,
    const RankTable& ranks, std::size_t n, ClampRange clamp) {
  check_dimensions(model, train, ranks);
  if (n < 1) throw std::invalid_argument("top_n_recommend: n must be >= 1");

  const std::size_t users = model.user_count();
  const std::size_t items = model.item_count();
  std::vector<std::vector<std::uint32_t>> rated(users);
  for (const Rating& r : train.ratings()) rated[r.user].push_back(r.item);

  const auto& kern = kernels::active();
  std::vector<double> dots(items), clamped(items), raw(items);
  std::vector<char> excluded(items, 0);
  std::vector<std::uint32_t> candidates;
  candidates.reserve(items);
  std::vector<std::vector<std::uint32_t>> lists(users);

  for (std::size_t u = 0; u < users; ++u) {
    kern.row_dots(model.item_factors().data(), items, model.k(),
                  model.user(u).data(), dots.data());
    for (std::uint32_t i : rated[u]) excluded[i] = 1;
    candidates.clear();
    for (std::uint32_t i = 0; i < items; ++i) {
      if (excluded[i]) continue;
      raw[i] = predict_unclamped(model.kind(), dots[i], ranks.user_rank[u],
                                 ranks.item_rank[i]);
      clamped[i] = std::clamp(raw[i], clamp.lo, clamp.hi);
      candidates.push_back(i);
    }
    for (std::uint32_t i : rated[u]) excluded[i] = 0;

    const std::size_t take = std::min(n, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take,
                      candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
                        if (clamped[a] != clamped[b]) return clamped[a] > clamped[b];
                        if (raw[a] != raw[b]) return raw[a] > raw[b];
                        return a < b;
                      });
    lists[u].assign(candidates.begin(), candidates.begin() + take);
  }
  return lists;
}

FreqDistribution FreqDistribution::from_counts(
    std::span<const std::uint64_t> counts) {
  std::vector<double> freq(counts.begin(), counts.end());
  return from_frequencies(freq);
}

FreqDistribution FreqDistribution::from_frequencies(
    std::span<const double> frequencies) {
  FreqDistribution dist;
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!(frequencies[i] >= 0.0) || !std::isfinite(frequencies[i]))
      throw std::invalid_argument("frequencies must be finite and >= 0");
    if (frequencies[i] > 0.0)
      dist.entries.push_back({static_cast<std::uint32_t>(i), frequencies[i], 0});
  }
  std::sort(dist.entries.begin(), dist.entries.end(),
            [](const Entry& a, const Entry& b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.item < b.item;
            });
  for (std::size_t p = 0; p < dist.entries.size(); ++p)
    dist.entries[p].rank = static_cast<std::uint32_t>(p + 1);
  return dist;
}

FreqDistribution FreqDistribution::from_recommendations(
    std::span<const std::vector<std::uint32_t>> lists, std::size_t item_count) {
  std::vector<std::uint64_t> counts(item_count, 0);
  for (const auto& list : lists)
    for (std::uint32_t item : list) ++counts.at(item);
  return from_counts(counts);
}

void write_freq_csv(const FreqDistribution& dist,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "item_index,frequency,rank\n";
  for (const auto& e : dist.entries)
    out << e.item << ',' << format_real(e.frequency) << ',' << e.rank << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

double zipf_slope(const FreqDistribution& dist) {
  const std::size_t n = dist.entries.size();
  if (n < 2) throw std::invalid_argument("zipf_slope: need at least 2 ranks");

  std::vector<double> x(n), y(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (!(dist.entries[p].frequency > 0.0))
      throw std::invalid_argument("zipf_slope: frequencies must be positive");
    x[p] = std::log(static_cast<double>(dist.entries[p].rank));
    y[p] = std::log(dist.entries[p].frequency);
  }
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    sxy += (x[p] - mean_x) * (y[p] - mean_y);
    sxx += (x[p] - mean_x) * (x[p] - mean_x);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("zipf_slope: need at least 2 distinct ranks");
  return sxy / sxx;
}

double degree_of_matthew_effect(const EmbeddingModel& model,
                                const RatingDataset& train,
                                const RankTable& ranks, std::size_t n,
                                ClampRange clamp) {
  const auto lists = top_n_recommend(model, train, ranks, n, clamp);
  const auto dist =
      FreqDistribution::from_recommendations(lists, model.item_count());
  if (dist.entries.empty())
    throw std::invalid_argument("degree_of_matthew_effect: no recommendations");
  return zipf_slope(dist);
}

}  // namespace rankmat
