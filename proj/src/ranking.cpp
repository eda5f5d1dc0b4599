#include "rankmat/ranking.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rankmat/format.hpp"

namespace rankmat {

std::string_view to_string(RankBasis basis) {
  return basis == RankBasis::rating_sum ? "sum" : "count";
}

RankBasis parse_rank_basis(std::string_view text) {
  if (text == "sum" || text == "rating_sum") return RankBasis::rating_sum;
  if (text == "count" || text == "rating_count") return RankBasis::rating_count;
  throw std::invalid_argument("unknown rank basis '" + std::string(text) + "'");
}

namespace {

std::vector<std::uint32_t> rank_by_score(const std::vector<double>& score,
                                         const std::vector<char>& present) {
  std::vector<std::uint32_t> order(score.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (present[a] != present[b]) return present[a] > present[b];
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });
  std::vector<std::uint32_t> rank(score.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    rank[order[pos]] = static_cast<std::uint32_t>(pos + 1);
  return rank;
}

}  // namespace

RankTable compute_ranks(const RatingDataset& train, RankBasis basis) {
  if (train.empty()) throw std::invalid_argument("compute_ranks: empty train set");

  RankTable table;
  table.basis = basis;
  table.user_score.assign(train.user_count(), 0.0);
  table.item_score.assign(train.item_count(), 0.0);
  std::vector<char> user_present(train.user_count(), 0);
  std::vector<char> item_present(train.item_count(), 0);

  for (const Rating& r : train.ratings()) {
    const double mass = basis == RankBasis::rating_sum ? r.value : 1.0;
    table.user_score[r.user] += mass;
    table.item_score[r.item] += mass;
    user_present[r.user] = 1;
    item_present[r.item] = 1;
  }
  table.user_rank = rank_by_score(table.user_score, user_present);
  table.item_rank = rank_by_score(table.item_score, item_present);
  return table;
}

void write_rank_csv(const RankTable& ranks, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "entity_type,dense_index,score,rank\n";
  for (std::size_t u = 0; u < ranks.user_rank.size(); ++u)
    out << "user," << u << ',' << format_real(ranks.user_score[u]) << ','
        << ranks.user_rank[u] << '\n';
  for (std::size_t i = 0; i < ranks.item_rank.size(); ++i)
    out << "item," << i << ',' << format_real(ranks.item_score[i]) << ','
        << ranks.item_rank[i] << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace rankmat
