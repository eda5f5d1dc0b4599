#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "rankmat/dataset.hpp"

namespace rankmat {

enum class RankBasis { rating_sum, rating_count };

std::string_view to_string(RankBasis basis);
RankBasis parse_rank_basis(std::string_view text);  // "sum" | "count"

// 1-based popularity ranks. Rank 1 is the entity with the largest score;
// ties go to the smaller dense index, and entities with no training ratings
// rank after every entity that has some.
struct RankTable {
  std::vector<std::uint32_t> user_rank;
  std::vector<std::uint32_t> item_rank;
  std::vector<double> user_score;
  std::vector<double> item_score;
  RankBasis basis = RankBasis::rating_sum;
};

RankTable compute_ranks(const RatingDataset& train,
                        RankBasis basis = RankBasis::rating_sum);

// `entity_type,dense_index,score,rank`, users first.
void write_rank_csv(const RankTable& ranks, const std::filesystem::path& path);

}  // namespace rankmat
