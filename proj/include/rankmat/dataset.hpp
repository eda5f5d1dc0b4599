#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rankmat {

struct Rating {
  std::uint32_t user;
  std::uint32_t item;
  double value;

  friend bool operator==(const Rating&, const Rating&) = default;
};

// External id <-> dense index table. Dense indices are assigned in order of
// first appearance.
class IdMap {
 public:
  std::uint32_t add(std::int64_t external_id);
  std::uint32_t index_of(std::int64_t external_id) const;  // throws if absent
  bool contains(std::int64_t external_id) const;
  std::int64_t external_id(std::uint32_t index) const { return ids_.at(index); }
  std::size_t size() const { return ids_.size(); }
  std::span<const std::int64_t> ids() const { return ids_; }

 private:
  std::unordered_map<std::int64_t, std::uint32_t> index_;
  std::vector<std::int64_t> ids_;
};

// Sparse user-item rating matrix. Immutable after construction; the id maps
// are shared between a dataset and the train/test halves split from it.
class RatingDataset {
 public:
  // Validates every invariant (index bounds, uniqueness, rating range) and
  // throws std::invalid_argument on violation.
  RatingDataset(std::shared_ptr<const IdMap> users,
                std::shared_ptr<const IdMap> items, std::vector<Rating> ratings,
                double rating_min, double rating_max);

  std::size_t user_count() const { return users_->size(); }
  std::size_t item_count() const { return items_->size(); }
  std::size_t size() const { return ratings_.size(); }
  bool empty() const { return ratings_.empty(); }

  std::span<const Rating> ratings() const { return ratings_; }
  double rating_min() const { return rating_min_; }
  double rating_max() const { return rating_max_; }

  const IdMap& users() const { return *users_; }
  const IdMap& items() const { return *items_; }
  const std::shared_ptr<const IdMap>& user_map() const { return users_; }
  const std::shared_ptr<const IdMap>& item_map() const { return items_; }

  // Same maps, counts and rating range; different triplets.
  RatingDataset with_ratings(std::vector<Rating> ratings) const;

 private:
  std::shared_ptr<const IdMap> users_;
  std::shared_ptr<const IdMap> items_;
  std::vector<Rating> ratings_;
  double rating_min_;
  double rating_max_;
};

enum class RatingFormat { movielens_csv };

// Reads `userId,movieId,rating,timestamp` with a single header row. Errors
// carry the offending line number.
RatingDataset load_ratings(const std::filesystem::path& path,
                           RatingFormat format = RatingFormat::movielens_csv);

// Same parser over an in-memory buffer; `source` names it in error messages.
RatingDataset parse_ratings(std::string_view text,
                            std::string_view source = "<memory>");

struct SplitPair {
  RatingDataset train;
  RatingDataset test;
  std::uint64_t seed;
  double ratio;
};

inline constexpr double kDefaultSplitRatio = 0.8;
inline constexpr std::uint64_t kDefaultSplitSeed = 42;

// Per-user holdout: each user's ratings are shuffled with a generator seeded
// by (seed, user) and the first ceil(ratio * count) go to train.
SplitPair split(const RatingDataset& dataset, double ratio = kDefaultSplitRatio,
                std::uint64_t seed = kDefaultSplitSeed);

}  // namespace rankmat
