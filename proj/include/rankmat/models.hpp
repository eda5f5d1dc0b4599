#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rankmat/dataset.hpp"
#include "rankmat/ranking.hpp"

namespace rankmat {

// Which quantity the dot product u_i . v_j is regressed onto.
//   vanilla:  r
//   glovemat: log(r + 1)
//   rankmat:  log(r + 1) / (log(rank_u + 1) + log(rank_i + 1))
enum class ModelKind { vanilla, glovemat, rankmat };

inline constexpr std::array<ModelKind, 3> kAllModelKinds{
    ModelKind::vanilla, ModelKind::glovemat, ModelKind::rankmat};

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct ClampRange {
  double lo;
  double hi;
};

// Largest exponent handed to exp() when inverting the log targets.
inline constexpr double kMaxExponent = 50.0;

double target(ModelKind kind, double rating, std::uint32_t user_rank,
              std::uint32_t item_rank);

// Inverse of `target`, clamped into `clamp`.
double predict_rating(ModelKind kind, double dot, std::uint32_t user_rank,
                      std::uint32_t item_rank, ClampRange clamp);

// Inverse transform without the final clamp (exponent still capped). Used to
// order items whose clamped predictions tie.
double predict_unclamped(ModelKind kind, double dot, std::uint32_t user_rank,
                         std::uint32_t item_rank);

// User and item factor matrices, row-major.
class EmbeddingModel {
 public:
  EmbeddingModel(ModelKind kind, std::size_t user_count, std::size_t item_count,
                 std::size_t k);
  EmbeddingModel(ModelKind kind, std::size_t user_count, std::size_t item_count,
                 std::size_t k, std::vector<double> user_factors,
                 std::vector<double> item_factors);

  ModelKind kind() const { return kind_; }
  std::size_t k() const { return k_; }
  std::size_t user_count() const { return user_count_; }
  std::size_t item_count() const { return item_count_; }

  std::span<double> user(std::size_t u) { return {&user_factors_[u * k_], k_}; }
  std::span<const double> user(std::size_t u) const {
    return {&user_factors_[u * k_], k_};
  }
  std::span<double> item(std::size_t i) { return {&item_factors_[i * k_], k_}; }
  std::span<const double> item(std::size_t i) const {
    return {&item_factors_[i * k_], k_};
  }

  std::span<const double> user_factors() const { return user_factors_; }
  std::span<const double> item_factors() const { return item_factors_; }
  std::span<double> user_factors() { return user_factors_; }
  std::span<double> item_factors() { return item_factors_; }

  double score(std::size_t u, std::size_t i) const;
  bool all_finite() const;

  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;

 private:
  ModelKind kind_;
  std::size_t user_count_;
  std::size_t item_count_;
  std::size_t k_;
  std::vector<double> user_factors_;
  std::vector<double> item_factors_;
};

// Throws std::invalid_argument unless model, data and ranks agree on m and n.
void check_dimensions(const EmbeddingModel& model, const RatingDataset& data,
                      const RankTable& ranks);

// Sum over observed ratings of (u_i . v_j - target)^2.
double loss(const EmbeddingModel& model, const RatingDataset& data,
            const RankTable& ranks);

struct PairGradient {
  std::vector<double> du;
  std::vector<double> dv;
};

// Gradient of (u . v - t)^2: du = 2 e v, dv = 2 e u with e = u . v - t.
PairGradient grad_pair(std::span<const double> u, std::span<const double> v,
                       double t);

nlohmann::json to_json(const EmbeddingModel& model);
EmbeddingModel model_from_json(const nlohmann::json& j);

}  // namespace rankmat
