#include "rankmat/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rankmat/kernels.hpp"

namespace rankmat {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::vanilla: return "vanilla";
    case ModelKind::glovemat: return "glovemat";
    case ModelKind::rankmat: return "rankmat";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  for (ModelKind kind : kAllModelKinds)
    if (text == to_string(kind)) return kind;
  throw std::invalid_argument("unknown model kind '" + std::string(text) + "'");
}

namespace {

// log(rank_u + 1) + log(rank_i + 1); at least 2 log 2 since ranks are >= 1.
double rank_denominator(std::uint32_t user_rank, std::uint32_t item_rank) {
  return std::log1p(static_cast<double>(user_rank)) +
         std::log1p(static_cast<double>(item_rank));
}

}  // namespace

double target(ModelKind kind, double rating, std::uint32_t user_rank,
              std::uint32_t item_rank) {
  switch (kind) {
    case ModelKind::vanilla: return rating;
    case ModelKind::glovemat: return std::log1p(rating);
    case ModelKind::rankmat:
      return std::log1p(rating) / rank_denominator(user_rank, item_rank);
  }
  return rating;
}

double predict_unclamped(ModelKind kind, double dot, std::uint32_t user_rank,
                         std::uint32_t item_rank) {
  switch (kind) {
    case ModelKind::vanilla: return dot;
    case ModelKind::glovemat: return std::expm1(std::min(dot, kMaxExponent));
    case ModelKind::rankmat:
      return std::expm1(
          std::min(dot * rank_denominator(user_rank, item_rank), kMaxExponent));
  }
  return dot;
}

double predict_rating(ModelKind kind, double dot, std::uint32_t user_rank,
                      std::uint32_t item_rank, ClampRange clamp) {
  return std::clamp(predict_unclamped(kind, dot, user_rank, item_rank),
                    clamp.lo, clamp.hi);
}

EmbeddingModel::EmbeddingModel(ModelKind kind, std::size_t user_count,
                               std::size_t item_count, std::size_t k)
    : EmbeddingModel(kind, user_count, item_count, k,
                     std::vector<double>(user_count * k, 0.0),
                     std::vector<double>(item_count * k, 0.0)) {}

EmbeddingModel::EmbeddingModel(ModelKind kind, std::size_t user_count,
                               std::size_t item_count, std::size_t k,
                               std::vector<double> user_factors,
                               std::vector<double> item_factors)
    : kind_(kind),
      user_count_(user_count),
      item_count_(item_count),
      k_(k),
      user_factors_(std::move(user_factors)),
      item_factors_(std::move(item_factors)) {
  if (k_ == 0) throw std::invalid_argument("embedding dimension must be >= 1");
  if (user_factors_.size() != user_count_ * k_ ||
      item_factors_.size() != item_count_ * k_)
    throw std::invalid_argument("factor matrix size does not match m, n, k");
}

double EmbeddingModel::score(std::size_t u, std::size_t i) const {
  return kernels::dot(user(u), item(i));
}

bool EmbeddingModel::all_finite() const {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(user_factors_.begin(), user_factors_.end(), finite) &&
         std::all_of(item_factors_.begin(), item_factors_.end(), finite);
}

void check_dimensions(const EmbeddingModel& model, const RatingDataset& data,
                      const RankTable& ranks) {
  if (model.user_count() != data.user_count() ||
      model.item_count() != data.item_count())
    throw std::invalid_argument("model dimensions do not match dataset");
  if (ranks.user_rank.size() != data.user_count() ||
      ranks.item_rank.size() != data.item_count())
    throw std::invalid_argument("rank table dimensions do not match dataset");
}

double loss(const EmbeddingModel& model, const RatingDataset& data,
            const RankTable& ranks) {
  check_dimensions(model, data, ranks);
  double total = 0.0;
  for (const Rating& r : data.ratings()) {
    const double e = model.score(r.user, r.item) -
                     target(model.kind(), r.value, ranks.user_rank[r.user],
                            ranks.item_rank[r.item]);
    total += e * e;
  }
  return total;
}

PairGradient grad_pair(std::span<const double> u, std::span<const double> v,
                       double t) {
  if (u.size() != v.size())
    throw std::invalid_argument("grad_pair: vector lengths differ");
  const double twice_e = 2.0 * (kernels::dot(u, v) - t);
  PairGradient g{std::vector<double>(u.size()), std::vector<double>(v.size())};
  for (std::size_t d = 0; d < u.size(); ++d) {
    g.du[d] = twice_e * v[d];
    g.dv[d] = twice_e * u[d];
  }
  return g;
}

namespace {

nlohmann::json rows_to_json(std::span<const double> flat, std::size_t k) {
  auto rows = nlohmann::json::array();
  for (std::size_t off = 0; off < flat.size(); off += k)
    rows.push_back(std::vector<double>(flat.begin() + off, flat.begin() + off + k));
  return rows;
}

std::vector<double> rows_from_json(const nlohmann::json& rows, std::size_t k,
                                   const char* field) {
  std::vector<double> flat;
  flat.reserve(rows.size() * k);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != k)
      throw std::invalid_argument(std::string(field) + ": row length != k");
    for (const auto& x : row) flat.push_back(x.get<double>());
  }
  return flat;
}

}  // namespace

nlohmann::json to_json(const EmbeddingModel& model) {
  return {
      {"kind", to_string(model.kind())},
      {"k", model.k()},
      {"user_count", model.user_count()},
      {"item_count", model.item_count()},
      {"user_factors", rows_to_json(model.user_factors(), model.k())},
      {"item_factors", rows_to_json(model.item_factors(), model.k())},
  };
}

EmbeddingModel model_from_json(const nlohmann::json& j) {
  const auto kind = parse_model_kind(j.at("kind").get<std::string>());
  const auto k = j.at("k").get<std::size_t>();
  const auto& users = j.at("user_factors");
  const auto& items = j.at("item_factors");
  return EmbeddingModel(kind, users.size(), items.size(), k,
                        rows_from_json(users, k, "user_factors"),
                        rows_from_json(items, k, "item_factors"));
}

}  // namespace rankmat
