#include "rankmat/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "rankmat/kernels.hpp"

namespace rankmat {

namespace {

// Uniform on [0, 1) from the top 53 bits of one 64-bit draw.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Separates the epoch-order stream from the initialization stream.
constexpr std::uint64_t kOrderStream = 0x9e3779b97f4a7c15ULL;

}  // namespace

EmbeddingModel init_embeddings(ModelKind kind, std::size_t user_count,
                               std::size_t item_count, std::size_t k,
                               std::uint64_t seed, double scale) {
  if (user_count < 1 || item_count < 1 || k < 1)
    throw std::invalid_argument("init_embeddings: m, n, k must be >= 1");
  if (!(scale > 0.0)) throw std::invalid_argument("init_embeddings: scale <= 0");

  EmbeddingModel model(kind, user_count, item_count, k);
  std::mt19937_64 rng(seed);
  const double below_scale = std::nextafter(scale, 0.0);
  auto fill = [&](std::span<double> values) {
    for (double& x : values) x = std::min(unit_uniform(rng) * scale, below_scale);
  };
  fill(model.user_factors());
  fill(model.item_factors());
  return model;
}

TrainTrace train(const TrainConfig& config, const RatingDataset& train_set,
                 const RankTable& ranks) {
  config.validate();
  if (train_set.empty()) throw std::invalid_argument("train: empty train set");

  TrainTrace trace{{}, false,
                   init_embeddings(config.kind, train_set.user_count(),
                                   train_set.item_count(), config.k, config.seed,
                                   config.init_scale)};
  EmbeddingModel& model = trace.model;
  check_dimensions(model, train_set, ranks);

  const auto ratings = train_set.ratings();
  std::vector<double> targets(ratings.size());
  for (std::size_t t = 0; t < ratings.size(); ++t)
    targets[t] = target(config.kind, ratings[t].value,
                        ranks.user_rank[ratings[t].user],
                        ranks.item_rank[ratings[t].item]);

  std::vector<std::size_t> order(ratings.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 order_rng(config.seed ^ kOrderStream);

  const auto& kern = kernels::active();
  const std::size_t k = config.k;
  double* users = model.user_factors().data();
  double* items = model.item_factors().data();
  const double lr = config.learning_rate;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (epoch == 0 || config.shuffle_each_epoch)
      std::shuffle(order.begin(), order.end(), order_rng);

    for (std::size_t t : order) {
      double* u = users + std::size_t{ratings[t].user} * k;
      double* v = items + std::size_t{ratings[t].item} * k;
      const double e = kern.dot(u, v, k) - targets[t];
      kern.pair_step(u, v, k, lr * 2.0 * e);
    }

    double epoch_loss = 0.0;
    for (std::size_t t = 0; t < ratings.size(); ++t) {
      const double e =
          kern.dot(users + std::size_t{ratings[t].user} * k,
                   items + std::size_t{ratings[t].item} * k, k) -
          targets[t];
      epoch_loss += e * e;
    }
    trace.epoch_loss.push_back(epoch_loss);
    if (!std::isfinite(epoch_loss) || epoch_loss > kDivergenceLossCap ||
        !model.all_finite()) {
      trace.diverged = true;
      break;
    }
  }
  return trace;
}

MetricReport evaluate(const TrainConfig& config, const TrainTrace& trace,
                      const RatingDataset& train_set,
                      const RatingDataset& test_set, const RankTable& ranks,
                      std::size_t top_n) {
  MetricReport report;
  report.config = config;
  report.top_n = top_n;
  report.diverged = trace.diverged;
  report.epochs_run = trace.epoch_loss.size();
  if (trace.diverged) return report;

  if (!trace.epoch_loss.empty()) report.final_train_loss = trace.epoch_loss.back();
  const ClampRange clamp = clamp_of(train_set);
  if (!test_set.empty())
    report.mae = mae(trace.model, test_set, ranks, clamp);
  report.matthew_degree =
      degree_of_matthew_effect(trace.model, train_set, ranks, top_n, clamp);
  return report;
}

std::vector<GridPoint> grid_search(const TrainConfig& base,
                                   std::span<const double> learning_rates,
                                   const RatingDataset& train_set,
                                   const RatingDataset& test_set,
                                   const RankTable& ranks,
                                   const EvalOptions& options) {
  if (learning_rates.empty())
    throw std::invalid_argument("grid_search: empty learning-rate list");
  for (double rate : learning_rates)
    if (!(rate > 0.0) || !std::isfinite(rate))
      throw std::invalid_argument("grid_search: learning rates must be positive");
  base.validate();

  std::vector<GridPoint> results(learning_rates.size());
  std::vector<std::exception_ptr> errors(learning_rates.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t p; (p = next.fetch_add(1)) < learning_rates.size();) {
      try {
        TrainConfig config = base;
        config.learning_rate = learning_rates[p];
        const TrainTrace trace = train(config, train_set, ranks);
        results[p] = {learning_rates[p],
                      evaluate(config, trace, train_set, test_set, ranks,
                               options.top_n)};
      } catch (...) {
        errors[p] = std::current_exception();
      }
    }
  };

  std::size_t jobs = options.jobs == 0 ? std::thread::hardware_concurrency()
                                       : options.jobs;
  jobs = std::clamp<std::size_t>(jobs, 1, learning_rates.size());
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(worker);
  }

  for (const auto& error : errors)
    if (error) std::rethrow_exception(error);
  return results;
}

void save_checkpoint(const std::filesystem::path& path,
                     const EmbeddingModel& model, const TrainConfig& config,
                     const nlohmann::json& extra) {
  nlohmann::json j = to_json(model);
  j["seed"] = config.seed;
  j["config"] = to_json(config);
  for (const auto& [key, value] : extra.items()) j[key] = value;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto j = nlohmann::json::parse(in);
  Checkpoint cp{model_from_json(j), train_config_from_json(j.at("config")),
                nlohmann::json::object()};
  for (const auto& [key, value] : j.items()) {
    if (key == "kind" || key == "k" || key == "user_count" ||
        key == "item_count" || key == "user_factors" ||
        key == "item_factors" || key == "seed" || key == "config")
      continue;
    cp.extra[key] = value;
  }
  return cp;
}

}  // namespace rankmat
