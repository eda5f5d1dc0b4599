#include "rankmat/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "rankmat/format.hpp"
#include "rankmat/trainer.hpp"

namespace rankmat {

const ComparisonRow& ComparisonTable::at(double learning_rate,
                                         ModelKind kind) const {
  for (const auto& row : rows)
    if (row.learning_rate == learning_rate && row.kind == kind) return row;
  throw std::out_of_range("no comparison row for that (rate, kind)");
}

ComparisonTable run_comparison(const ComparisonOptions& options) {
  const RatingDataset data = load_ratings(options.data_path);
  return run_comparison(data, options);
}

ComparisonTable run_comparison(const RatingDataset& data,
                               const ComparisonOptions& options) {
  if (options.grid.empty())
    throw std::invalid_argument("run_comparison: empty learning-rate grid");
  {
    std::vector<double> sorted = options.grid;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("run_comparison: duplicate learning rate");
    if (!(sorted.front() > 0.0))
      throw std::invalid_argument("run_comparison: rates must be positive");
  }
  if (options.top_n < 1) throw std::invalid_argument("top_n must be >= 1");
  {
    TrainConfig probe = options.base;
    probe.learning_rate = options.grid.front();
    probe.validate();
  }

  const SplitPair halves = split(data, options.split_ratio, options.split_seed);
  const RankTable ranks = compute_ranks(halves.train, options.basis);

  ComparisonTable table;
  table.base = options.base;
  table.top_n = options.top_n;
  table.basis = options.basis;
  table.dataset = {options.data_path.string(), data.user_count(),
                   data.item_count(),           data.size(),
                   halves.train.size(),         halves.test.size(),
                   options.split_seed,          options.split_ratio};

  const std::size_t cells = options.grid.size() * kAllModelKinds.size();
  table.rows.resize(cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c; (c = next.fetch_add(1)) < cells;) {
      const double rate = options.grid[c / kAllModelKinds.size()];
      const ModelKind kind = kAllModelKinds[c % kAllModelKinds.size()];
      ComparisonRow& row = table.rows[c];
      row = {rate, kind, std::nullopt, std::nullopt, false, 0, {}};
      TrainConfig config = options.base;
      config.kind = kind;
      config.learning_rate = rate;
      try {
        const TrainTrace trace = train(config, halves.train, ranks);
        row.epochs_run = trace.epoch_loss.size();
        row.diverged = trace.diverged;
        const MetricReport report = evaluate(config, trace, halves.train,
                                             halves.test, ranks, options.top_n);
        row.mae = report.mae;
        row.matthew_degree = report.matthew_degree;
      } catch (const std::exception& e) {
        row.diverged = true;
        row.mae.reset();
        row.matthew_degree.reset();
        row.error = e.what();
      }
    }
  };

  std::size_t jobs = options.jobs == 0 ? std::thread::hardware_concurrency()
                                       : options.jobs;
  jobs = std::clamp<std::size_t>(jobs, 1, cells);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(worker);
  }
  return table;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& x) {
  if (x && std::isfinite(*x)) return *x;
  return nullptr;
}

}  // namespace

nlohmann::json to_json(const ComparisonTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = {{"learning_rate", row.learning_rate},
                        {"model_kind", to_string(row.kind)},
                        {"mae", optional_json(row.mae)},
                        {"matthew_degree", optional_json(row.matthew_degree)},
                        {"diverged", row.diverged},
                        {"epochs_run", row.epochs_run}};
    if (!row.error.empty()) r["error"] = row.error;
    rows.push_back(std::move(r));
  }
  nlohmann::json config = to_json(table.base);
  config.erase("kind");
  config.erase("learning_rate");
  config["top_n"] = table.top_n;
  config["rank_basis"] = to_string(table.basis);
  const auto& d = table.dataset;
  return {{"dataset",
           {{"path", d.path},
            {"user_count", d.user_count},
            {"item_count", d.item_count},
            {"triplet_count", d.triplet_count},
            {"train_count", d.train_count},
            {"test_count", d.test_count},
            {"split_seed", d.split_seed},
            {"split_ratio", d.split_ratio}}},
          {"config", config},
          {"rows", rows}};
}

namespace {

void write_metric_csv(const ComparisonTable& table,
                      const std::vector<double>& rates,
                      const std::filesystem::path& path,
                      std::optional<double> ComparisonRow::*metric) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "learning_rate";
  for (ModelKind kind : kAllModelKinds) out << ',' << to_string(kind);
  out << '\n';
  for (double rate : rates) {
    out << format_real(rate);
    for (ModelKind kind : kAllModelKinds) {
      const auto& value = table.at(rate, kind).*metric;
      out << ','
          << format_real(value && std::isfinite(*value)
                             ? *value
                             : std::numeric_limits<double>::quiet_NaN());
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void emit_plot_data(const ComparisonTable& table,
                    const std::filesystem::path& out_dir) {
  if (table.rows.empty()) throw std::invalid_argument("emit_plot_data: empty table");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw std::runtime_error("cannot create output directory " + out_dir.string());

  std::vector<double> rates;
  for (const auto& row : table.rows) rates.push_back(row.learning_rate);
  std::sort(rates.begin(), rates.end());
  rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

  write_metric_csv(table, rates, out_dir / "mae.csv", &ComparisonRow::mae);
  write_metric_csv(table, rates, out_dir / "matthew.csv",
                   &ComparisonRow::matthew_degree);

  const auto path = out_dir / "comparison.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(table).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace rankmat
