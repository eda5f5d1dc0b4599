// rankmat: train, evaluate and compare vanilla / GloVeMat / RankMat matrix
// factorization models on MovieLens-format rating files.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankmat/config.hpp"
#include "rankmat/dataset.hpp"
#include "rankmat/experiments.hpp"
#include "rankmat/format.hpp"
#include "rankmat/kernels.hpp"
#include "rankmat/metrics.hpp"
#include "rankmat/ranking.hpp"
#include "rankmat/trainer.hpp"

namespace {

using namespace rankmat;

// Flags shared by every subcommand that trains: a config file supplies the
// base values and explicit flags override it.
struct TrainFlags {
  std::string config_path;
  std::optional<std::string> kind;
  std::optional<std::size_t> k;
  std::optional<double> lr;
  std::optional<std::size_t> epochs;
  std::optional<std::uint64_t> seed;
  std::optional<double> init_scale;
  bool no_shuffle = false;

  void attach(CLI::App* cmd, bool with_kind_and_lr) {
    cmd->add_option("--config", config_path,
                    "JSON or key=value file with TrainConfig fields and grid");
    if (with_kind_and_lr) {
      cmd->add_option("--kind", kind, "vanilla | glovemat | rankmat");
      cmd->add_option("--lr", lr, "SGD learning rate");
    }
    cmd->add_option("--k", k, "latent dimension");
    cmd->add_option("--epochs", epochs, "training epochs");
    cmd->add_option("--seed", seed, "initialization and shuffle seed");
    cmd->add_option("--init-scale", init_scale, "uniform init upper bound");
    cmd->add_flag("--no-shuffle", no_shuffle,
                  "keep the first epoch's order for every epoch");
  }

  ConfigFile resolve() const {
    ConfigFile file = config_path.empty() ? ConfigFile{} : load_config(config_path);
    TrainConfig& c = file.train;
    if (kind) c.kind = parse_model_kind(*kind);
    if (k) c.k = *k;
    if (lr) c.learning_rate = *lr;
    if (epochs) c.epochs = *epochs;
    if (seed) c.seed = *seed;
    if (init_scale) c.init_scale = *init_scale;
    if (no_shuffle) c.shuffle_each_epoch = false;
    return file;
  }
};

struct SplitFlags {
  double ratio = kDefaultSplitRatio;
  std::uint64_t seed = kDefaultSplitSeed;
  std::string basis = "sum";

  void attach(CLI::App* cmd) {
    cmd->add_option("--split-ratio", ratio, "per-user train fraction")
        ->capture_default_str();
    cmd->add_option("--split-seed", seed, "train/test split seed")
        ->capture_default_str();
    cmd->add_option("--basis", basis, "popularity basis for ranks: sum | count")
        ->capture_default_str();
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix factorization with popularity-rank calibrated targets"};
  app.require_subcommand(1);
  std::string kernel;
  app.add_option("--kernel", kernel, "force kernel table: scalar | avx2");

  // compare
  auto* compare = app.add_subcommand(
      "compare", "sweep learning rates for all three model kinds");
  std::string cmp_data, cmp_grid, cmp_out = "results";
  std::size_t cmp_topn = kDefaultTopN, cmp_jobs = 1;
  TrainFlags cmp_train;
  SplitFlags cmp_split;
  compare->add_option("--data", cmp_data, "ratings.csv")->required();
  compare->add_option("--grid", cmp_grid, "comma-separated learning rates");
  compare->add_option("--topn", cmp_topn, "recommendation list length")
      ->capture_default_str();
  compare->add_option("--out", cmp_out, "output directory")->capture_default_str();
  compare->add_option("--jobs", cmp_jobs, "parallel cells (0 = all cores)")
      ->capture_default_str();
  cmp_train.attach(compare, false);
  cmp_split.attach(compare);

  // train
  auto* train_cmd = app.add_subcommand("train", "train one model");
  std::string tr_data, tr_out = "model.json", tr_loss;
  TrainFlags tr_train;
  SplitFlags tr_split;
  train_cmd->add_option("--data", tr_data, "ratings.csv")->required();
  train_cmd->add_option("--out", tr_out, "checkpoint path")->capture_default_str();
  train_cmd->add_option("--loss-csv", tr_loss, "write per-epoch loss here");
  tr_train.attach(train_cmd, true);
  tr_split.attach(train_cmd);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "MAE and Matthew-effect degree");
  std::string ev_data, ev_model, ev_out, ev_freq;
  std::size_t ev_topn = kDefaultTopN;
  eval_cmd->add_option("--data", ev_data, "ratings.csv")->required();
  eval_cmd->add_option("--model", ev_model, "checkpoint from `train`")->required();
  eval_cmd->add_option("--topn", ev_topn, "recommendation list length")
      ->capture_default_str();
  eval_cmd->add_option("--out", ev_out, "report path (default stdout)");
  eval_cmd->add_option("--freq-csv", ev_freq,
                       "dump recommendation frequency distribution");

  // ranks
  auto* ranks_cmd = app.add_subcommand("ranks", "dump popularity ranks");
  std::string rk_data, rk_out;
  SplitFlags rk_split;
  bool rk_full = false;
  ranks_cmd->add_option("--data", rk_data, "ratings.csv")->required();
  ranks_cmd->add_option("--out", rk_out, "CSV path")->required();
  ranks_cmd->add_flag("--full", rk_full, "rank on all ratings, not the train split");
  rk_split.attach(ranks_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!kernel.empty() && !kernels::select(kernel)) {
      std::cerr << "kernel '" << kernel << "' is not available\n";
      return 2;
    }

    if (compare->parsed()) {
      const ConfigFile file = cmp_train.resolve();
      ComparisonOptions opts;
      opts.data_path = cmp_data;
      opts.base = file.train;
      if (!cmp_grid.empty()) opts.grid = parse_rate_list(cmp_grid);
      else if (file.grid) opts.grid = *file.grid;
      opts.split_ratio = cmp_split.ratio;
      opts.split_seed = cmp_split.seed;
      opts.basis = parse_rank_basis(cmp_split.basis);
      opts.top_n = cmp_topn;
      opts.jobs = cmp_jobs;
      const ComparisonTable table = run_comparison(opts);
      emit_plot_data(table, cmp_out);
      for (const auto& row : table.rows) {
        std::printf("lr=%-10s %-8s mae=%-10s matthew=%-10s%s\n",
                    format_real(row.learning_rate).c_str(),
                    std::string(to_string(row.kind)).c_str(),
                    row.mae ? format_real(*row.mae).c_str() : "NaN",
                    row.matthew_degree ? format_real(*row.matthew_degree).c_str()
                                       : "NaN",
                    row.diverged ? "  (diverged)" : "");
      }
      std::printf("wrote %s/{mae.csv,matthew.csv,comparison.json}\n",
                  cmp_out.c_str());
      return 0;
    }

    if (train_cmd->parsed()) {
      const TrainConfig config = tr_train.resolve().train;
      const RatingDataset data = load_ratings(tr_data);
      const SplitPair halves = split(data, tr_split.ratio, tr_split.seed);
      const RankTable ranks =
          compute_ranks(halves.train, parse_rank_basis(tr_split.basis));
      const TrainTrace trace = train(config, halves.train, ranks);
      nlohmann::json extra = {{"data", tr_data},
                              {"split_ratio", tr_split.ratio},
                              {"split_seed", tr_split.seed},
                              {"rank_basis", tr_split.basis},
                              {"diverged", trace.diverged},
                              {"epochs_run", trace.epoch_loss.size()},
                              {"final_loss", trace.epoch_loss.back()}};
      save_checkpoint(tr_out, trace.model, config, extra);
      if (!tr_loss.empty()) {
        std::string csv = "epoch,loss\n";
        for (std::size_t e = 0; e < trace.epoch_loss.size(); ++e)
          csv += std::to_string(e + 1) + "," + format_real(trace.epoch_loss[e]) + "\n";
        write_text(tr_loss, csv);
      }
      std::printf("%s k=%zu lr=%s epochs=%zu final_loss=%s%s -> %s\n",
                  std::string(to_string(config.kind)).c_str(), config.k,
                  format_real(config.learning_rate).c_str(),
                  trace.epoch_loss.size(),
                  format_real(trace.epoch_loss.back()).c_str(),
                  trace.diverged ? " (diverged)" : "", tr_out.c_str());
      return 0;
    }

    if (eval_cmd->parsed()) {
      const Checkpoint cp = load_checkpoint(ev_model);
      const RatingDataset data = load_ratings(ev_data);
      const SplitPair halves =
          split(data, cp.extra.value("split_ratio", kDefaultSplitRatio),
                cp.extra.value("split_seed", kDefaultSplitSeed));
      const RankTable ranks = compute_ranks(
          halves.train, parse_rank_basis(cp.extra.value("rank_basis", "sum")));
      check_dimensions(cp.model, halves.train, ranks);
      const ClampRange clamp = clamp_of(data);
      TrainTrace trace{{}, cp.extra.value("diverged", false), cp.model};
      MetricReport report =
          evaluate(cp.config, trace, halves.train, halves.test, ranks, ev_topn);
      report.epochs_run = cp.extra.value("epochs_run", std::size_t{0});
      if (!report.diverged && cp.extra.contains("final_loss") &&
          cp.extra.at("final_loss").is_number())
        report.final_train_loss = cp.extra.at("final_loss").get<double>();
      if (!ev_freq.empty() && !report.diverged) {
        const auto lists =
            top_n_recommend(cp.model, halves.train, ranks, ev_topn, clamp);
        write_freq_csv(
            FreqDistribution::from_recommendations(lists, cp.model.item_count()),
            ev_freq);
      }
      write_text(ev_out, to_json(report).dump(2) + "\n");
      return 0;
    }

    if (ranks_cmd->parsed()) {
      const RatingDataset data = load_ratings(rk_data);
      const RankBasis basis = parse_rank_basis(rk_split.basis);
      const RankTable ranks =
          rk_full ? compute_ranks(data, basis)
                  : compute_ranks(split(data, rk_split.ratio, rk_split.seed).train,
                                  basis);
      write_rank_csv(ranks, rk_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "rankmat: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
