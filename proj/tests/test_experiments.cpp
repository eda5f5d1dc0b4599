#include <doctest.h>

#include <fstream>
#include <sstream>

#include "rankmat/experiments.hpp"
#include "test_support.hpp"

using namespace rankmat;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path write_dataset(const std::filesystem::path& dir,
                                    const RatingDataset& d) {
  const auto path = dir / "ratings.csv";
  std::ofstream out(path);
  out << "userId,movieId,rating,timestamp\n";
  for (const auto& r : d.ratings())
    out << d.users().external_id(r.user) << ',' << d.items().external_id(r.item)
        << ',' << r.value << ",0\n";
  return path;
}

ComparisonOptions small_options(const std::filesystem::path& data) {
  ComparisonOptions o;
  o.data_path = data;
  o.base.epochs = 10;
  o.base.k = 4;
  o.top_n = 3;
  return o;
}

}  // namespace

TEST_CASE("comparison table shape and determinism") {
  const auto dir = testing::scratch_dir("compare");
  const auto data = write_dataset(dir, testing::random_dataset(25, 40, 0.3, 3));

  auto opts = small_options(data);
  opts.grid = {0.01};
  const auto one = run_comparison(opts);
  REQUIRE(one.rows.size() == 3);
  CHECK(one.rows[0].kind == ModelKind::vanilla);
  CHECK(one.rows[1].kind == ModelKind::glovemat);
  CHECK(one.rows[2].kind == ModelKind::rankmat);
  CHECK(one.dataset.user_count == 25);
  CHECK(one.dataset.train_count + one.dataset.test_count == one.dataset.triplet_count);

  opts.grid = {0.03, 0.001, 0.01};
  const auto a = run_comparison(opts);
  opts.jobs = 3;
  const auto b = run_comparison(opts);
  CHECK(a.rows.size() == 9);
  CHECK(to_json(a) == to_json(b));
  // the 0.01 cells equal the single-rate sweep
  for (ModelKind kind : kAllModelKinds)
    CHECK(a.at(0.01, kind).mae == one.at(0.01, kind).mae);

  emit_plot_data(a, dir / "out_a");
  emit_plot_data(b, dir / "out_b");
  for (const char* f : {"mae.csv", "matthew.csv", "comparison.json"})
    CHECK(slurp(dir / "out_a" / f) == slurp(dir / "out_b" / f));

  // rates ascending in the CSVs whatever the grid order
  const auto mae_csv = slurp(dir / "out_a" / "mae.csv");
  CHECK(mae_csv.starts_with("learning_rate,vanilla,glovemat,rankmat\n0.001,"));
  CHECK(mae_csv.find("\n0.01,") < mae_csv.find("\n0.03,"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("plot data for a one-rate table and diverged cells") {
  const auto dir = testing::scratch_dir("emit");
  const auto data = write_dataset(dir, testing::random_dataset(20, 30, 0.4, 8));
  auto opts = small_options(data);
  opts.base.init_scale = 1.0;
  opts.grid = {50.0};
  const auto table = run_comparison(opts);
  for (const auto& row : table.rows) CHECK(row.diverged);

  emit_plot_data(table, dir / "out");
  const auto mae_csv = slurp(dir / "out" / "mae.csv");
  CHECK(mae_csv == "learning_rate,vanilla,glovemat,rankmat\n50,NaN,NaN,NaN\n");
  CHECK(slurp(dir / "out" / "matthew.csv") ==
        "learning_rate,vanilla,glovemat,rankmat\n50,NaN,NaN,NaN\n");
  const auto j = nlohmann::json::parse(slurp(dir / "out" / "comparison.json"));
  CHECK(j.at("rows").size() == 3);
  CHECK(j.at("rows")[0].at("mae").is_null());
  CHECK(j.at("rows")[0].at("diverged") == true);
  CHECK(j.at("dataset").at("user_count") == 20);
  CHECK(j.at("config").at("epochs") == 10);
  std::filesystem::remove_all(dir);
}

TEST_CASE("comparison errors") {
  const auto dir = testing::scratch_dir("cmp_err");
  const auto data = write_dataset(dir, testing::random_dataset(10, 10, 0.5, 1));
  auto opts = small_options(data);
  opts.grid = {};
  CHECK_THROWS(run_comparison(opts));
  opts.grid = {0.01, 0.01};
  CHECK_THROWS(run_comparison(opts));
  opts.grid = {0.01};
  opts.data_path = dir / "missing.csv";
  CHECK_THROWS(run_comparison(opts));
  CHECK_THROWS(emit_plot_data(ComparisonTable{}, dir / "x"));

  opts.data_path = data;
  const auto table = run_comparison(opts);
  std::ofstream(dir / "blocker") << "file, not a directory";
  CHECK_THROWS(emit_plot_data(table, dir / "blocker" / "out"));
  std::filesystem::remove_all(dir);
}
