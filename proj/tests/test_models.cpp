#include <doctest.h>

#include <cmath>
#include <random>

#include "gradient_oracle.hpp"
#include "rankmat/models.hpp"
#include "rankmat/trainer.hpp"
#include "test_support.hpp"

using namespace rankmat;

TEST_CASE("target per model kind") {
  CHECK(target(ModelKind::vanilla, 4.0, 3, 9) == 4.0);
  CHECK(target(ModelKind::rankmat, 1.0, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  // log 5 to 30 digits: 1.60943791243410037460075933323
  CHECK(target(ModelKind::glovemat, 4.0, 1, 1) ==
        doctest::Approx(1.6094379124341004).epsilon(1e-15));
  // rank-independent for the first two kinds
  CHECK(target(ModelKind::glovemat, 4.0, 7, 200) ==
        target(ModelKind::glovemat, 4.0, 1, 1));
}

TEST_CASE("rankmat target is bounded by log(R_max + 1) / (2 log 2)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rating(0.0, 5.0);
  std::uniform_int_distribution<std::uint32_t> rank(1, 10000);
  const double bound = std::log(6.0) / (2.0 * std::log(2.0));
  for (int i = 0; i < 1000; ++i) {
    const double t = target(ModelKind::rankmat, rating(rng), rank(rng), rank(rng));
    CHECK(t >= 0.0);
    CHECK(t <= bound);
  }
  CHECK(target(ModelKind::rankmat, 5.0, 1, 1) == doctest::Approx(bound));
}

TEST_CASE("predict_rating inverts each target and clamps") {
  const ClampRange clamp{0.5, 5.0};
  CHECK(predict_rating(ModelKind::vanilla, 3.7, 1, 1, clamp) == 3.7);
  CHECK(predict_rating(ModelKind::glovemat, std::log(5.0), 1, 1, clamp) ==
        doctest::Approx(4.0).epsilon(1e-14));
  CHECK(predict_rating(ModelKind::rankmat, 0.5, 1, 1, clamp) ==
        doctest::Approx(1.0).epsilon(1e-14));

  CHECK(predict_rating(ModelKind::vanilla, 9.0, 1, 1, clamp) == 5.0);
  CHECK(predict_rating(ModelKind::vanilla, -9.0, 1, 1, clamp) == 0.5);
  // exponent capped at 50: finite even for huge dot products
  CHECK(std::isfinite(predict_unclamped(ModelKind::glovemat, 1e300, 1, 1)));
  CHECK(std::isfinite(predict_unclamped(ModelKind::rankmat, 1e300, 5, 5)));
  CHECK(predict_unclamped(ModelKind::glovemat, 1e300, 1, 1) == std::expm1(50.0));
  CHECK(predict_rating(ModelKind::rankmat, 1e300, 5, 5, clamp) == 5.0);
  CHECK(predict_rating(ModelKind::glovemat, -1e300, 5, 5, clamp) == 0.5);
}

TEST_CASE("round trip: predict_rating(target(r)) == r") {
  std::mt19937_64 rng(11);
  const ClampRange clamp{0.5, 5.0};
  std::uniform_real_distribution<double> rating(clamp.lo, clamp.hi);
  std::uniform_int_distribution<std::uint32_t> rank(1, 100000);
  for (ModelKind kind : kAllModelKinds) {
    for (int i = 0; i < 1000; ++i) {
      const double r = rating(rng);
      const auto ru = rank(rng), ri = rank(rng);
      CHECK(std::abs(predict_rating(kind, target(kind, r, ru, ri), ru, ri, clamp) -
                     r) <= 1e-9);
    }
  }
}

TEST_CASE("model kind names") {
  for (ModelKind kind : kAllModelKinds)
    CHECK(parse_model_kind(to_string(kind)) == kind);
  CHECK_THROWS(parse_model_kind("svd++"));
}

TEST_CASE("grad_pair worked examples") {
  const auto zero = grad_pair(std::vector<double>{1, 2}, std::vector<double>{3, 4}, 11);
  CHECK(zero.du == std::vector<double>{0, 0});
  CHECK(zero.dv == std::vector<double>{0, 0});

  const auto g = grad_pair(std::vector<double>{1, 0}, std::vector<double>{0, 1}, 1);
  CHECK(g.du == std::vector<double>{0, -2});
  CHECK(g.dv == std::vector<double>{-2, 0});

  CHECK_THROWS(grad_pair(std::vector<double>{1}, std::vector<double>{1, 2}, 0));
}

TEST_CASE("grad_pair matches central finite differences") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k : {1u, 8u, 64u}) {
    double worst = 0.0;
    for (int draw = 0; draw < 1000; ++draw) {
      std::vector<double> u(k), v(k);
      for (auto& x : u) x = normal(rng);
      for (auto& x : v) x = normal(rng);
      const double t = 3.0 * normal(rng);
      const auto g = grad_pair(u, v, t);
      const auto fd = testing::central_difference(u, v, t, 1e-5);
      worst = std::max(worst, testing::relative_error(g.du, g.dv, fd.du, fd.dv));
    }
    CAPTURE(k);
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("loss") {
  const auto d = parse_ratings(
      "userId,movieId,rating,timestamp\n1,1,4,0\n");
  const auto ranks = compute_ranks(d);
  EmbeddingModel model(ModelKind::vanilla, 1, 1, 2, {2.0, 1.0}, {2.0, 1.0});
  CHECK(loss(model, d, ranks) == 1.0);  // dot 5 vs target 4

  EmbeddingModel exact(ModelKind::vanilla, 1, 1, 2, {2.0, 0.0}, {2.0, 0.0});
  CHECK(loss(exact, d, ranks) == 0.0);

  EmbeddingModel wrong(ModelKind::vanilla, 2, 1, 2);
  CHECK_THROWS_AS(loss(wrong, d, ranks), std::invalid_argument);
}

TEST_CASE("loss equals a naive double loop on random data") {
  const auto d = testing::random_dataset(5, 5, 0.7, 23);
  const auto ranks = compute_ranks(d);
  for (ModelKind kind : kAllModelKinds) {
    const auto model = init_embeddings(kind, 5, 5, 4, 99, 1.0);
    double naive = 0.0;
    for (std::size_t u = 0; u < 5; ++u)
      for (std::size_t i = 0; i < 5; ++i)
        for (const auto& r : d.ratings()) {
          if (r.user != u || r.item != i) continue;
          double dot = 0.0;
          for (std::size_t c = 0; c < 4; ++c)
            dot += model.user_factors()[u * 4 + c] * model.item_factors()[i * 4 + c];
          double t = r.value;
          if (kind != ModelKind::vanilla) t = std::log(r.value + 1.0);
          if (kind == ModelKind::rankmat)
            t /= std::log(ranks.user_rank[u] + 1.0) + std::log(ranks.item_rank[i] + 1.0);
          naive += (dot - t) * (dot - t);
        }
    CHECK(loss(model, d, ranks) == doctest::Approx(naive).epsilon(1e-12));
    CHECK(loss(model, d, ranks) >= 0.0);
  }
}

TEST_CASE("model JSON round trip is exact") {
  const auto model = init_embeddings(ModelKind::rankmat, 3, 4, 5, 8, 0.3);
  const auto j = to_json(model);
  CHECK(j.at("kind") == "rankmat");
  CHECK(j.at("k") == 5);
  CHECK(j.at("user_factors").size() == 3);
  CHECK(j.at("item_factors")[0].size() == 5);
  const auto back = model_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back == model);

  auto bad = j;
  bad["user_factors"][1].erase(0);
  CHECK_THROWS(model_from_json(bad));
}
