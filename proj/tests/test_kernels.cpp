#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rankmat/kernels.hpp"

using namespace rankmat;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

// Error bound for a length-k dot product evaluated in a different order.
double dot_tolerance(const std::vector<double>& a, const std::vector<double>& b) {
  double mag = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) mag += std::abs(a[d] * b[d]);
  return 4.0 * static_cast<double>(a.size() + 1) * 0x1.0p-52 * mag + 1e-300;
}

}  // namespace

TEST_CASE("scalar kernels match their definitions") {
  const auto& s = kernels::scalar();
  const double a[] = {1, 2, 3};
  const double b[] = {4, -5, 6};
  CHECK(s.dot(a, b, 3) == 12.0);
  CHECK(s.dot(a, b, 0) == 0.0);

  double u[] = {1, 0};
  double v[] = {0, 1};
  s.pair_step(u, v, 2, 0.5);
  CHECK(u[0] == 1.0);
  CHECK(u[1] == -0.5);
  CHECK(v[0] == -0.5);
  CHECK(v[1] == 1.0);

  const double rows[] = {1, 1, 2, 0, 0, 3};
  const double vec[] = {2, 1};
  double out[3];
  s.row_dots(rows, 3, 2, vec, out);
  CHECK(out[0] == 3.0);
  CHECK(out[1] == 4.0);
  CHECK(out[2] == 3.0);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const kernels::KernelTable* simd = kernels::avx2();
  if (simd == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this build/CPU; skipping");
    return;
  }
  const auto& ref = kernels::scalar();
  std::mt19937_64 rng(7);

  for (std::size_t k = 0; k <= 70; ++k) {
    CAPTURE(k);
    for (int rep = 0; rep < 20; ++rep) {
      const auto a = random_vector(k, rng);
      const auto b = random_vector(k, rng);
      CHECK(std::abs(simd->dot(a.data(), b.data(), k) -
                     ref.dot(a.data(), b.data(), k)) <= dot_tolerance(a, b));

      // Each output is one multiply-add on inputs bounded by 2, so FMA and
      // the scalar multiply-then-add differ by a couple of ulps at most.
      auto u1 = random_vector(k, rng), v1 = random_vector(k, rng);
      auto u2 = u1, v2 = v1;
      const double step = 0.37;
      simd->pair_step(u1.data(), v1.data(), k, step);
      ref.pair_step(u2.data(), v2.data(), k, step);
      for (std::size_t d = 0; d < k; ++d) {
        CHECK(std::abs(u1[d] - u2[d]) <= 0x1.0p-50 * (std::abs(u2[d]) + 4.0));
        CHECK(std::abs(v1[d] - v2[d]) <= 0x1.0p-50 * (std::abs(v2[d]) + 4.0));
      }
    }
  }

  const std::size_t rows = 37, k = 13;
  const auto matrix = random_vector(rows * k, rng);
  const auto vec = random_vector(k, rng);
  std::vector<double> out_simd(rows), out_ref(rows);
  simd->row_dots(matrix.data(), rows, k, vec.data(), out_simd.data());
  ref.row_dots(matrix.data(), rows, k, vec.data(), out_ref.data());
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row(matrix.begin() + r * k, matrix.begin() + (r + 1) * k);
    CHECK(std::abs(out_simd[r] - out_ref[r]) <= dot_tolerance(row, vec));
  }
}

TEST_CASE("kernel selection") {
  const std::string_view before = kernels::active().name;
  CHECK(kernels::select("scalar"));
  CHECK(kernels::active().name == "scalar");
  CHECK_FALSE(kernels::select("neon-on-x86"));
  CHECK(kernels::active().name == "scalar");
  CHECK(kernels::select(before));
}
