#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense inner loops shared by the trainer and the evaluators. Each kernel
// has a portable scalar reference and, on x86-64, an AVX2+FMA variant. The
// variant is picked once at first use from the CPU's capabilities; setting
// RANKMAT_KERNEL=scalar (or avx2) in the environment overrides the choice.
namespace rankmat::kernels {

struct KernelTable {
  std::string_view name;

  // sum_d a[d] * b[d]
  double (*dot)(const double* a, const double* b, std::size_t k);

  // Simultaneous SGD step on a factor pair:
  //   u' = u - step * v,  v' = v - step * u   (both from the pre-update values)
  void (*pair_step)(double* u, double* v, std::size_t k, double step);

  // out[r] = rows[r*k .. r*k+k) . vec  for r in [0, row_count)
  void (*row_dots)(const double* rows, std::size_t row_count, std::size_t k,
                   const double* vec, double* out);
};

const KernelTable& scalar();

// nullptr when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2();

// The dispatched table. Thread-safe; resolved on first call.
const KernelTable& active();

// Force a table by name ("scalar", "avx2"). Returns false if unavailable.
// Intended for tests and the CLI; not safe to call while kernels are running.
bool select(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

}  // namespace rankmat::kernels
