#include "kernels_impl.hpp"

namespace rankmat::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t k) {
  double acc = 0.0;
  for (std::size_t d = 0; d < k; ++d) acc += a[d] * b[d];
  return acc;
}

void pair_step_scalar(double* u, double* v, std::size_t k, double step) {
  for (std::size_t d = 0; d < k; ++d) {
    const double ud = u[d];
    const double vd = v[d];
    u[d] = ud - step * vd;
    v[d] = vd - step * ud;
  }
}

void row_dots_scalar(const double* rows, std::size_t row_count, std::size_t k,
                     const double* vec, double* out) {
  for (std::size_t r = 0; r < row_count; ++r)
    out[r] = dot_scalar(rows + r * k, vec, k);
}

}  // namespace rankmat::kernels::detail
