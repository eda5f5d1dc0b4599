#pragma once

#include <cstddef>

namespace rankmat::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t k);
void pair_step_scalar(double* u, double* v, std::size_t k, double step);
void row_dots_scalar(const double* rows, std::size_t row_count, std::size_t k,
                     const double* vec, double* out);

#if defined(RANKMAT_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t k);
void pair_step_avx2(double* u, double* v, std::size_t k, double step);
void row_dots_avx2(const double* rows, std::size_t row_count, std::size_t k,
                   const double* vec, double* out);
#endif

}  // namespace rankmat::kernels::detail
