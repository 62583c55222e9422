#pragma once

#include <cstddef>

#include "hypx/types.hpp"

namespace hypx::kernels {

enum class Isa { Scalar, Avx2 };
const char* isa_name(Isa isa);

// True when the CPU reports AVX2 and FMA.
bool avx2_available();
// Dispatch target; defaults to the best available and can be pinned for tests.
Isa active_isa();
void force_isa(Isa isa);

// sum_k (wr_k + i wi_k) exp(-i (a x_k + b y_k + c p_k))
cplx phase_sum(const double* x, const double* y, const double* p, const double* wr, const double* wi, size_t n,
               double a, double b, double c);
// out_k = (wr_k + i wi_k) exp(-i c p_k)
void phase_factor(const double* p, const double* wr, const double* wi, size_t n, double c, double* out_re,
                  double* out_im);

namespace scalar {
cplx phase_sum(const double* x, const double* y, const double* p, const double* wr, const double* wi, size_t n,
               double a, double b, double c);
void phase_factor(const double* p, const double* wr, const double* wi, size_t n, double c, double* out_re,
                  double* out_im);
}  // namespace scalar

namespace avx2 {
cplx phase_sum(const double* x, const double* y, const double* p, const double* wr, const double* wi, size_t n,
               double a, double b, double c);
void phase_factor(const double* p, const double* wr, const double* wi, size_t n, double c, double* out_re,
                  double* out_im);
// Vector sincos on 4 lanes, exposed for tests.
void sincos4(const double* x, double* s, double* c);
}  // namespace avx2

}  // namespace hypx::kernels
