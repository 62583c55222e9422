#include <immintrin.h>

#include <cmath>

#include "hypx/kernels.hpp"

// Compiled for AVX2+FMA per function so the rest of the TU stays baseline;
// only reached after the dispatcher has checked the CPU.
#define HYPX_AVX2 __attribute__((target("avx2,fma")))

namespace hypx::kernels::avx2 {

namespace {

// Cody-Waite split of pi/2 and minimax polynomials on [-pi/4, pi/4].
constexpr double kTwoOverPi = 0.63661977236758134308;
constexpr double kPio2Hi = 1.5707963267948966;
constexpr double kPio2Lo = 6.123233995736766e-17;

constexpr double kS0 = 1.58962301576546568060e-10;
constexpr double kS1 = -2.50507477628578072866e-8;
constexpr double kS2 = 2.75573136213857245213e-6;
constexpr double kS3 = -1.98412698295895385996e-4;
constexpr double kS4 = 8.33333333332211858878e-3;
constexpr double kS5 = -1.66666666666666307295e-1;

constexpr double kC0 = -1.13585365213876817300e-11;
constexpr double kC1 = 2.08757008419747316778e-9;
constexpr double kC2 = -2.75573141792967388112e-7;
constexpr double kC3 = 2.48015872888517045348e-5;
constexpr double kC4 = -1.38888888888730564116e-3;
constexpr double kC5 = 4.16666666666665929218e-2;

HYPX_AVX2 inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out) {
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2Hi), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2Lo), r);
    const __m256d z = _mm256_mul_pd(r, r);

    __m256d ps = _mm256_set1_pd(kS0);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS1));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS2));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS3));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS4));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS5));
    const __m256d sr = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

    __m256d pc = _mm256_set1_pd(kC0);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC1));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC2));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC3));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC4));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC5));
    const __m256d cr = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                                       _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

    // Quadrant q = n mod 4: bit 0 swaps sin and cos, bit 1 flips sin, bit 0 xor bit 1 flips cos.
    const __m128i q = _mm256_cvtpd_epi32(n);
    const __m256i q64 = _mm256_cvtepi32_epi64(q);
    const __m256i one = _mm256_set1_epi64x(1), two = _mm256_set1_epi64x(2);
    const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q64, one), one));
    const __m256i b1 = _mm256_cmpeq_epi64(_mm256_and_si256(q64, two), two);
    const __m256i b0 = _mm256_castpd_si256(swap);
    const __m256d sign_bit = _mm256_set1_pd(-0.0);
    const __m256d flip_s = _mm256_and_pd(_mm256_castsi256_pd(b1), sign_bit);
    const __m256d flip_c = _mm256_and_pd(_mm256_castsi256_pd(_mm256_xor_si256(b0, b1)), sign_bit);
    const __m256d s = _mm256_blendv_pd(sr, cr, swap);
    const __m256d c = _mm256_blendv_pd(cr, sr, swap);
    s_out = _mm256_xor_pd(s, flip_s);
    c_out = _mm256_xor_pd(c, flip_c);
}

}  // namespace

HYPX_AVX2 void sincos4(const double* x, double* s, double* c) {
    __m256d vs, vc;
    sincos_pd(_mm256_loadu_pd(x), vs, vc);
    _mm256_storeu_pd(s, vs);
    _mm256_storeu_pd(c, vc);
}

HYPX_AVX2 cplx phase_sum(const double* x, const double* y, const double* p, const double* wr, const double* wi,
                         size_t n, double a, double b, double c) {
    const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b), vcc = _mm256_set1_pd(c);
    __m256d acc_r = _mm256_setzero_pd(), acc_i = _mm256_setzero_pd();
    size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d t = _mm256_mul_pd(va, _mm256_loadu_pd(x + k));
        t = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + k), t);
        t = _mm256_fmadd_pd(vcc, _mm256_loadu_pd(p + k), t);
        __m256d st, ct;
        sincos_pd(t, st, ct);
        const __m256d r = _mm256_loadu_pd(wr + k), i = _mm256_loadu_pd(wi + k);
        acc_r = _mm256_fmadd_pd(r, ct, acc_r);
        acc_r = _mm256_fmadd_pd(i, st, acc_r);
        acc_i = _mm256_fmadd_pd(i, ct, acc_i);
        acc_i = _mm256_fnmadd_pd(r, st, acc_i);
    }
    alignas(32) double lr[4], li[4];
    _mm256_store_pd(lr, acc_r);
    _mm256_store_pd(li, acc_i);
    double sr = (lr[0] + lr[1]) + (lr[2] + lr[3]);
    double si = (li[0] + li[1]) + (li[2] + li[3]);
    for (; k < n; ++k) {
        const double t = a * x[k] + b * y[k] + c * p[k];
        const double ct = std::cos(t), st = std::sin(t);
        sr += wr[k] * ct + wi[k] * st;
        si += wi[k] * ct - wr[k] * st;
    }
    return {sr, si};
}

HYPX_AVX2 void phase_factor(const double* p, const double* wr, const double* wi, size_t n, double c,
                            double* out_re, double* out_im) {
    const __m256d vcc = _mm256_set1_pd(c);
    size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d st, ct;
        sincos_pd(_mm256_mul_pd(vcc, _mm256_loadu_pd(p + k)), st, ct);
        const __m256d r = _mm256_loadu_pd(wr + k), i = _mm256_loadu_pd(wi + k);
        _mm256_storeu_pd(out_re + k, _mm256_fmadd_pd(i, st, _mm256_mul_pd(r, ct)));
        _mm256_storeu_pd(out_im + k, _mm256_fnmadd_pd(r, st, _mm256_mul_pd(i, ct)));
    }
    for (; k < n; ++k) {
        const double t = c * p[k];
        const double ct = std::cos(t), st = std::sin(t);
        out_re[k] = wr[k] * ct + wi[k] * st;
        out_im[k] = wi[k] * ct - wr[k] * st;
    }
}

}  // namespace hypx::kernels::avx2
