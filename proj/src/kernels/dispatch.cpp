#include <atomic>

#include "hypx/kernels.hpp"

namespace hypx::kernels {

namespace {

Isa detect() { return avx2_available() ? Isa::Avx2 : Isa::Scalar; }

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (isa == Isa::Avx2 && !avx2_available()) throw Error(ErrorCode::InvalidParam, "AVX2 not available on this CPU");
    current().store(isa, std::memory_order_relaxed);
}

cplx phase_sum(const double* x, const double* y, const double* p, const double* wr, const double* wi, size_t n,
               double a, double b, double c) {
    if (active_isa() == Isa::Avx2) return avx2::phase_sum(x, y, p, wr, wi, n, a, b, c);
    return scalar::phase_sum(x, y, p, wr, wi, n, a, b, c);
}

void phase_factor(const double* p, const double* wr, const double* wi, size_t n, double c, double* out_re,
                  double* out_im) {
    if (active_isa() == Isa::Avx2) return avx2::phase_factor(p, wr, wi, n, c, out_re, out_im);
    scalar::phase_factor(p, wr, wi, n, c, out_re, out_im);
}

}  // namespace hypx::kernels
