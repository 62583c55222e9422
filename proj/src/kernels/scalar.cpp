#include <cmath>

#include "hypx/kernels.hpp"

namespace hypx::kernels::scalar {

cplx phase_sum(const double* x, const double* y, const double* p, const double* wr, const double* wi, size_t n,
               double a, double b, double c) {
    double sr = 0.0, si = 0.0;
    for (size_t k = 0; k < n; ++k) {
        const double t = a * x[k] + b * y[k] + c * p[k];
        const double ct = std::cos(t), st = std::sin(t);
        sr += wr[k] * ct + wi[k] * st;
        si += wi[k] * ct - wr[k] * st;
    }
    return {sr, si};
}

void phase_factor(const double* p, const double* wr, const double* wi, size_t n, double c, double* out_re,
                  double* out_im) {
    for (size_t k = 0; k < n; ++k) {
        const double t = c * p[k];
        const double ct = std::cos(t), st = std::sin(t);
        out_re[k] = wr[k] * ct + wi[k] * st;
        out_im[k] = wi[k] * ct - wr[k] * st;
    }
}

}  // namespace hypx::kernels::scalar
