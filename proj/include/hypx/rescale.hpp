#pragma once

#include <vector>

#include "hypx/caps.hpp"
#include "hypx/hypgeo.hpp"
#include "hypx/phase.hpp"
#include "hypx/rects.hpp"

namespace hypx {

// Frame at z0 and the box [-w, w] x [-b, b] with w = K^{-3/4} in frame coordinates.
// L is the parallelogram z0 + T (box).
struct RescaleData {
    Vec2 z0;
    double A1 = 0.0, B1 = 0.0, q0 = 1.0;
    Mat2 T;
    double b = 0.0;
    double w = 0.0;
    int K = 0;
    Vec2 grad0;
    double phi0 = 0.0;

    double detT() const { return T.det(); }
    Vec2 to_sigma(Vec2 zp) const;  // z0 + T (w x', b y')
    std::array<Vec2, 4> corners() const;
    bool in_L(Vec2 z, double tol = 1e-12) const;
};

RescaleData make_rescale(const PhaseFunction& phi, Vec2 z0, double b, int K);
// Center of the strip, half-length clamped to [K^{-3/4}, K^{-eps'}], then shrunk so L lies in Sigma.
RescaleData rescale_from_strip(const PhaseFunction& phi, const Strip& L, int K, double eps_prime);
// Up to count A-strips, evenly spread over the family, whose frame box fits in Sigma.
std::vector<int> rescalable_strips(const PhaseFunction& phi, const StripFamily& fam, int count);
// Largest b keeping z0 + T ([-w, w] x [-b, b]) inside Sigma.
double max_b_inside(const RescaleData& rd);

// q0^{-1} [phi(z0 + T z~) - phi(z0) - grad phi(z0) . T z~] on the doubled frame box.
PhaseFunction tilde_phi(const PhaseFunction& phi, const RescaleData& rd);
// (K^{3/4} / b) phi~(K^{-3/4} x', b y') on 2 Sigma.
PhaseFunction phi_s(const PhaseFunction& phi, const RescaleData& rd);

// S xi, with the factor q0 on the third component from the exact change of variables.
Vec3 xi_map(const RescaleData& rd, const Vec3& xi);

// f^L(x', y') = f(z0 + T (K^{-3/4} x', b y')) on Sigma.
Amplitude rescale_amplitude(const Amplitude& f, const RescaleData& rd);
// f restricted to L.
Amplitude restrict_to_L(const Amplitude& f, const RescaleData& rd);

// E_phi (f 1_L)(xi) by iterated quadrature in z over the parallelogram.
cplx extend_on_L(const PhaseFunction& phi, const Amplitude& f, const RescaleData& rd, const Vec3& xi,
                 double quad_tol, int order = 8);
// Integral of |f|^2 over L.
double l2_sq_on_L(const Amplitude& f, const RescaleData& rd);

struct IdentitySample {
    Vec3 xi;
    Vec3 s_xi;
    double lhs = 0.0;  // |E_phi f_L(xi)|
    double rhs = 0.0;  // det T b K^{-3/4} |E_{phi^s} f^L(S xi)|
    double rel_err = 0.0;
};

struct IdentityReport {
    std::vector<IdentitySample> samples;
    double max_rel_err = 0.0;
    double jacobian = 0.0;  // det T b K^{-3/4}
};

IdentityReport scaling_identity_check(const PhaseFunction& phi, const Amplitude& f, const RescaleData& rd,
                                      const std::vector<Vec3>& xi_samples, double quad_tol);

struct NormReport {
    double fL_l2 = 0.0;         // ||f_L||_2
    double fLs_l2 = 0.0;        // ||f^L||_2
    double predicted_l2 = 0.0;  // (det T b K^{-3/4})^{-1/2} ||f_L||_2
    double l2_rel_err = 0.0;
    bool l2_bound_ok = false;   // ||f^L||_2 <= (b K^{-3/4})^{-1/2} ||f_L||_2 (1 + 1e-10)
    double f_sup = 0.0;         // sampled sup |f| on L
    double fLs_sup = 0.0;       // sampled sup |f^L| on Sigma
    bool sup_ok = false;
};

NormReport norm_relations(const PhaseFunction& phi, const Amplitude& f, const RescaleData& rd);

struct NormalFormReport {
    double max_residual = 0.0;  // phi~ or phi^s at 0 against the xy normal form
};

NormalFormReport normal_form_residual(const PhaseFunction& psi);

struct CrucialReport {
    double max_value = 0.0;  // max |<omega, grad>^2 phi| over samples
    double C = 0.0;          // max_value / (mu K^{-3/4})
    size_t samples = 0;
};

// Samples every A-strip of the family on a grid; omega is the unit strip direction.
CrucialReport crucial_observation(const PhaseFunction& phi, const StripFamily& fam, int samples_u = 17,
                                  int samples_w = 5);

}  // namespace hypx
