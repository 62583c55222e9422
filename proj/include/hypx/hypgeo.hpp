#pragma once

#include <array>
#include <functional>
#include <optional>

#include "hypx/caps.hpp"
#include "hypx/phase.hpp"

namespace hypx {

inline constexpr double kSeparationConstant = 50.0;
inline constexpr double kCaseConstant = 100.0;

// Null-vector frame at z: T e1 = nu = (1,-B), T e2 = omega = (-A,1).
struct FrameData {
    Vec2 at;
    double H = 0.0;  // phi_xy^2 - phi_xx phi_yy
    double A = 0.0;  // phi_yy / (phi_xy + sqrt H)
    double B = 0.0;  // phi_xx / (phi_xy + sqrt H)
    double q = 0.0;  // 2H / (phi_xy + sqrt H)
    Mat2 T;
    Mat2 hess;
};

FrameData frame(const PhaseFunction& phi, Vec2 z);
double A_of(const PhaseFunction& phi, Vec2 z);
double B_of(const PhaseFunction& phi, Vec2 z);
// Exact gradients of A and B (quotient rule on third derivatives).
Vec2 grad_A(const PhaseFunction& phi, Vec2 z);
Vec2 grad_B(const PhaseFunction& phi, Vec2 z);

struct TPair {
    double t1 = 0.0;
    double t2 = 0.0;
};

// t^1_z(z1,z2) and t^2_z(z1,z2).
TPair t_funcs(const PhaseFunction& phi, Vec2 z, Vec2 z1, Vec2 z2);
TPair t_funcs(const FrameData& fz, const PhaseFunction& phi, Vec2 z1, Vec2 z2);

struct GammaValue {
    double direct = 0.0;      // <D^2phi(z)^{-1} d, d'>
    double factorized = 0.0;  // (1/q)(t1 t2' + t1' t2)
    double residual() const { return std::fabs(direct - factorized); }
};

GammaValue gamma4(const PhaseFunction& phi, Vec2 z, Vec2 z1, Vec2 z2, Vec2 z1p, Vec2 z2p);
GammaValue gamma2(const PhaseFunction& phi, Vec2 z, Vec2 z1, Vec2 z2);

bool strongly_separated(const PhaseFunction& phi, const Cap& c1, const Cap& c2, double mu, int K);

enum class PairTag { Separated, CaseA, CaseB, CaseC };
enum class Orientation { YDominant, XDominant };

const char* pair_tag_name(PairTag t);

struct PairClass {
    PairTag tag = PairTag::CaseA;
    // t1_{z1}(z1,z2), t2_{z1}(z1,z2), t1_{z2}(z1,z2), t2_{z2}(z1,z2) at cap centers.
    std::array<double, 4> t_values{};
    Orientation orientation = Orientation::YDominant;
};

// Synthetic replacement of A and B, used to exercise the Case B branch.
struct ClassifyOptions {
    std::function<double(Vec2)> A_override;
    std::function<double(Vec2)> B_override;
};

PairClass classify_pair(const PhaseFunction& phi, const Cap& c1, const Cap& c2, double mu, int K,
                        const ClassifyOptions& opts = {});
// Same trichotomy, but returns tag Separated instead of throwing.
PairClass pair_relation(const PhaseFunction& phi, const Cap& c1, const Cap& c2, double mu, int K,
                        const ClassifyOptions& opts = {});

// x = h(v,y) solving t^2_{z1}(z1,(x,y)) = v.
double level_curve_x(const PhaseFunction& phi, Vec2 z1, double v, double y);
// y = k(v,x) solving t^1_{z1}(z1,(x,y)) = v (x-dominant mirror).
double level_curve_y(const PhaseFunction& phi, Vec2 z1, double v, double x);

// X_z = (h_y, 1) at z = (h(v,y), y).
Vec2 tangent_dir(const PhaseFunction& phi, Vec2 z1, double v, double y);
// (1, k_x) at z = (x, k(v,x)).
Vec2 tangent_dir_x(const PhaseFunction& phi, Vec2 z1, double v, double x);

// Scaled residuals rel(x, y) = |x - y| / max(1, |y|) of the frame identities.
struct IdentityResiduals {
    double factorization = 0.0;  // Gamma_z(z1,z2) against (2/q) t1 t2
    double four_point = 0.0;     // Gamma_z(z1,z2,z1',z2') against (1/q)(t1 t2' + t1' t2)
    double four_point_symmetry = 0.0;
    double normal_form = 0.0;    // T^t D^2 phi T against [[0, q], [q, 0]]
    double jacobian = 0.0;       // det T against q / sqrt(H)
    double tdiff = 0.0;          // t2_{z1} - t2_{z2} against (A(z2) - A(z1))(phi_x(z2) - phi_x(z1))
    double a_relation = 0.0;     // -(phi_yy - A phi_xy) / (phi_xy - A phi_xx) against -A
    double antisymmetry = 0.0;   // t_z(z1,z2) + t_z(z2,z1)
    double max() const;
};

IdentityResiduals identity_residuals(const PhaseFunction& phi, Vec2 z, Vec2 z1, Vec2 z2, Vec2 z1p, Vec2 z2p);

// min |Gamma_z(z1,z2,z1',z2')| over an n^5 sample with z1,z1' in c1 and z,z2,z2' in c2.
double min_sampled_gamma(const PhaseFunction& phi, const Cap& c1, const Cap& c2, int n);

}  // namespace hypx
