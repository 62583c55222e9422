#include "hypx/hypgeo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hypx {

namespace {

void check_grids(const Cap& c1, const Cap& c2, double mu, int K) {
    if (c1.K != K || c2.K != K || c1.mu != mu || c2.mu != mu)
        throw Error(ErrorCode::MismatchedGrid, "caps do not belong to the (K, mu) grid");
}

struct HessParts {
    double xx, xy, yy, H, s;
};

HessParts hess_parts(const PhaseFunction& phi, Vec2 z) {
    HessParts p;
    p.xx = phi.deriv(2, 0, z);
    p.xy = phi.deriv(1, 1, z);
    p.yy = phi.deriv(0, 2, z);
    p.H = p.xy * p.xy - p.xx * p.yy;
    if (!(p.H > 0.0)) {
        std::ostringstream os;
        os << "H=" << p.H << " at (" << z.x << "," << z.y << ")";
        throw Error(ErrorCode::NonpositiveH, os.str());
    }
    p.s = p.xy + std::sqrt(p.H);
    return p;
}

// Gradient of numerator/s where s = phi_xy + sqrt(H).
Vec2 quotient_grad(const PhaseFunction& phi, Vec2 z, bool use_yy) {
    const HessParts p = hess_parts(phi, z);
    const double xxx = phi.deriv(3, 0, z), xxy = phi.deriv(2, 1, z);
    const double xyy = phi.deriv(1, 2, z), yyy = phi.deriv(0, 3, z);
    // d/dx and d/dy of phi_xx, phi_xy, phi_yy.
    const double dxx[2] = {xxx, xxy};
    const double dxy[2] = {xxy, xyy};
    const double dyy[2] = {xyy, yyy};
    const double num = use_yy ? p.yy : p.xx;
    const double sqH = std::sqrt(p.H);
    double g[2];
    for (int k = 0; k < 2; ++k) {
        double dH = 2.0 * p.xy * dxy[k] - dxx[k] * p.yy - p.xx * dyy[k];
        double ds = dxy[k] + dH / (2.0 * sqH);
        double dnum = use_yy ? dyy[k] : dxx[k];
        g[k] = (dnum * p.s - num * ds) / (p.s * p.s);
    }
    return {g[0], g[1]};
}

double A_or_override(const PhaseFunction& phi, Vec2 z, const ClassifyOptions& o) {
    return o.A_override ? o.A_override(z) : A_of(phi, z);
}
double B_or_override(const PhaseFunction& phi, Vec2 z, const ClassifyOptions& o) {
    return o.B_override ? o.B_override(z) : B_of(phi, z);
}

// Safeguarded Newton for an increasing function f on [lo, hi].
template <class F, class DF>
double monotone_root(F f, DF df, double x0, double lo, double hi) {
    double flo = f(lo), fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0) {
        std::ostringstream os;
        os << "level not attained on [" << lo << "," << hi << "]";
        throw Error(ErrorCode::NoConvergence, os.str());
    }
    double x = std::clamp(x0, lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) lo = x;
        else hi = x;
        double d = df(x);
        double xn = (d > 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::fabs(xn - x) <= 1e-15 * std::max(1.0, std::fabs(x)) || hi - lo <= 1e-15) {
            x = xn;
            break;
        }
        x = xn;
    }
    if (std::fabs(f(x)) > 1e-12) throw Error(ErrorCode::NoConvergence, "level curve residual > 1e-12");
    return x;
}

}  // namespace

FrameData frame(const PhaseFunction& phi, Vec2 z) {
    const HessParts p = hess_parts(phi, z);
    FrameData f;
    f.at = z;
    f.H = p.H;
    f.A = p.yy / p.s;
    f.B = p.xx / p.s;
    f.q = 2.0 * p.H / p.s;
    f.T = {1.0, -f.A, -f.B, 1.0};
    f.hess = {p.xx, p.xy, p.xy, p.yy};
    return f;
}

double A_of(const PhaseFunction& phi, Vec2 z) {
    const HessParts p = hess_parts(phi, z);
    return p.yy / p.s;
}

double B_of(const PhaseFunction& phi, Vec2 z) {
    const HessParts p = hess_parts(phi, z);
    return p.xx / p.s;
}

Vec2 grad_A(const PhaseFunction& phi, Vec2 z) { return quotient_grad(phi, z, true); }
Vec2 grad_B(const PhaseFunction& phi, Vec2 z) { return quotient_grad(phi, z, false); }

TPair t_funcs(const FrameData& fz, const PhaseFunction& phi, Vec2 z1, Vec2 z2) {
    const Vec2 d = phi.grad(z2) - phi.grad(z1);
    return {d.x - fz.B * d.y, d.y - fz.A * d.x};
}

TPair t_funcs(const PhaseFunction& phi, Vec2 z, Vec2 z1, Vec2 z2) {
    return t_funcs(frame(phi, z), phi, z1, z2);
}

GammaValue gamma4(const PhaseFunction& phi, Vec2 z, Vec2 z1, Vec2 z2, Vec2 z1p, Vec2 z2p) {
    const FrameData f = frame(phi, z);
    const Vec2 d = phi.grad(z2) - phi.grad(z1);
    const Vec2 dp = phi.grad(z2p) - phi.grad(z1p);
    const double xx = f.hess.a11, xy = f.hess.a12, yy = f.hess.a22;
    GammaValue g;
    // Inverse Hessian is [[yy,-xy],[-xy,xx]] / (-H).
    g.direct = (yy * d.x * dp.x - xy * (d.x * dp.y + d.y * dp.x) + xx * d.y * dp.y) / (-f.H);
    const double t1 = d.x - f.B * d.y, t2 = d.y - f.A * d.x;
    const double t1p = dp.x - f.B * dp.y, t2p = dp.y - f.A * dp.x;
    g.factorized = (t1 * t2p + t1p * t2) / f.q;
    return g;
}

GammaValue gamma2(const PhaseFunction& phi, Vec2 z, Vec2 z1, Vec2 z2) {
    return gamma4(phi, z, z1, z2, z1, z2);
}

double IdentityResiduals::max() const {
    return std::max({factorization, four_point, four_point_symmetry, normal_form, jacobian, tdiff, a_relation,
                     antisymmetry});
}

IdentityResiduals identity_residuals(const PhaseFunction& phi, Vec2 z, Vec2 z1, Vec2 z2, Vec2 z1p, Vec2 z2p) {
    auto rel = [](double x, double y) { return std::fabs(x - y) / std::max(1.0, std::fabs(y)); };
    const FrameData f = frame(phi, z);
    IdentityResiduals r;
    const TPair t = t_funcs(f, phi, z1, z2);
    r.factorization = rel(gamma2(phi, z, z1, z2).direct, 2.0 * t.t1 * t.t2 / f.q);
    const GammaValue g4 = gamma4(phi, z, z1, z2, z1p, z2p);
    r.four_point = rel(g4.direct, g4.factorized);
    r.four_point_symmetry = rel(gamma4(phi, z, z1p, z2p, z1, z2).direct, g4.direct);
    const Mat2 n = f.T.transpose() * f.hess * f.T;
    r.normal_form = std::max({rel(n.a11, 0.0), rel(n.a22, 0.0), rel(n.a12, f.q), rel(n.a21, f.q)});
    r.jacobian = rel(f.T.det(), f.q / std::sqrt(f.H));
    const double t2a = t_funcs(phi, z1, z1, z2).t2, t2b = t_funcs(phi, z2, z1, z2).t2;
    r.tdiff = rel(t2a - t2b, (A_of(phi, z2) - A_of(phi, z1)) * (phi.deriv(1, 0, z2) - phi.deriv(1, 0, z1)));
    const double xx = f.hess.a11, xy = f.hess.a12, yy = f.hess.a22;
    r.a_relation = rel(-(yy - f.A * xy) / (xy - f.A * xx), -f.A);
    const TPair u = t_funcs(f, phi, z2, z1);
    r.antisymmetry = std::max(std::fabs(t.t1 + u.t1), std::fabs(t.t2 + u.t2));
    return r;
}

bool strongly_separated(const PhaseFunction& phi, const Cap& c1, const Cap& c2, double mu, int K) {
    check_grids(c1, c2, mu, K);
    const double thr = kSeparationConstant * std::sqrt(mu) / K;
    const TPair a = t_funcs(phi, c1.center, c1.center, c2.center);
    const TPair b = t_funcs(phi, c2.center, c1.center, c2.center);
    const double m = std::max(std::min(std::fabs(a.t1), std::fabs(a.t2)),
                              std::min(std::fabs(b.t1), std::fabs(b.t2)));
    return m >= thr;
}

const char* pair_tag_name(PairTag t) {
    switch (t) {
        case PairTag::Separated: return "SEPARATED";
        case PairTag::CaseA: return "CASE_A";
        case PairTag::CaseB: return "CASE_B";
        case PairTag::CaseC: return "CASE_C";
    }
    return "?";
}

PairClass pair_relation(const PhaseFunction& phi, const Cap& c1, const Cap& c2, double mu, int K,
                        const ClassifyOptions& opts) {
    check_grids(c1, c2, mu, K);
    const Vec2 z1 = c1.center, z2 = c2.center;
    PairClass pc;
    const TPair a = t_funcs(phi, z1, z1, z2);
    const TPair b = t_funcs(phi, z2, z1, z2);
    pc.t_values = {a.t1, a.t2, b.t1, b.t2};
    const double dx = std::fabs(z2.x - z1.x), dy = std::fabs(z2.y - z1.y);
    pc.orientation = (dy >= dx) ? Orientation::YDominant : Orientation::XDominant;
    if (strongly_separated(phi, c1, c2, mu, K)) {
        pc.tag = PairTag::Separated;
        return pc;
    }
    const double case_a = kCaseConstant * std::sqrt(mu) / K;
    const double case_b = std::sqrt(mu) * std::pow(static_cast<double>(K), -0.75);
    if (pc.orientation == Orientation::YDominant) {
        if (dy <= case_a) pc.tag = PairTag::CaseA;
        else if (std::fabs(A_or_override(phi, z1, opts) - A_or_override(phi, z2, opts)) > case_b)
            pc.tag = PairTag::CaseB;
        else pc.tag = PairTag::CaseC;
    } else {
        if (dx <= case_a) pc.tag = PairTag::CaseA;
        else if (std::fabs(B_or_override(phi, z1, opts) - B_or_override(phi, z2, opts)) > case_b)
            pc.tag = PairTag::CaseB;
        else pc.tag = PairTag::CaseC;
    }
    return pc;
}

PairClass classify_pair(const PhaseFunction& phi, const Cap& c1, const Cap& c2, double mu, int K,
                        const ClassifyOptions& opts) {
    PairClass pc = pair_relation(phi, c1, c2, mu, K, opts);
    if (pc.tag == PairTag::Separated)
        throw Error(ErrorCode::SeparatedPair, "classify_pair called on a strongly separated pair");
    return pc;
}

double level_curve_x(const PhaseFunction& phi, Vec2 z1, double v, double y) {
    const double A1 = A_of(phi, z1);
    const Vec2 g1 = phi.grad(z1);
    const Box& d = phi.domain();
    auto f = [&](double x) {
        Vec2 g = phi.grad({x, y});
        return (g.y - g1.y) - A1 * (g.x - g1.x) - v;
    };
    auto df = [&](double x) { return phi.deriv(1, 1, {x, y}) - A1 * phi.deriv(2, 0, {x, y}); };
    return monotone_root(f, df, z1.x + v, d.xlo, d.xhi);
}

double level_curve_y(const PhaseFunction& phi, Vec2 z1, double v, double x) {
    const double B1 = B_of(phi, z1);
    const Vec2 g1 = phi.grad(z1);
    const Box& d = phi.domain();
    auto f = [&](double y) {
        Vec2 g = phi.grad({x, y});
        return (g.x - g1.x) - B1 * (g.y - g1.y) - v;
    };
    auto df = [&](double y) { return phi.deriv(1, 1, {x, y}) - B1 * phi.deriv(0, 2, {x, y}); };
    return monotone_root(f, df, z1.y + v, d.ylo, d.yhi);
}

Vec2 tangent_dir(const PhaseFunction& phi, Vec2 z1, double v, double y) {
    const double A1 = A_of(phi, z1);
    const Vec2 z{level_curve_x(phi, z1, v, y), y};
    const double tx = phi.deriv(1, 1, z) - A1 * phi.deriv(2, 0, z);
    const double ty = phi.deriv(0, 2, z) - A1 * phi.deriv(1, 1, z);
    return {-ty / tx, 1.0};
}

Vec2 tangent_dir_x(const PhaseFunction& phi, Vec2 z1, double v, double x) {
    const double B1 = B_of(phi, z1);
    const Vec2 z{x, level_curve_y(phi, z1, v, x)};
    const double ty = phi.deriv(1, 1, z) - B1 * phi.deriv(0, 2, z);
    const double tx = phi.deriv(2, 0, z) - B1 * phi.deriv(1, 1, z);
    return {1.0, -tx / ty};
}

double min_sampled_gamma(const PhaseFunction& phi, const Cap& c1, const Cap& c2, int n) {
    if (n < 1) throw Error(ErrorCode::InvalidParam, "sample count must be >= 1");
    // z goes in the cap whose center carries the separation.
    const TPair a = t_funcs(phi, c1.center, c1.center, c2.center);
    const TPair b = t_funcs(phi, c2.center, c1.center, c2.center);
    const bool z_in_second = std::min(std::fabs(b.t1), std::fabs(b.t2)) >=
                             std::min(std::fabs(a.t1), std::fabs(a.t2));
    // Center, corners, then edge midpoints of the clipped cap.
    auto samples = [n](const Cap& c) {
        const Box& b = c.clip;
        const double mx = 0.5 * (b.xlo + b.xhi), my = 0.5 * (b.ylo + b.yhi);
        const std::vector<Vec2> all = {{mx, my},     {b.xlo, b.ylo}, {b.xhi, b.yhi}, {b.xlo, b.yhi},
                                       {b.xhi, b.ylo}, {mx, b.ylo},  {mx, b.yhi},    {b.xlo, my},
                                       {b.xhi, my}};
        if (n > static_cast<int>(all.size()))
            throw Error(ErrorCode::InvalidParam, "at most 9 samples per cap");
        return std::vector<Vec2>(all.begin(), all.begin() + n);
    };
    const auto p1 = samples(c1);
    const auto p2 = samples(c2);
    const auto& pz = z_in_second ? p2 : p1;
    double best = std::numeric_limits<double>::infinity();
    for (Vec2 z : pz) {
        const FrameData f = frame(phi, z);
        for (Vec2 z1 : p1)
            for (Vec2 z2 : p2) {
                const Vec2 d = phi.grad(z2) - phi.grad(z1);
                const double t1 = d.x - f.B * d.y, t2 = d.y - f.A * d.x;
                for (Vec2 z1p : p1)
                    for (Vec2 z2p : p2) {
                        const Vec2 dp = phi.grad(z2p) - phi.grad(z1p);
                        const double t1p = dp.x - f.B * dp.y, t2p = dp.y - f.A * dp.x;
                        best = std::min(best, std::fabs((t1 * t2p + t1p * t2) / f.q));
                    }
            }
    }
    return best;
}

}  // namespace hypx
