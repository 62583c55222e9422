#include "hypx/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hypx/extension.hpp"
#include "hypx/quadrature.hpp"

namespace hypx {

Vec2 RescaleData::to_sigma(Vec2 zp) const { return z0 + T.apply({w * zp.x, b * zp.y}); }

std::array<Vec2, 4> RescaleData::corners() const {
    return {to_sigma({-1, -1}), to_sigma({1, -1}), to_sigma({1, 1}), to_sigma({-1, 1})};
}

bool RescaleData::in_L(Vec2 z, double tol) const {
    const double d = detT();
    const Vec2 dz = z - z0;
    // Inverse of T = [[1, -A], [-B, 1]].
    const double u = (dz.x + A1 * dz.y) / d, v = (B1 * dz.x + dz.y) / d;
    return std::fabs(u) <= w * (1.0 + tol) + tol && std::fabs(v) <= b * (1.0 + tol) + tol;
}

RescaleData make_rescale(const PhaseFunction& phi, Vec2 z0, double b, int K) {
    if (K < 1) throw Error(ErrorCode::InvalidParam, "K must be positive");
    const FrameData fr = frame(phi, z0);
    RescaleData rd;
    rd.z0 = z0;
    rd.A1 = fr.A;
    rd.B1 = fr.B;
    rd.q0 = fr.q;
    rd.T = fr.T;
    rd.K = K;
    rd.w = std::pow(static_cast<double>(K), -0.75);
    rd.b = b;
    rd.grad0 = phi.grad(z0);
    rd.phi0 = phi.value(z0);
    if (!(b >= rd.w * (1.0 - 1e-12)) || !(b <= 1.0))
        throw Error(ErrorCode::InvalidParam, "strip length b must lie in [K^{-3/4}, 1]");
    return rd;
}

std::vector<int> rescalable_strips(const PhaseFunction& phi, const StripFamily& fam, int count) {
    std::vector<int> ok;
    for (size_t k = 0; k < fam.members.size(); ++k) {
        if (fam.members[k].family != Family::AStrip) continue;
        try {
            rescale_from_strip(phi, fam.members[k], fam.params.K, fam.params.eps_prime);
            ok.push_back(static_cast<int>(k));
        } catch (const Error&) {
        }
    }
    std::vector<int> out;
    const size_t n = std::min(ok.size(), static_cast<size_t>(std::max(0, count)));
    for (size_t k = 0; k < n; ++k) out.push_back(ok[k * ok.size() / n]);
    return out;
}

double max_b_inside(const RescaleData& rd) {
    const Vec2 nu{rd.T.a11, rd.T.a21}, om{rd.T.a12, rd.T.a22};
    double bmax = 1.0;
    const double zc[2] = {rd.z0.x, rd.z0.y}, nc[2] = {nu.x, nu.y}, oc[2] = {om.x, om.y};
    for (int c = 0; c < 2; ++c) {
        const double room = 1.0 - std::fabs(zc[c]) - rd.w * std::fabs(nc[c]);
        if (std::fabs(oc[c]) > 0.0) bmax = std::min(bmax, room / std::fabs(oc[c]));
        else if (room < 0.0) bmax = -1.0;
    }
    return bmax;
}

RescaleData rescale_from_strip(const PhaseFunction& phi, const Strip& L, int K, double eps_prime) {
    const double w = std::pow(static_cast<double>(K), -0.75);
    const double hi = std::pow(static_cast<double>(K), -eps_prime);
    const double b0 = std::clamp(L.half_length, w, hi);
    RescaleData rd = make_rescale(phi, L.center, b0, K);
    const double bmax = max_b_inside(rd);
    if (bmax < w) throw Error(ErrorCode::InvalidParam, "strip center too close to the boundary of Sigma");
    rd.b = std::min(rd.b, bmax);
    return rd;
}

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct Term {
    double coef;
    int px, py;
};

class TildeModel : public PhaseModel {
public:
    TildeModel(PhaseFunction phi, const RescaleData& rd) : phi_(std::move(phi)), rd_(rd) {
        const int M = phi_.order();
        terms_.resize((M + 1) * (M + 1));
        for (int a = 0; a <= M; ++a)
            for (int b = 0; a + b <= M; ++b) {
                // (d_x - B d_y)^a (-A d_x + d_y)^b
                std::map<std::pair<int, int>, double> acc;
                for (int i = 0; i <= a; ++i)
                    for (int j = 0; j <= b; ++j) {
                        const double c = binom(a, i) * std::pow(-rd.B1, a - i) * binom(b, j) * std::pow(-rd.A1, j);
                        acc[{i + j, (a - i) + (b - j)}] += c;
                    }
                auto& v = terms_[a * (M + 1) + b];
                for (const auto& [k, c] : acc)
                    if (c != 0.0) v.push_back({c, k.first, k.second});
            }
    }

    double deriv(int a, int b, Vec2 zt) const override {
        const Vec2 z = rd_.z0 + rd_.T.apply(zt);
        const int M = phi_.order();
        double s = 0.0;
        for (const Term& t : terms_[a * (M + 1) + b]) s += t.coef * phi_.deriv(t.px, t.py, z);
        if (a + b == 0) s -= rd_.phi0 + dot(rd_.grad0, rd_.T.apply(zt));
        if (a + b == 1) {
            const Vec2 col = a == 1 ? Vec2{rd_.T.a11, rd_.T.a21} : Vec2{rd_.T.a12, rd_.T.a22};
            s -= dot(rd_.grad0, col);
        }
        return s / rd_.q0;
    }

private:
    PhaseFunction phi_;
    RescaleData rd_;
    std::vector<std::vector<Term>> terms_;
};

class ScaledModel : public PhaseModel {
public:
    ScaledModel(PhaseFunction tilde, const RescaleData& rd) : tilde_(std::move(tilde)), rd_(rd) {
        const int M = tilde_.order();
        scale_.resize((M + 1) * (M + 1));
        const double Kq = std::pow(static_cast<double>(rd.K), 0.75);
        for (int a = 0; a <= M; ++a)
            for (int b = 0; a + b <= M; ++b)
                scale_[a * (M + 1) + b] = (Kq / rd.b) * std::pow(rd.w, a) * std::pow(rd.b, b);
    }

    double deriv(int a, int b, Vec2 zp) const override {
        const int M = tilde_.order();
        return scale_[a * (M + 1) + b] * tilde_.deriv(a, b, {rd_.w * zp.x, rd_.b * zp.y});
    }

private:
    PhaseFunction tilde_;
    RescaleData rd_;
    std::vector<double> scale_;
};

}  // namespace

PhaseFunction tilde_phi(const PhaseFunction& phi, const RescaleData& rd) {
    if (!(rd.q0 > 0.0)) throw Error(ErrorCode::NonpositiveH, "frame at z0 is degenerate");
    return PhaseFunction(std::make_shared<TildeModel>(phi, rd), phi.order(), phi.label() + "~",
                         {-2.0 * rd.w, 2.0 * rd.w, -2.0 * rd.b, 2.0 * rd.b});
}

PhaseFunction phi_s(const PhaseFunction& phi, const RescaleData& rd) {
    return PhaseFunction(std::make_shared<ScaledModel>(tilde_phi(phi, rd), rd), phi.order(), phi.label() + "^s");
}

Vec3 xi_map(const RescaleData& rd, const Vec3& xi) {
    const double px = rd.grad0.x, py = rd.grad0.y;
    return {rd.w * (xi[0] - rd.B1 * xi[1] + (px - rd.B1 * py) * xi[2]),
            rd.b * (xi[1] - rd.A1 * xi[0] + (py - rd.A1 * px) * xi[2]), rd.q0 * rd.b * rd.w * xi[2]};
}

Amplitude rescale_amplitude(const Amplitude& f, const RescaleData& rd) {
    Amplitude g;
    auto src = std::make_shared<Amplitude>(f);
    g.density = [src, rd](Vec2 zp) { return (*src)(rd.to_sigma(zp)); };
    g.label = f.label + "^L";
    return g;
}

Amplitude restrict_to_L(const Amplitude& f, const RescaleData& rd) {
    Amplitude g = f;
    auto src = std::make_shared<Amplitude>(f);
    g.density = [src, rd](Vec2 z) { return rd.in_L(z) ? (*src)(z) : cplx(0.0); };
    g.mask.reset();
    g.label = f.label + "|L";
    return g;
}

namespace {

// x-range of the horizontal slice of L at height y, empty when lo > hi.
std::pair<double, double> slice_x(const RescaleData& rd, double y) {
    const double d = rd.detT();
    const double dy = y - rd.z0.y;
    double lo = -rd.w * d - rd.A1 * dy, hi = rd.w * d - rd.A1 * dy;
    const double c1 = -rd.b * d - dy, c2 = rd.b * d - dy;
    if (rd.B1 > 0.0) {
        lo = std::max(lo, c1 / rd.B1);
        hi = std::min(hi, c2 / rd.B1);
    } else if (rd.B1 < 0.0) {
        lo = std::max(lo, c2 / rd.B1);
        hi = std::min(hi, c1 / rd.B1);
    } else if (c1 > 0.0 || c2 < 0.0) {
        return {1.0, 0.0};
    }
    return {rd.z0.x + lo, rd.z0.x + hi};
}

NodeSet parallelogram_nodes(const PhaseFunction& phi, const Amplitude& f, const RescaleData& rd, double h,
                            int order, bool squared_density) {
    std::vector<double> ys;
    for (Vec2 c : rd.corners()) ys.push_back(c.y);
    std::sort(ys.begin(), ys.end());
    const Rule1D ry = composite_rule(ys.front(), ys.back(), ys, h, order);
    NodeSet n;
    for (size_t k = 0; k < ry.size(); ++k) {
        const double y = ry.t[k];
        const auto [xl, xr] = slice_x(rd, y);
        if (!(xr > xl)) continue;
        const Rule1D rx = composite_rule(xl, xr, {}, h, order);
        for (size_t i = 0; i < rx.size(); ++i) {
            const Vec2 z{rx.t[i], y};
            cplx v = f(z);
            if (squared_density) v = std::norm(v);
            v *= rx.w[i] * ry.w[k];
            n.x.push_back(z.x);
            n.y.push_back(z.y);
            n.p.push_back(squared_density ? 0.0 : phi.value(z));
            n.wr.push_back(v.real());
            n.wi.push_back(v.imag());
        }
    }
    return n;
}

}  // namespace

cplx extend_on_L(const PhaseFunction& phi, const Amplitude& f, const RescaleData& rd, const Vec3& xi,
                 double quad_tol, int order) {
    double h = std::min(panel_size(xi), 0.125);
    cplx prev = node_sum(parallelogram_nodes(phi, f, rd, h, order, false), xi);
    for (int level = 1; level <= 6; ++level) {
        h *= 0.5;
        const cplx cur = node_sum(parallelogram_nodes(phi, f, rd, h, order, false), xi);
        if (std::abs(cur - prev) <= quad_tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw Error(ErrorCode::TolNotMet, "parallelogram quadrature did not reach the requested tolerance");
}

double l2_sq_on_L(const Amplitude& f, const RescaleData& rd) {
    const NodeSet n = parallelogram_nodes(PhaseFunction(), f, rd, 1.0 / 32.0, 12, true);
    double s = 0.0;
    for (double v : n.wr) s += v;
    return s;
}

IdentityReport scaling_identity_check(const PhaseFunction& phi, const Amplitude& f, const RescaleData& rd,
                                      const std::vector<Vec3>& xi_samples, double quad_tol) {
    const PhaseFunction ps = phi_s(phi, rd);
    const Amplitude fl = rescale_amplitude(f, rd);
    IdentityReport rep;
    rep.jacobian = rd.detT() * rd.b * rd.w;
    for (const Vec3& xi : xi_samples) {
        IdentitySample s;
        s.xi = xi;
        s.s_xi = xi_map(rd, xi);
        s.lhs = std::abs(extend_on_L(phi, f, rd, xi, quad_tol));
        s.rhs = rep.jacobian * std::abs(extend_adaptive(ps, fl, s.s_xi, quad_tol).value);
        const double den = std::max(s.lhs, s.rhs);
        s.rel_err = den > 0.0 ? std::fabs(s.lhs - s.rhs) / den : 0.0;
        rep.max_rel_err = std::max(rep.max_rel_err, s.rel_err);
        rep.samples.push_back(s);
    }
    return rep;
}

NormReport norm_relations(const PhaseFunction& phi, const Amplitude& f, const RescaleData& rd) {
    (void)phi;
    NormReport r;
    r.fL_l2 = std::sqrt(l2_sq_on_L(f, rd));
    const Amplitude fl = rescale_amplitude(f, rd);
    const Rule2D rule = tensor_rule(Box{}, {}, {}, 1.0 / 8.0, 12);
    double s = 0.0;
    for (size_t k = 0; k < rule.size(); ++k) s += rule.w[k] * std::norm(fl({rule.x[k], rule.y[k]}));
    r.fLs_l2 = std::sqrt(s);
    r.predicted_l2 = r.fL_l2 / std::sqrt(rd.detT() * rd.b * rd.w);
    r.l2_rel_err = r.predicted_l2 > 0.0 ? std::fabs(r.fLs_l2 - r.predicted_l2) / r.predicted_l2
                                        : std::fabs(r.fLs_l2);
    r.l2_bound_ok = r.fLs_l2 <= r.fL_l2 / std::sqrt(rd.b * rd.w) * (1.0 + 1e-10) + 1e-300;
    const int n = 129;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Vec2 zp{-1.0 + 2.0 * a / (n - 1), -1.0 + 2.0 * b / (n - 1)};
            r.fLs_sup = std::max(r.fLs_sup, std::abs(fl(zp)));
            r.f_sup = std::max(r.f_sup, std::abs(f(rd.to_sigma(zp))));
        }
    r.sup_ok = r.fLs_sup <= r.f_sup * (1.0 + 1e-15);
    return r;
}

NormalFormReport normal_form_residual(const PhaseFunction& psi) {
    const Vec2 o{0.0, 0.0};
    NormalFormReport r;
    const double res[6] = {psi.deriv(0, 0, o), psi.deriv(1, 0, o), psi.deriv(0, 1, o),
                           psi.deriv(2, 0, o), psi.deriv(0, 2, o), psi.deriv(1, 1, o) - 1.0};
    for (double v : res) r.max_residual = std::max(r.max_residual, std::fabs(v));
    return r;
}

CrucialReport crucial_observation(const PhaseFunction& phi, const StripFamily& fam, int samples_u, int samples_w) {
    CrucialReport r;
    for (const Strip& st : fam.members) {
        if (st.family != Family::AStrip) continue;
        const Vec2 om = st.dir;
        const Vec2 pw = st.perp();
        for (int a = 0; a < samples_u; ++a)
            for (int c = 0; c < samples_w; ++c) {
                const Vec2 z = st.center + (-st.half_length + 2.0 * st.half_length * a / (samples_u - 1)) * om +
                               (-st.half_width + 2.0 * st.half_width * c / (samples_w - 1)) * pw;
                if (std::fabs(z.x) > 1.0 || std::fabs(z.y) > 1.0) continue;
                const Mat2 hs = phi.hessian(z);
                const double v = om.x * om.x * hs.a11 + 2.0 * om.x * om.y * hs.a12 + om.y * om.y * hs.a22;
                r.max_value = std::max(r.max_value, std::fabs(v));
                ++r.samples;
            }
    }
    r.C = r.max_value / (fam.params.mu * std::pow(static_cast<double>(fam.params.K), -0.75));
    return r;
}

}  // namespace hypx
