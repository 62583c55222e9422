#include "hypx/wavepacket.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hypx/kernels.hpp"
#include "hypx/parallel.hpp"

namespace hypx {

namespace {

using CMat = Eigen::MatrixXcd;

// Smooth step: 0 for u <= 0, 1 for u >= 1, S(u) + S(1 - u) = 1.
double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

// Partition bump on the integer lattice: supp in [-1, 1], sum over shifts is 1.
double lattice_bump(double t) { return smooth_step(1.0 - std::fabs(t)); }

// One-dimensional spatial cutoff of cell i out of n, cell side a. Edge cells stay
// 1 up to the boundary of [-1, 1] and fall off within half a cell outside.
double cutoff_1d(int i, int n, double a, double x) {
    const double c = -1.0 + (i + 0.5) * a;
    if (i == 0 && x < c) return x >= -1.0 ? 1.0 : smooth_step(1.0 - (-1.0 - x) / (0.5 * a));
    if (i == n - 1 && x > c) return x <= 1.0 ? 1.0 : smooth_step(1.0 - (x - 1.0) / (0.5 * a));
    return lattice_bump((x - c) / a);
}

// Window equal to 1 on 2 theta and vanishing outside 3 theta.
double window_1d(double c, double a, double x) {
    const double d = std::fabs(x - c);
    if (d <= a) return 1.0;
    if (d >= 1.5 * a) return 0.0;
    return smooth_step((1.5 * a - d) / (0.5 * a));
}

double integrate_1d(double lo, double hi, const std::function<double(double)>& g, double h) {
    const Rule1D r = composite_rule(lo, hi, {}, h, 8);
    double s = 0.0;
    for (size_t k = 0; k < r.size(); ++k) s += r.w[k] * g(r.t[k]);
    return s;
}

}  // namespace

Vec2 WavePacketDecomp::mode_freq(int n1, int n2) const {
    const double k = 2.0 * std::numbers::pi / period;
    return {k * n1, k * n2};
}

double WavePacketDecomp::window(int theta, Vec2 z) const {
    if (std::fabs(z.x) > 1.0 || std::fabs(z.y) > 1.0) return 0.0;
    const Vec2 c = thetas[theta].center;
    return window_1d(c.x, side, z.x) * window_1d(c.y, side, z.y);
}

double WavePacketDecomp::cutoff(int theta, Vec2 z) const {
    const int i = theta / per_axis, j = theta % per_axis;
    return cutoff_1d(i, per_axis, side, z.x) * cutoff_1d(j, per_axis, side, z.y);
}

cplx WavePacketDecomp::packet_value(const Packet& p, Vec2 z) const {
    const double w = window(p.theta, z);
    if (w == 0.0) return 0.0;
    const Box& b = thetas[p.theta].box3;
    const Vec2 v = mode_freq(p.n1, p.n2);
    return p.amplitude * w * std::polar(1.0, v.x * (z.x - b.xlo) + v.y * (z.y - b.ylo));
}

Amplitude WavePacketDecomp::packet_amplitude(size_t k) const {
    auto self = std::make_shared<WavePacketDecomp>(*this);
    Amplitude f;
    f.density = [self, k](Vec2 z) { return self->packet_value(self->packets[k], z); };
    f.label = "packet";
    return f;
}

double WavePacketDecomp::axis_distance(const Packet& p, const Vec3& xi) const {
    const Vec3& nu = thetas[p.theta].dir;
    const Vec2 o = offset(p);
    const Vec3 d{xi[0] - o.x, xi[1] - o.y, xi[2]};
    const double t = d[0] * nu[0] + d[1] * nu[1] + d[2] * nu[2];
    const Vec3 e{d[0] - t * nu[0], d[1] - t * nu[1], d[2] - t * nu[2]};
    return std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
}

WavePacketDecomp decompose(const PhaseFunction& phi, const Amplitude& f, double R, double delta,
                           const WavePacketOptions& opts) {
    if (!(R >= 64.0)) throw Error(ErrorCode::RTooSmall, "wave packets need R >= 64");
    if (!(delta > 0.0 && delta <= 0.25)) throw Error(ErrorCode::InvalidParam, "delta must lie in (0, 0.25]");
    if (opts.samples < 8 || opts.modes < 1 || 2 * opts.modes + 1 > opts.samples)
        throw Error(ErrorCode::InvalidParam, "need samples >= 2 modes + 1");
    WavePacketDecomp d;
    d.R = R;
    d.delta = delta;
    d.opts = opts;
    d.per_axis = static_cast<int>(std::ceil(2.0 * std::sqrt(R) - 1e-9));
    d.side = 2.0 / d.per_axis;
    d.lattice = std::sqrt(R);
    d.period = 3.0 * d.side;
    d.radius = std::pow(R, 0.5 + delta);
    d.chi_radius = std::sqrt(2.0) * d.lattice;

    const int N = opts.modes, M = 2 * N + 1, P = opts.samples;
    // DFT matrix restricted to |n| <= N: F(n, p) = exp(-2 pi i n p / P) / P.
    CMat F(M, P);
    for (int n = -N; n <= N; ++n)
        for (int p = 0; p < P; ++p) F(n + N, p) = std::polar(1.0 / P, -2.0 * std::numbers::pi * n * p / P);

    const int nt = d.per_axis * d.per_axis;
    d.thetas.resize(nt);
    parallel_for(static_cast<size_t>(nt), [&](size_t t) {
        Theta& th = d.thetas[t];
        const int i = static_cast<int>(t) / d.per_axis, j = static_cast<int>(t) % d.per_axis;
        th.center = {-1.0 + (i + 0.5) * d.side, -1.0 + (j + 0.5) * d.side};
        th.side = d.side;
        const double hp = 1.5 * d.side;
        th.box3 = {th.center.x - hp, th.center.x + hp, th.center.y - hp, th.center.y + hp};
        th.support = {std::max(-1.0, th.box3.xlo), std::min(1.0, th.box3.xhi), std::max(-1.0, th.box3.ylo),
                      std::min(1.0, th.box3.yhi)};
        const Vec2 g = phi.grad(th.center);
        const double nn = std::sqrt(g.x * g.x + g.y * g.y + 1.0);
        th.dir = {-g.x / nn, -g.y / nn, 1.0 / nn};
        CMat H(P, P);
        for (int p = 0; p < P; ++p)
            for (int q = 0; q < P; ++q) {
                const Vec2 z{th.box3.xlo + p * d.period / P, th.box3.ylo + q * d.period / P};
                const double c = cutoff_1d(i, d.per_axis, d.side, z.x) * cutoff_1d(j, d.per_axis, d.side, z.y);
                H(p, q) = c == 0.0 ? cplx(0.0) : f(z) * c;
            }
        const CMat C = F * H * F.transpose();
        th.coef.resize(static_cast<size_t>(M) * M);
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b) th.coef[a * M + b] = C(a, b);
        const Rule2D r = tensor_rule(th.support, {}, {}, d.side / 8.0, 8);
        double e = 0.0;
        for (size_t k = 0; k < r.size(); ++k) e += r.w[k] * std::norm(f({r.x[k], r.y[k]}));
        th.f_energy = e;
    });

    double cmax = 0.0;
    for (const Theta& th : d.thetas)
        for (cplx c : th.coef) cmax = std::max(cmax, std::abs(c));
    const double cut = opts.prune * cmax;
    for (int t = 0; t < nt; ++t) {
        Theta& th = d.thetas[t];
        th.kept.assign(th.coef.size(), 0);
        if (cmax == 0.0) continue;
        const Box& s = th.support;
        const double wx2 = integrate_1d(s.xlo, s.xhi, [&](double x) { return std::pow(window_1d(th.center.x, d.side, x), 2); },
                                        d.side / 64.0);
        const double wy2 = integrate_1d(s.ylo, s.yhi, [&](double y) { return std::pow(window_1d(th.center.y, d.side, y), 2); },
                                        d.side / 64.0);
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b) {
                const cplx c = th.coef[a * M + b];
                if (!(std::abs(c) > cut)) continue;
                th.kept[a * M + b] = 1;
                const Vec2 v = d.mode_freq(a - N, b - N);
                const double t1 = v.x / d.lattice, t2 = v.y / d.lattice;
                for (int m1 = static_cast<int>(std::floor(t1)); m1 <= static_cast<int>(std::floor(t1)) + 1; ++m1)
                    for (int m2 = static_cast<int>(std::floor(t2)); m2 <= static_cast<int>(std::floor(t2)) + 1; ++m2) {
                        const double chi = lattice_bump(t1 - m1) * lattice_bump(t2 - m2);
                        if (chi == 0.0) continue;
                        Packet p;
                        p.theta = t;
                        p.m1 = m1;
                        p.m2 = m2;
                        p.n1 = a - N;
                        p.n2 = b - N;
                        p.amplitude = chi * c;
                        p.energy = std::norm(p.amplitude) * wx2 * wy2;
                        d.packets.push_back(p);
                    }
            }
    }
    return d;
}

namespace {

// Quadrature nodes of w_theta on its support, panel small enough for frequency fmax.
NodeSet window_nodes(const PhaseFunction& phi, const WavePacketDecomp& d, int theta, double fmax) {
    const Theta& th = d.thetas[theta];
    const double h = std::min(d.side / 32.0, panel_size({fmax, fmax, d.R}));
    const Rule2D r = tensor_rule(th.support, {}, {}, h, 8);
    NodeSet n;
    for (size_t k = 0; k < r.size(); ++k) {
        const Vec2 z{r.x[k], r.y[k]};
        const double w = d.window(theta, z) * r.w[k];
        if (w == 0.0) continue;
        n.x.push_back(z.x);
        n.y.push_back(z.y);
        n.p.push_back(phi.value(z));
        n.wr.push_back(w);
        n.wi.push_back(0.0);
    }
    return n;
}

cplx packet_sum(const WavePacketDecomp& d, const NodeSet& nodes, const Packet& p, const Vec3& xi) {
    const Vec2 v = d.mode_freq(p.n1, p.n2);
    const Box& b = d.thetas[p.theta].box3;
    const cplx base = node_sum(nodes, {xi[0] - v.x, xi[1] - v.y, xi[2]});
    return p.amplitude * std::polar(1.0, -(v.x * b.xlo + v.y * b.ylo)) * base;
}

}  // namespace

cplx packet_extension(const PhaseFunction& phi, const WavePacketDecomp& d, const Packet& p, const Vec3& xi) {
    const Vec2 v = d.mode_freq(p.n1, p.n2);
    const double fmax = std::max(std::fabs(xi[0] - v.x), std::fabs(xi[1] - v.y));
    return packet_sum(d, window_nodes(phi, d, p.theta, fmax), p, xi);
}

std::vector<cplx> reconstruct_on_nodes(const WavePacketDecomp& d, const Rule1D& rx, const Rule1D& ry) {
    const size_t nx = rx.size(), ny = ry.size();
    std::vector<cplx> out(nx * ny, cplx(0.0));
    const int N = d.opts.modes, M = 2 * N + 1;
    for (size_t t = 0; t < d.thetas.size(); ++t) {
        const Theta& th = d.thetas[t];
        const auto ib = std::lower_bound(rx.t.begin(), rx.t.end(), th.support.xlo) - rx.t.begin();
        const auto ie = std::upper_bound(rx.t.begin(), rx.t.end(), th.support.xhi) - rx.t.begin();
        const auto jb = std::lower_bound(ry.t.begin(), ry.t.end(), th.support.ylo) - ry.t.begin();
        const auto je = std::upper_bound(ry.t.begin(), ry.t.end(), th.support.yhi) - ry.t.begin();
        if (ie <= ib || je <= jb) continue;
        CMat C = CMat::Zero(M, M);
        bool any = false;
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b)
                if (th.kept[a * M + b]) {
                    C(a, b) = th.coef[a * M + b];
                    any = true;
                }
        if (!any) continue;
        CMat Ex(ie - ib, M), Ey(je - jb, M);
        for (Eigen::Index i = 0; i < Ex.rows(); ++i)
            for (int a = 0; a < M; ++a)
                Ex(i, a) = std::polar(1.0, d.mode_freq(a - N, 0).x * (rx.t[ib + i] - th.box3.xlo));
        for (Eigen::Index j = 0; j < Ey.rows(); ++j)
            for (int b = 0; b < M; ++b)
                Ey(j, b) = std::polar(1.0, d.mode_freq(0, b - N).y * (ry.t[jb + j] - th.box3.ylo));
        const CMat V = Ex * C * Ey.transpose();
        for (Eigen::Index j = 0; j < V.cols(); ++j)
            for (Eigen::Index i = 0; i < V.rows(); ++i) {
                const Vec2 z{rx.t[ib + i], ry.t[jb + j]};
                const double w = d.window(static_cast<int>(t), z);
                if (w != 0.0) out[(jb + j) * nx + (ib + i)] += w * V(i, j);
            }
    }
    return out;
}

ReconstructionReport reconstruction_check(const PhaseFunction& phi, const Amplitude& f, const WavePacketDecomp& d,
                                          double grid_h, double panel_scale) {
    const FreqGrid grid = make_freq_grid(d.R, grid_h);
    const double h = std::min(1.0, panel_scale * panel_size({d.R, d.R, d.R}));
    const Rule1D rx = composite_rule(-1.0, 1.0, {}, h, 8), ry = rx;
    std::vector<cplx> fv(rx.size() * ry.size());
    for (size_t j = 0; j < ry.size(); ++j)
        for (size_t i = 0; i < rx.size(); ++i) fv[j * rx.size() + i] = f({rx.t[i], ry.t[j]});
    const std::vector<cplx> rv = reconstruct_on_nodes(d, rx, ry);
    ReconstructionReport rep;
    rep.grid_h = grid_h;
    rep.points = grid.size();
    double num = 0.0, den = 0.0;
    for (size_t j = 0; j < ry.size(); ++j)
        for (size_t i = 0; i < rx.size(); ++i) {
            const size_t k = j * rx.size() + i;
            const double w = rx.w[i] * ry.w[j];
            num += w * std::norm(fv[k] - rv[k]);
            den += w * std::norm(fv[k]);
        }
    rep.f_l2 = std::sqrt(den);
    rep.amplitude_rel_l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    const ExtensionField ef = extension_field_tensor(phi, rx, ry, fv, grid);
    const ExtensionField er = extension_field_tensor(phi, rx, ry, rv, grid);
    double en = 0.0, ed = 0.0;
    for (size_t k = 0; k < ef.values.size(); ++k) {
        const double diff = std::abs(ef.values[k] - er.values[k]);
        rep.max_abs = std::max(rep.max_abs, diff);
        en += diff * diff;
        ed += std::norm(ef.values[k]);
    }
    rep.rel_l2 = ed > 0.0 ? std::sqrt(en / ed) : std::sqrt(en);
    rep.max_over_f_l2 = rep.f_l2 > 0.0 ? rep.max_abs / rep.f_l2 : rep.max_abs;
    return rep;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    const double hi = v[mid];
    if (v.size() % 2) return hi;
    return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + mid));
}

}  // namespace

PacketReport packet_checks(const PhaseFunction& phi, const WavePacketDecomp& d, int sample_count, unsigned seed,
                           int xi_samples) {
    PacketReport rep;
    rep.packets = d.packets.size();
    if (d.packets.empty()) {
        rep.decay_ok = rep.energy_ok = rep.orthogonality_ok = rep.orthogonality_vacuous = true;
        return rep;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double emax = 0.0;
    for (const Packet& p : d.packets) emax = std::max(emax, p.energy);

    // (a): every packet vanishes outside 3 theta.
    std::vector<size_t> strong;
    for (size_t k = 0; k < d.packets.size(); ++k)
        if (d.packets[k].energy >= 1e-2 * emax) strong.push_back(k);
    std::shuffle(strong.begin(), strong.end(), rng);
    const size_t ns = std::min<size_t>(strong.size(), static_cast<size_t>(std::max(1, sample_count)));
    for (size_t s = 0; s < ns; ++s) {
        const Packet& p = d.packets[strong[s]];
        const Box& b = d.thetas[p.theta].box3;
        for (int q = 0; q < 2000; ++q) {
            const Vec2 z{-1.0 + 2.0 * u01(rng), -1.0 + 2.0 * u01(rng)};
            if (b.contains(z)) continue;
            if (d.packet_value(p, z) != cplx(0.0)) ++rep.support_violations;
        }
    }

    // (b): medians on T and off 2T.
    std::vector<double> ratios(ns, 0.0);
    parallel_for(ns, [&](size_t s) {
        const Packet& p = d.packets[strong[s]];
        std::mt19937_64 r(seed + 7919 * (s + 1));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const Vec3& nu = d.thetas[p.theta].dir;
        const Vec2 o = d.offset(p);
        // Orthonormal frame around the axis.
        Vec3 e1{nu[1], -nu[0], 0.0};
        double l = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1]);
        if (l < 1e-12) e1 = {1.0, 0.0, 0.0}, l = 1.0;
        for (double& c : e1) c /= l;
        const Vec3 e2{nu[1] * e1[2] - nu[2] * e1[1], nu[2] * e1[0] - nu[0] * e1[2], nu[0] * e1[1] - nu[1] * e1[0]};
        auto inside = [&](const Vec3& x) {
            return std::fabs(x[0]) <= d.R && std::fabs(x[1]) <= d.R && std::fabs(x[2]) <= d.R;
        };
        std::vector<Vec3> on, off;
        for (int guard = 0; static_cast<int>(on.size()) < xi_samples && guard < 1000 * xi_samples; ++guard) {
            const double t = (2.0 * u(r) - 1.0) * d.R / nu[2];
            const double rr = d.radius * std::sqrt(u(r)), ang = 2.0 * std::numbers::pi * u(r);
            Vec3 x;
            for (int c = 0; c < 3; ++c)
                x[c] = (c == 0 ? o.x : c == 1 ? o.y : 0.0) + t * nu[c] + rr * (std::cos(ang) * e1[c] + std::sin(ang) * e2[c]);
            if (inside(x)) on.push_back(x);
        }
        for (int guard = 0; static_cast<int>(off.size()) < xi_samples && guard < 1000 * xi_samples; ++guard) {
            const Vec3 x{(2.0 * u(r) - 1.0) * d.R, (2.0 * u(r) - 1.0) * d.R, (2.0 * u(r) - 1.0) * d.R};
            if (d.axis_distance(p, x) > 2.0 * d.radius) off.push_back(x);
        }
        const Vec2 v = d.mode_freq(p.n1, p.n2);
        const NodeSet nodes = window_nodes(phi, d, p.theta, 2.0 * d.R + std::fabs(v.x) + std::fabs(v.y));
        std::vector<double> von, voff;
        for (const Vec3& x : on) von.push_back(std::abs(packet_sum(d, nodes, p, x)));
        for (const Vec3& x : off) voff.push_back(std::abs(packet_sum(d, nodes, p, x)));
        const double mon = median(von), moff = median(voff);
        ratios[s] = mon > 0.0 ? moff / mon : 0.0;
    });
    rep.decay_packets = ns;
    for (double r : ratios) rep.decay_ratio = std::max(rep.decay_ratio, r);
    rep.decay_ratio_median = median(ratios);
    rep.decay_ok = rep.decay_ratio <= 1e-4;

    // (d): Gram entries w^2 exp(i dv . z) factor over x and y.
    const int N = d.opts.modes;
    std::vector<int> thetas;
    for (size_t s = 0; s < ns; ++s) thetas.push_back(d.packets[strong[s]].theta);
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
    std::vector<std::vector<size_t>> by_theta(d.thetas.size());
    for (size_t k = 0; k < d.packets.size(); ++k) by_theta[d.packets[k].theta].push_back(k);
    std::vector<double> worst(thetas.size(), 0.0);
    std::vector<size_t> pairs(thetas.size(), 0);
    parallel_for(thetas.size(), [&](size_t s) {
        const int t = thetas[s];
        const Theta& th = d.thetas[t];
        if (th.f_energy <= 0.0) return;
        const double k0 = 2.0 * std::numbers::pi / d.period;
        std::vector<cplx> gx(4 * N + 1), gy(4 * N + 1);
        const Rule1D rx = composite_rule(th.support.xlo, th.support.xhi, {}, d.side / 64.0, 8);
        const Rule1D ry = composite_rule(th.support.ylo, th.support.yhi, {}, d.side / 64.0, 8);
        for (int dn = -2 * N; dn <= 2 * N; ++dn) {
            cplx sx = 0.0, sy = 0.0;
            for (size_t i = 0; i < rx.size(); ++i)
                sx += rx.w[i] * std::pow(window_1d(th.center.x, d.side, rx.t[i]), 2) *
                      std::polar(1.0, k0 * dn * (rx.t[i] - th.box3.xlo));
            for (size_t j = 0; j < ry.size(); ++j)
                sy += ry.w[j] * std::pow(window_1d(th.center.y, d.side, ry.t[j]), 2) *
                      std::polar(1.0, k0 * dn * (ry.t[j] - th.box3.ylo));
            gx[dn + 2 * N] = sx;
            gy[dn + 2 * N] = sy;
        }
        const auto& ids = by_theta[t];
        for (size_t a = 0; a < ids.size(); ++a)
            for (size_t b = a + 1; b < ids.size(); ++b) {
                const Packet& p = d.packets[ids[a]];
                const Packet& q = d.packets[ids[b]];
                const Vec2 oa = d.offset(p), ob = d.offset(q);
                if (d.axis_distance(p, {ob.x, ob.y, 0.0}) <= 2.0 * d.radius) continue;
                (void)oa;
                ++pairs[s];
                const cplx g = gx[p.n1 - q.n1 + 2 * N] * gy[p.n2 - q.n2 + 2 * N];
                worst[s] = std::max(worst[s], std::abs(p.amplitude * std::conj(q.amplitude) * g) / th.f_energy);
            }
    });
    for (size_t s = 0; s < thetas.size(); ++s) {
        rep.orthogonality = std::max(rep.orthogonality, worst[s]);
        rep.orthogonality_pairs += pairs[s];
    }
    rep.orthogonality_vacuous = rep.orthogonality_pairs == 0;
    rep.orthogonality_ok = rep.orthogonality <= 1e-6;

    // (e)
    std::vector<double> sum(d.thetas.size(), 0.0);
    for (const Packet& p : d.packets) sum[p.theta] += p.energy;
    for (size_t t = 0; t < d.thetas.size(); ++t)
        if (d.thetas[t].f_energy > 0.0) rep.energy_C = std::max(rep.energy_C, sum[t] / d.thetas[t].f_energy);
    rep.energy_ok = rep.energy_C <= 4.0;
    return rep;
}

LatticeCoverage tube_lattice_coverage(const PhaseFunction& phi, const WavePacketDecomp& d, double grid_h) {
    (void)phi;
    LatticeCoverage c;
    c.bound = d.lattice;
    const FreqGrid grid = make_freq_grid(d.R, grid_h);
    for (const Theta& th : d.thetas) {
        const Vec3& nu = th.dir;
        const double gx = -nu[0] / nu[2], gy = -nu[1] / nu[2];  // grad phi at the center
        for (double x1 : grid.axis)
            for (double x2 : grid.axis)
                for (double x3 : grid.axis) {
                    const double e1 = x1 + x3 * gx, e2 = x2 + x3 * gy;
                    const double d1 = e1 - d.lattice * std::round(e1 / d.lattice);
                    const double d2 = e2 - d.lattice * std::round(e2 / d.lattice);
                    const double t = d1 * nu[0] + d2 * nu[1];
                    const Vec3 e{d1 - t * nu[0], d2 - t * nu[1], -t * nu[2]};
                    c.max_distance = std::max(c.max_distance, std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]));
                }
    }
    c.ok = c.max_distance <= c.bound;
    return c;
}

}  // namespace hypx
