#include "hypx/extension.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "hypx/hypgeo.hpp"
#include "hypx/kernels.hpp"
#include "hypx/parallel.hpp"

namespace hypx {

NodeSet amplitude_nodes(const PhaseFunction& phi, const Amplitude& f, double h, int order) {
    const Rule2D r = amplitude_rule(f, h, order);
    NodeSet n;
    n.x.reserve(r.size());
    n.y.reserve(r.size());
    n.p.reserve(r.size());
    n.wr.reserve(r.size());
    n.wi.reserve(r.size());
    for (size_t k = 0; k < r.size(); ++k) {
        const Vec2 z{r.x[k], r.y[k]};
        const cplx v = f(z) * r.w[k];
        if (v == cplx(0.0)) continue;
        n.x.push_back(z.x);
        n.y.push_back(z.y);
        n.p.push_back(phi.value(z));
        n.wr.push_back(v.real());
        n.wi.push_back(v.imag());
    }
    return n;
}

cplx node_sum(const NodeSet& nodes, const Vec3& xi) {
    return kernels::phase_sum(nodes.x.data(), nodes.y.data(), nodes.p.data(), nodes.wr.data(), nodes.wi.data(),
                              nodes.size(), xi[0], xi[1], xi[2]);
}

constexpr double kMaxAdaptiveNodes = 4e7;

ExtendResult extend_adaptive(const PhaseFunction& phi, const Amplitude& f, const Vec3& xi, double quad_tol,
                             int order, int max_levels) {
    if (!(quad_tol > 0.0)) throw Error(ErrorCode::InvalidParam, "quad_tol must be positive");
    double h = panel_size(xi);
    // Refuse levels whose tensor rule would not fit in memory.
    auto too_big = [&](double step) { return std::pow(2.0 / step * order, 2) > kMaxAdaptiveNodes; };
    if (too_big(h)) throw Error(ErrorCode::TolNotMet, "frequency too large for the adaptive node budget");
    cplx prev = node_sum(amplitude_nodes(phi, f, h, order), xi);
    for (int level = 1; level <= max_levels; ++level) {
        h *= 0.5;
        if (too_big(h)) break;
        const NodeSet nodes = amplitude_nodes(phi, f, h, order);
        const cplx cur = node_sum(nodes, xi);
        const double diff = std::abs(cur - prev);
        if (diff <= quad_tol * std::max(1.0, std::abs(cur))) return {cur, diff, level, nodes.size()};
        prev = cur;
    }
    throw Error(ErrorCode::TolNotMet, "extension quadrature did not reach the requested tolerance");
}

cplx extend(const PhaseFunction& phi, const Amplitude& f, const Vec3& xi, double quad_tol) {
    return extend_adaptive(phi, f, xi, quad_tol).value;
}

Vec3 FreqGrid::point(size_t idx) const {
    const size_t m = n();
    const size_t k = idx % m, j = (idx / m) % m, i = idx / (m * m);
    return {axis[i], axis[j], axis[k]};
}

FreqGrid make_freq_grid(double R, double h) {
    if (!(R > 0.0) || !(h > 0.0)) throw Error(ErrorCode::InvalidParam, "R and h must be positive");
    const double steps = 2.0 * R / h;
    const long m = std::lround(steps);
    if (std::fabs(steps - m) > 1e-9 * std::max(1.0, steps))
        throw Error(ErrorCode::InvalidParam, "2R / h must be an integer");
    FreqGrid g;
    g.R = R;
    g.h = h;
    g.axis.resize(m + 1);
    for (long i = 0; i <= m; ++i) g.axis[i] = -R + i * h;
    return g;
}

namespace {

using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

struct Axis {
    std::vector<double> t, w;
    std::vector<int> cell;  // owning cell column or row, -1 without a grid
};

Axis make_axis(double lo, double hi, const std::vector<double>& breaks, double h, int order, int K) {
    const Rule1D r = composite_rule(lo, hi, breaks, h, order);
    Axis a{r.t, r.w, std::vector<int>(r.size(), -1)};
    if (K > 0)
        for (size_t i = 0; i < r.size(); ++i)
            a.cell[i] = std::clamp(static_cast<int>(std::floor((r.t[i] + 1.0) * K)), 0, 2 * K - 1);
    return a;
}

// Node tensor grid for one amplitude and the slice-independent matrices.
struct Engine {
    Axis ax, ay;
    RMat Wr, Wi, P;
    CMat E1, E2;
    double panel = 0.0;

    Engine(const PhaseFunction& phi, const Amplitude& f, const FreqGrid& grid, const FieldOptions& opts) {
        if (opts.order < 1 || !(opts.panel_scale > 0.0))
            throw Error(ErrorCode::InvalidParam, "field order and panel scale must be positive");
        panel = std::min(1.0, opts.panel_scale * panel_size({grid.R, grid.R, grid.R}));
        const Box box = f.support_box();
        const int K = f.grid ? f.grid->K() : 0;
        ax = make_axis(box.xlo, box.xhi, f.xbreaks, panel, opts.order, K);
        ay = make_axis(box.ylo, box.yhi, f.ybreaks, panel, opts.order, K);
        fill(phi, grid, [&](Vec2 z) { return f(z); }, nullptr);
    }

    Engine(const PhaseFunction& phi, const Rule1D& rx, const Rule1D& ry, const std::vector<cplx>& values,
           const FreqGrid& grid) {
        if (values.size() != rx.size() * ry.size())
            throw Error(ErrorCode::InvalidParam, "node values do not match the tensor rule");
        ax = {rx.t, rx.w, std::vector<int>(rx.size(), -1)};
        ay = {ry.t, ry.w, std::vector<int>(ry.size(), -1)};
        fill(phi, grid, nullptr, &values);
    }

    template <class F>
    void fill(const PhaseFunction& phi, const FreqGrid& grid, F density, const std::vector<cplx>* values) {
        const Eigen::Index nx = static_cast<Eigen::Index>(ax.t.size()), ny = static_cast<Eigen::Index>(ay.t.size());
        Wr.setZero(nx, ny);
        Wi.setZero(nx, ny);
        P.setZero(nx, ny);
        for (Eigen::Index j = 0; j < ny; ++j)
            for (Eigen::Index i = 0; i < nx; ++i) {
                const Vec2 z{ax.t[i], ay.t[j]};
                cplx v;
                if constexpr (std::is_same_v<F, std::nullptr_t>) v = (*values)[j * nx + i];
                else v = density(z);
                v *= ax.w[i] * ay.w[j];
                Wr(i, j) = v.real();
                Wi(i, j) = v.imag();
                P(i, j) = phi.value(z);
            }
        const Eigen::Index m = static_cast<Eigen::Index>(grid.n());
        E1.resize(m, nx);
        E2.resize(m, ny);
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index i = 0; i < nx; ++i) E1(a, i) = std::polar(1.0, -grid.axis[a] * ax.t[i]);
            for (Eigen::Index j = 0; j < ny; ++j) E2(a, j) = std::polar(1.0, -grid.axis[a] * ay.t[j]);
        }
    }

    size_t nodes() const { return ax.t.size() * ay.t.size(); }

    CMat slice(double xi3) const {
        RMat mr(Wr.rows(), Wr.cols()), mi(Wr.rows(), Wr.cols());
        kernels::phase_factor(P.data(), Wr.data(), Wi.data(), static_cast<size_t>(P.size()), xi3, mr.data(),
                              mi.data());
        CMat M(Wr.rows(), Wr.cols());
        M.real() = mr;
        M.imag() = mi;
        return M;
    }

    CMat apply(const CMat& M, Eigen::Index i0, Eigen::Index bx, Eigen::Index j0, Eigen::Index by) const {
        const CMat block = M.block(i0, j0, bx, by);
        const CMat t = E1.middleCols(i0, bx) * block;
        return t * E2.middleCols(j0, by).transpose();
    }
};

}  // namespace

namespace {

ExtensionField run_engine(const Engine& eng, const FreqGrid& grid, int order) {
    ExtensionField out;
    out.grid = grid;
    out.order = order;
    out.panel = eng.panel;
    out.nodes = eng.nodes();
    out.values.assign(grid.size(), cplx(0.0));
    const size_t m = grid.n();
    if (eng.nodes() == 0) return out;
    parallel_for(m, [&](size_t k) {
        const CMat M = eng.slice(grid.axis[k]);
        const CMat G = eng.apply(M, 0, M.rows(), 0, M.cols());
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) out.values[grid.index(i, j, k)] = G(i, j);
    });
    return out;
}

}  // namespace

ExtensionField extension_field(const PhaseFunction& phi, const Amplitude& f, const FreqGrid& grid,
                               const FieldOptions& opts) {
    return run_engine(Engine(phi, f, grid, opts), grid, opts.order);
}

ExtensionField extension_field_tensor(const PhaseFunction& phi, const Rule1D& rx, const Rule1D& ry,
                                      const std::vector<cplx>& values, const FreqGrid& grid) {
    return run_engine(Engine(phi, rx, ry, values, grid), grid, 0);
}

double lp_norm(const std::vector<double>& values, double h, double p) {
    if (std::isinf(p)) {
        double mx = 0.0;
        for (double v : values) mx = std::max(mx, std::fabs(v));
        return mx;
    }
    if (!(p >= 1.0)) throw Error(ErrorCode::InvalidParam, "p must be >= 1");
    double s = 0.0;
    for (double v : values) s += std::pow(std::fabs(v), p);
    return std::pow(s * h * h * h, 1.0 / p);
}

double lp_norm(const ExtensionField& field, double p) {
    std::vector<double> mags(field.values.size());
    for (size_t k = 0; k < mags.size(); ++k) mags[k] = std::abs(field.values[k]);
    return lp_norm(mags, field.grid.h, p);
}

double l1_norm(const PhaseFunction& phi, const Amplitude& f) {
    (void)phi;
    const Rule2D r = amplitude_rule(f, 1.0 / 16.0, 8);
    double s = 0.0;
    for (size_t k = 0; k < r.size(); ++k) s += r.w[k] * std::abs(f({r.x[k], r.y[k]}));
    return s;
}

bool BroadField::broad(size_t idx, double a) const {
    return max_delta(idx) <= a * std::abs(base.values[idx]);
}

std::vector<double> BroadField::br(double a) const {
    std::vector<double> out(base.values.size());
    for (size_t k = 0; k < out.size(); ++k) out[k] = broad(k, a) ? std::abs(base.values[k]) : 0.0;
    return out;
}

std::vector<char> BroadField::labels(double a) const {
    std::vector<char> out(base.values.size());
    for (size_t k = 0; k < out.size(); ++k) {
        const double lim = a * std::abs(base.values[k]);
        if (max_delta(k) <= lim) out[k] = 'A';
        else if (max_strip[k] > lim) out[k] = 'B';
        else out[k] = 'C';
    }
    return out;
}

double BroadField::max_ratio() const {
    double r = 0.0;
    for (size_t k = 0; k < base.values.size(); ++k) {
        const double v = std::abs(base.values[k]);
        const double d = max_delta(k);
        if (d == 0.0) continue;
        r = std::max(r, v > 0.0 ? d / v : std::numeric_limits<double>::infinity());
    }
    return r;
}

BroadField broad_field(const PhaseFunction& phi, const Amplitude& f, const StripFamily& fam, double alpha,
                       const FreqGrid& grid, const FieldOptions& opts) {
    if (!f.grid) throw Error(ErrorCode::InvalidParam, "amplitude must carry the cap grid");
    if (f.grid->K() != fam.params.K || f.grid->mu() != fam.params.mu)
        throw Error(ErrorCode::MismatchedGrid, "amplitude grid does not match the strip family");
    const CapGrid& caps = *f.grid;
    const std::vector<int> kept = f.kept_caps();
    const Closure cl = build_closure(fam, caps, kept);
    const Engine eng(phi, f, grid, opts);

    BroadField bf;
    bf.alpha = alpha;
    bf.base.grid = grid;
    bf.base.order = opts.order;
    bf.base.panel = eng.panel;
    bf.base.nodes = eng.nodes();
    bf.base.values.assign(grid.size(), cplx(0.0));
    bf.max_strip.assign(grid.size(), 0.0);
    bf.max_tile.assign(grid.size(), 0.0);
    bf.delta_count = cl.sets.size();
    bf.atom_count = cl.atoms.size();
    if (eng.nodes() == 0 || cl.atoms.empty()) return bf;

    // Node index window and owning atom of every cell.
    std::vector<int> cell_atom(caps.size(), -1);
    for (size_t a = 0; a < cl.atoms.size(); ++a)
        for (int c : cl.atoms[a]) cell_atom[c] = static_cast<int>(a);
    struct Window {
        Eigen::Index i0, bx, j0, by;
    };
    auto node_range = [](const std::vector<int>& cells, int lo, int hi) {
        const auto b = std::lower_bound(cells.begin(), cells.end(), lo);
        const auto e = std::upper_bound(cells.begin(), cells.end(), hi);
        return std::make_pair(static_cast<Eigen::Index>(b - cells.begin()), static_cast<Eigen::Index>(e - b));
    };
    std::vector<Window> win(cl.atoms.size());
    for (size_t a = 0; a < cl.atoms.size(); ++a) {
        int ilo = caps.per_side(), ihi = -1, jlo = caps.per_side(), jhi = -1;
        for (int c : cl.atoms[a]) {
            ilo = std::min(ilo, caps[c].i);
            ihi = std::max(ihi, caps[c].i);
            jlo = std::min(jlo, caps[c].j);
            jhi = std::max(jhi, caps[c].j);
        }
        auto [i0, bx] = node_range(eng.ax.cell, ilo, ihi);
        auto [j0, by] = node_range(eng.ay.cell, jlo, jhi);
        win[a] = {i0, bx, j0, by};
    }
    std::vector<char> strip_set(cl.sets.size(), 0);
    for (size_t s = 0; s < cl.sets.size(); ++s)
        for (int mbr : cl.sets[s].members)
            if (fam.members[mbr].family != Family::BigCap) strip_set[s] = 1;

    const size_t m = grid.n();
    parallel_for(m, [&](size_t k) {
        const CMat M = eng.slice(grid.axis[k]);
        std::vector<CMat> G(cl.atoms.size());
        CMat total = CMat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (size_t a = 0; a < cl.atoms.size(); ++a) {
            const Window& w = win[a];
            CMat block = M.block(w.i0, w.j0, w.bx, w.by);
            for (Eigen::Index j = 0; j < w.by; ++j)
                for (Eigen::Index i = 0; i < w.bx; ++i) {
                    const int c = caps.index(eng.ax.cell[w.i0 + i], eng.ay.cell[w.j0 + j]);
                    if (cell_atom[c] != static_cast<int>(a)) block(i, j) = 0.0;
                }
            const CMat t = eng.E1.middleCols(w.i0, w.bx) * block;
            G[a] = t * eng.E2.middleCols(w.j0, w.by).transpose();
            total += G[a];
        }
        RMat best_strip = RMat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        RMat best_tile = best_strip;
        CMat acc(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (size_t s = 0; s < cl.sets.size(); ++s) {
            acc.setZero();
            for (int a : cl.set_atoms[s]) acc += G[a];
            RMat& best = strip_set[s] ? best_strip : best_tile;
            best = best.cwiseMax(acc.cwiseAbs());
        }
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) {
                const size_t idx = grid.index(i, j, k);
                bf.base.values[idx] = total(i, j);
                bf.max_strip[idx] = best_strip(i, j);
                bf.max_tile[idx] = best_tile(i, j);
            }
    });
    return bf;
}

double bil(const PhaseFunction& phi, const Amplitude& f, std::shared_ptr<const CapGrid> caps, int tau1, int tau2,
           const Vec3& xi, double quad_tol) {
    const CapGrid& g = *caps;
    if (tau1 < 0 || tau2 < 0 || static_cast<size_t>(tau1) >= g.size() || static_cast<size_t>(tau2) >= g.size())
        throw Error(ErrorCode::InvalidParam, "cap index out of range");
    if (!strongly_separated(phi, g[tau1], g[tau2], g.mu(), g.K()))
        throw Error(ErrorCode::NotSeparated, "caps are not strongly separated");
    const cplx e1 = extend(phi, restrict(f, caps, std::vector<int>{tau1}), xi, quad_tol);
    const cplx e2 = extend(phi, restrict(f, caps, std::vector<int>{tau2}), xi, quad_tol);
    return std::sqrt(std::abs(e1)) * std::sqrt(std::abs(e2));
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = std::min(x.size(), y.size());
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (size_t k = 0; k < n; ++k) mx += x[k], my += y[k];
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (size_t k = 0; k < n; ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

GrowthTable growth_sweep(const PhaseFunction& phi, const Amplitude& f, const StripFamily& fam, double p,
                         const std::vector<double>& R_list, double alpha, int grid_points,
                         const FieldOptions& opts) {
    if (grid_points < 3) throw Error(ErrorCode::InvalidParam, "grid_points must be >= 3");
    for (size_t k = 1; k < R_list.size(); ++k)
        if (!(R_list[k] > R_list[k - 1])) throw Error(ErrorCode::InvalidParam, "R_list must increase");
    GrowthTable t;
    t.p = p;
    t.alpha = alpha;
    std::vector<double> lx, ly;
    for (double R : R_list) {
        const FreqGrid grid = make_freq_grid(R, 2.0 * R / (grid_points - 1));
        const BroadField bf = broad_field(phi, f, fam, alpha, grid, opts);
        const std::vector<double> b = bf.br(alpha);
        GrowthRow row;
        row.R = R;
        row.h = grid.h;
        row.points = grid.size();
        row.norm = lp_norm(b, grid.h, p);
        row.full_norm = lp_norm(bf.base, p);
        size_t nb = 0;
        for (double v : b) nb += v > 0.0;
        row.broad_fraction = static_cast<double>(nb) / static_cast<double>(b.size());
        t.rows.push_back(row);
        if (row.norm > 0.0) {
            lx.push_back(std::log(R));
            ly.push_back(std::log(row.norm));
        }
    }
    t.slope = fit_slope(lx, ly);
    t.slope_finite = std::isfinite(t.slope);
    return t;
}

}  // namespace hypx
