#include "hypx/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace hypx {

namespace {

Rule1D compute_gauss_legendre(int n) {
    Rule1D r;
    r.t.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.t[n - 1 - i] = x;
        r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const Rule1D& gauss_legendre(int order) {
    if (order < 1 || order > 64) throw Error(ErrorCode::InvalidParam, "quadrature order must lie in [1, 64]");
    static std::mutex mu;
    static std::map<int, Rule1D> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
    return it->second;
}

Rule1D composite_rule(double a, double b, const std::vector<double>& breaks, double h, int order) {
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidParam, "panel size must be positive");
    Rule1D out;
    if (!(b > a)) return out;
    const Rule1D& gl = gauss_legendre(order);
    std::vector<double> cuts{a};
    for (double c : breaks)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double lo = cuts[s], hi = cuts[s + 1];
        if (!(hi > lo)) continue;
        const int np = std::max(1, static_cast<int>(std::ceil((hi - lo) / h - 1e-9)));
        const double len = (hi - lo) / np;
        for (int p = 0; p < np; ++p) {
            const double c = lo + (p + 0.5) * len;
            for (size_t k = 0; k < gl.size(); ++k) {
                out.t.push_back(c + 0.5 * len * gl.t[k]);
                out.w.push_back(0.5 * len * gl.w[k]);
            }
        }
    }
    return out;
}

Rule2D tensor_rule(const Box& box, const std::vector<double>& xbreaks, const std::vector<double>& ybreaks,
                   double h, int order) {
    const Rule1D rx = composite_rule(box.xlo, box.xhi, xbreaks, h, order);
    const Rule1D ry = composite_rule(box.ylo, box.yhi, ybreaks, h, order);
    Rule2D r;
    r.x.reserve(rx.size() * ry.size());
    r.y.reserve(rx.size() * ry.size());
    r.w.reserve(rx.size() * ry.size());
    for (size_t i = 0; i < rx.size(); ++i)
        for (size_t j = 0; j < ry.size(); ++j) {
            r.x.push_back(rx.t[i]);
            r.y.push_back(ry.t[j]);
            r.w.push_back(rx.w[i] * ry.w[j]);
        }
    return r;
}

double panel_size(const Vec3& xi) {
    const double f = std::fabs(xi[0]) + std::fabs(xi[1]) + 2.0 * std::fabs(xi[2]);
    if (f <= 0.0) return 1.0;
    return std::min(1.0, 2.0 * std::numbers::pi / (4.0 * f));
}

Rule2D amplitude_rule(const Amplitude& f, double h, int order) {
    const Box box = f.support_box();
    Rule2D r = tensor_rule(box, f.xbreaks, f.ybreaks, h, order);
    if (!f.masked() || !f.grid) return r;
    Rule2D kept;
    for (size_t k = 0; k < r.size(); ++k) {
        if (!(*f.mask)[f.grid->owner({r.x[k], r.y[k]})]) continue;
        kept.x.push_back(r.x[k]);
        kept.y.push_back(r.y[k]);
        kept.w.push_back(r.w[k]);
    }
    return kept;
}

}  // namespace hypx
