#include "hypx/caps.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hypx {

namespace {

bool is_power_of_two(int k) { return k > 0 && (k & (k - 1)) == 0; }

}  // namespace

CapGrid::CapGrid(int K, double mu) : K_(K), mu_(mu) {
    if (!is_power_of_two(K) || K < 16)
        throw Error(ErrorCode::InvalidParam, "K must be a power of two >= 16");
    if (!(mu >= 1.0) || !std::isfinite(mu)) throw Error(ErrorCode::InvalidParam, "mu must be >= 1");
    const int n = per_side();
    const double side = std::sqrt(mu) / K;
    caps_.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Cap c;
            c.center = {-1.0 + (i + 0.5) / K, -1.0 + (j + 0.5) / K};
            c.side = side;
            c.clip = {std::max(-1.0, c.center.x - side / 2), std::min(1.0, c.center.x + side / 2),
                      std::max(-1.0, c.center.y - side / 2), std::min(1.0, c.center.y + side / 2)};
            c.i = i;
            c.j = j;
            c.K = K;
            c.mu = mu;
            caps_.push_back(c);
        }
    }
}

int CapGrid::owner(Vec2 z) const {
    const int n = per_side();
    int i = static_cast<int>(std::floor((z.x + 1.0) * K_));
    int j = static_cast<int>(std::floor((z.y + 1.0) * K_));
    i = std::clamp(i, 0, n - 1);
    j = std::clamp(j, 0, n - 1);
    return index(i, j);
}

int CapGrid::interior_multiplicity(Vec2 z) const {
    // Only caps whose center lies within side/2 can contain z.
    const double h = caps_.empty() ? 0.0 : caps_[0].side / 2;
    const int n = per_side();
    int ilo = std::max(0, static_cast<int>(std::floor((z.x - h + 1.0) * K_ - 0.5)) - 1);
    int ihi = std::min(n - 1, static_cast<int>(std::ceil((z.x + h + 1.0) * K_ - 0.5)) + 1);
    int jlo = std::max(0, static_cast<int>(std::floor((z.y - h + 1.0) * K_ - 0.5)) - 1);
    int jhi = std::min(n - 1, static_cast<int>(std::ceil((z.y + h + 1.0) * K_ - 0.5)) + 1);
    int count = 0;
    for (int i = ilo; i <= ihi; ++i) {
        for (int j = jlo; j <= jhi; ++j) {
            const Box& b = caps_[index(i, j)].clip;
            if (z.x > b.xlo && z.x < b.xhi && z.y > b.ylo && z.y < b.yhi) ++count;
        }
    }
    return count;
}

std::vector<double> CapGrid::cell_lines() const {
    std::vector<double> v(per_side() + 1);
    for (int i = 0; i <= per_side(); ++i) v[i] = -1.0 + static_cast<double>(i) / K_;
    return v;
}

CapGrid make_caps(int K, double mu) { return CapGrid(K, mu); }

cplx Amplitude::operator()(Vec2 z) const {
    if (mask && grid && !(*mask)[grid->owner(z)]) return 0.0;
    return density(z);
}

std::vector<int> Amplitude::kept_caps() const {
    std::vector<int> out;
    if (!grid) return out;
    for (size_t k = 0; k < grid->size(); ++k)
        if (!mask || (*mask)[k]) out.push_back(static_cast<int>(k));
    return out;
}

Box Amplitude::support_box() const {
    if (!mask || !grid) return {};
    Box b{2.0, -2.0, 2.0, -2.0};
    const double h = 0.5 / grid->K();
    for (size_t k = 0; k < grid->size(); ++k) {
        if (!(*mask)[k]) continue;
        const Vec2 c = (*grid)[k].center;
        b.xlo = std::min(b.xlo, c.x - h);
        b.xhi = std::max(b.xhi, c.x + h);
        b.ylo = std::min(b.ylo, c.y - h);
        b.yhi = std::max(b.yhi, c.y + h);
    }
    if (b.xlo > b.xhi) return {0.0, 0.0, 0.0, 0.0};
    return b;
}

Amplitude constant_amplitude(cplx value) {
    Amplitude f;
    f.density = [value](Vec2) { return value; };
    f.label = "constant";
    return f;
}

Amplitude smooth_random_amplitude(unsigned seed, int terms) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Term {
        double amp_re, amp_im, cx, cy, w, kx, ky;
    };
    std::vector<Term> ts;
    for (int t = 0; t < terms; ++t)
        ts.push_back({u(rng), u(rng), 0.8 * u(rng), 0.8 * u(rng), 1.0 + 0.5 * (u(rng) + 1.0),
                      3.0 * u(rng), 3.0 * u(rng)});
    Amplitude f;
    f.density = [ts](Vec2 z) {
        cplx s = 1.0;
        for (const auto& t : ts) {
            double dx = z.x - t.cx, dy = z.y - t.cy;
            double g = std::exp(-t.w * (dx * dx + dy * dy));
            s += cplx(t.amp_re, t.amp_im) * g * std::polar(1.0, t.kx * z.x + t.ky * z.y);
        }
        return s;
    };
    f.label = "smooth-random";
    return f;
}

Amplitude attach_grid(Amplitude f, std::shared_ptr<const CapGrid> grid) {
    f.grid = std::move(grid);
    const auto lines = f.grid->cell_lines();
    f.xbreaks.insert(f.xbreaks.end(), lines.begin(), lines.end());
    f.ybreaks.insert(f.ybreaks.end(), lines.begin(), lines.end());
    std::sort(f.xbreaks.begin(), f.xbreaks.end());
    f.xbreaks.erase(std::unique(f.xbreaks.begin(), f.xbreaks.end()), f.xbreaks.end());
    std::sort(f.ybreaks.begin(), f.ybreaks.end());
    f.ybreaks.erase(std::unique(f.ybreaks.begin(), f.ybreaks.end()), f.ybreaks.end());
    return f;
}

Amplitude restrict(const Amplitude& f, std::shared_ptr<const CapGrid> grid,
                   const std::vector<int>& cap_ids) {
    if (f.grid && f.grid.get() != grid.get() &&
        (f.grid->K() != grid->K() || f.grid->mu() != grid->mu()))
        throw Error(ErrorCode::MismatchedGrid, "amplitude carries a different cap grid");
    Amplitude g = f.grid ? f : attach_grid(f, grid);
    auto m = std::make_shared<std::vector<char>>(grid->size(), 0);
    for (int id : cap_ids) {
        if (id < 0 || static_cast<size_t>(id) >= grid->size())
            throw Error(ErrorCode::InvalidParam, "cap index out of range");
        (*m)[id] = (!f.mask || (*f.mask)[id]) ? 1 : 0;
    }
    g.mask = std::move(m);
    g.label = f.label + "|restricted";
    return g;
}

Amplitude restrict(const Amplitude& f, std::shared_ptr<const CapGrid> grid,
                   const std::function<bool(const Cap&)>& inside) {
    std::vector<int> ids;
    for (size_t k = 0; k < grid->size(); ++k)
        if (inside((*grid)[k])) ids.push_back(static_cast<int>(k));
    return restrict(f, std::move(grid), ids);
}

bool cap_inside_box(const Cap& c, const Box& b, double tol) {
    return c.clip.xlo >= b.xlo - tol && c.clip.xhi <= b.xhi + tol && c.clip.ylo >= b.ylo - tol &&
           c.clip.yhi <= b.yhi + tol;
}

}  // namespace hypx
