#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hypx/types.hpp"

namespace hypx {

struct Cap {
    Vec2 center;
    double side = 0.0;  // mu^{1/2} / K before clipping
    Box clip;           // square(center, side) intersected with Sigma
    int i = 0;          // column index, center.x = -1 + (i + 1/2) / K
    int j = 0;          // row index
    int K = 0;
    double mu = 1.0;
};

// The (2K)^2 caps of scale (K, mu). Cap (i,j) owns the grid cell of side 1/K
// around its center; the cell partition is what amplitude pieces are cut along.
class CapGrid {
public:
    CapGrid() = default;
    CapGrid(int K, double mu);

    int K() const { return K_; }
    double mu() const { return mu_; }
    int per_side() const { return 2 * K_; }
    size_t size() const { return caps_.size(); }
    const Cap& operator[](size_t idx) const { return caps_[idx]; }
    const std::vector<Cap>& caps() const { return caps_; }
    int index(int i, int j) const { return i * per_side() + j; }
    // Cell owning z; ties on cell lines go to the upper cell, z on the right or
    // top edge of Sigma goes to the last cell.
    int owner(Vec2 z) const;
    // Number of clipped caps whose interior contains z.
    int interior_multiplicity(Vec2 z) const;
    std::vector<double> cell_lines() const;

private:
    int K_ = 0;
    double mu_ = 1.0;
    std::vector<Cap> caps_;
};

CapGrid make_caps(int K, double mu);

// Density on Sigma with known discontinuity lines. An optional cell mask keeps
// only the pieces f_tau of the listed caps, so f_Delta = sum_{tau in Delta} f_tau.
struct Amplitude {
    std::function<cplx(Vec2)> density;
    std::vector<double> xbreaks;
    std::vector<double> ybreaks;
    std::shared_ptr<const std::vector<char>> mask;  // per cap cell, 1 = kept
    std::shared_ptr<const CapGrid> grid;
    std::string label;

    cplx operator()(Vec2 z) const;
    bool masked() const { return static_cast<bool>(mask); }
    // Kept cap indices (all cells when unmasked and a grid is attached).
    std::vector<int> kept_caps() const;
    // Bounding box of the kept cells, or Sigma when unmasked.
    Box support_box() const;
};

Amplitude constant_amplitude(cplx value = 1.0);
// Smooth random density: sum of a few modulated Gaussians, deterministic in seed.
Amplitude smooth_random_amplitude(unsigned seed, int terms = 4);
Amplitude attach_grid(Amplitude f, std::shared_ptr<const CapGrid> grid);

// f_Delta for the caps listed in cap_ids (indices into the grid).
Amplitude restrict(const Amplitude& f, std::shared_ptr<const CapGrid> grid,
                   const std::vector<int>& cap_ids);
// f_Delta for every cap whose clipped square satisfies inside().
Amplitude restrict(const Amplitude& f, std::shared_ptr<const CapGrid> grid,
                   const std::function<bool(const Cap&)>& inside);

// Closed containment of a clipped cap in a box, with tolerance.
bool cap_inside_box(const Cap& c, const Box& b, double tol = 1e-12);

}  // namespace hypx
