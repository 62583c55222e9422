#pragma once

#include <memory>
#include <vector>

#include "hypx/caps.hpp"
#include "hypx/phase.hpp"
#include "hypx/quadrature.hpp"
#include "hypx/rects.hpp"

namespace hypx {

// Quadrature nodes with complex weights w_k f(z_k) and phase values p_k = phi(z_k).
struct NodeSet {
    std::vector<double> x, y, p, wr, wi;
    size_t size() const { return x.size(); }
};

NodeSet amplitude_nodes(const PhaseFunction& phi, const Amplitude& f, double h, int order);
// sum_k w_k f(z_k) exp(-i xi . (x_k, y_k, p_k)) through the dispatched kernel.
cplx node_sum(const NodeSet& nodes, const Vec3& xi);

struct ExtendResult {
    cplx value;
    double error_estimate = 0.0;  // |I(h) - I(h/2)| at the accepted level
    int levels = 0;
    size_t nodes = 0;
};

// Adaptive tensor quadrature; accepts when one halving of the panels changes the
// value by at most quad_tol * max(1, |value|). Throws TolNotMet otherwise.
ExtendResult extend_adaptive(const PhaseFunction& phi, const Amplitude& f, const Vec3& xi, double quad_tol,
                             int order = 8, int max_levels = 6);
cplx extend(const PhaseFunction& phi, const Amplitude& f, const Vec3& xi, double quad_tol = 1e-8);

// Rectilinear samples of B_R = [-R, R]^3 with step h on every axis.
struct FreqGrid {
    double R = 16.0;
    double h = 0.5;
    std::vector<double> axis;
    size_t n() const { return axis.size(); }
    size_t size() const { return axis.size() * axis.size() * axis.size(); }
    // Point (axis[i], axis[j], axis[k]) lives at (i n + j) n + k.
    size_t index(size_t i, size_t j, size_t k) const { return (i * n() + j) * n() + k; }
    Vec3 point(size_t idx) const;
};

FreqGrid make_freq_grid(double R, double h);

struct FieldOptions {
    int order = 8;
    double panel_scale = 1.0;  // multiplies the panel bound at |xi| = (R, R, R)
};

struct ExtensionField {
    FreqGrid grid;
    std::vector<cplx> values;
    int order = 8;
    double panel = 0.0;
    size_t nodes = 0;
};

// Separable evaluation: per xi3 slice, E1 (W o exp(-i xi3 Phi)) E2^T.
ExtensionField extension_field(const PhaseFunction& phi, const Amplitude& f, const FreqGrid& grid,
                               const FieldOptions& opts = {});

// Same evaluation from a tensor rule and density values at its nodes, stored
// x-fastest: values[j * rx.size() + i] = f(rx.t[i], ry.t[j]).
ExtensionField extension_field_tensor(const PhaseFunction& phi, const Rule1D& rx, const Rule1D& ry,
                                      const std::vector<cplx>& values, const FreqGrid& grid);

// Riemann-sum L^p norm (sum |v|^p h^3)^{1/p}; p = infinity gives max |v|.
double lp_norm(const ExtensionField& field, double p);
double lp_norm(const std::vector<double>& values, double h, double p);
double l1_norm(const PhaseFunction& phi, const Amplitude& f);

struct BroadField {
    ExtensionField base;
    double alpha = 1.0;
    // Per grid point, max |E f_Delta| over Delta with an A or B strip member,
    // and over Delta made of a big cap alone.
    std::vector<double> max_strip;
    std::vector<double> max_tile;
    size_t delta_count = 0;
    size_t atom_count = 0;

    double max_delta(size_t idx) const { return std::max(max_strip[idx], max_tile[idx]); }
    bool broad(size_t idx, double a) const;
    std::vector<double> br(double a) const;
    // 'A' broad, 'B' dominated by a strip piece, 'C' dominated by big-cap pieces only.
    std::vector<char> labels(double a) const;
    double max_ratio() const;  // max over grid of max_delta / |E f|
};

// f must carry the cap grid of fam (attach_grid or restrict). The closure is
// built over the caps in the support of f.
BroadField broad_field(const PhaseFunction& phi, const Amplitude& f, const StripFamily& fam, double alpha,
                       const FreqGrid& grid, const FieldOptions& opts = {});

// |E f_tau1(xi)|^{1/2} |E f_tau2(xi)|^{1/2}; throws NotSeparated.
double bil(const PhaseFunction& phi, const Amplitude& f, std::shared_ptr<const CapGrid> caps, int tau1, int tau2,
           const Vec3& xi, double quad_tol = 1e-8);

struct GrowthRow {
    double R = 0.0;
    double h = 0.0;
    double norm = 0.0;  // ||Br_alpha E f||_{L^p(B_R)}
    double full_norm = 0.0;
    double broad_fraction = 0.0;
    size_t points = 0;
};

struct GrowthTable {
    double p = 3.25;
    double alpha = 1.0;
    std::vector<GrowthRow> rows;
    double slope = 0.0;  // least squares of log norm against log R over positive rows
    bool slope_finite = false;
};

// grid_points: samples per axis of B_R for every R (the step is 2R / (grid_points - 1)).
GrowthTable growth_sweep(const PhaseFunction& phi, const Amplitude& f, const StripFamily& fam, double p,
                         const std::vector<double>& R_list, double alpha, int grid_points,
                         const FieldOptions& opts = {});

double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hypx
