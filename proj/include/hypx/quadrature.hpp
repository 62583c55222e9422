#pragma once

#include <vector>

#include "hypx/caps.hpp"
#include "hypx/types.hpp"

namespace hypx {

struct Rule1D {
    std::vector<double> t;
    std::vector<double> w;
    size_t size() const { return t.size(); }
};

// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
const Rule1D& gauss_legendre(int order);

// Composite rule on [a, b]: split at the breaks inside (a, b), then into equal
// panels of length <= h, with `order` nodes per panel.
Rule1D composite_rule(double a, double b, const std::vector<double>& breaks, double h, int order);

struct Rule2D {
    std::vector<double> x, y, w;
    size_t size() const { return x.size(); }
};

Rule2D tensor_rule(const Box& box, const std::vector<double>& xbreaks, const std::vector<double>& ybreaks,
                   double h, int order);

// Panel bound min(1, 2 pi / (4 (|xi1| + |xi2| + 2 |xi3|))).
double panel_size(const Vec3& xi);

// Nodes of a tensor rule adapted to an amplitude: restricted to its support box,
// split at its breaks, and with masked-out cells dropped.
Rule2D amplitude_rule(const Amplitude& f, double h, int order);

}  // namespace hypx
