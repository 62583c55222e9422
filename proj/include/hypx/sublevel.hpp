#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hypx {

// Real function of one variable, optionally with closed-form derivatives.
struct ScalarFunction {
    std::function<double(double)> g;
    std::function<double(int, double)> deriv;  // deriv(m, t); may be empty
    std::string label;

    double operator()(double t) const { return g(t); }
    // m-th derivative: closed form when available, else central differences.
    double derivative(int m, double t, double h = 1e-3) const;
};

struct Interval {
    double a = 0.0;
    double b = 0.0;
    int band = 0;  // dyadic exponent e with lambda = 2^e, or 0 for sublevel pieces
    double length() const { return b - a; }
    bool contains(double t, double slack = 1e-12) const { return t >= a - slack && t <= b + slack; }
};

struct IntervalDecomposition {
    double base_a = 0.0;
    double base_b = 0.0;
    double lambda = 0.0;
    std::vector<Interval> intervals;
    int r = 1;
    double C_r = 0.0;
    double cardinality_bound = 0.0;
    bool within_bound = false;

    bool covers(double t, double slack = 1e-12) const;
    double base_length() const { return base_b - base_a; }
};

struct SublevelOptions {
    // Scan step is lambda / (100 * m) with m >= refine_factor, so the lambda/100
    // grid used by checks is a subset of the scan.
    int refine_factor = 4;
    double max_step_fraction = 1.0 / 2000.0;  // of |I|
    double min_step_fraction = 1.0 / 2e6;     // of |I|
    double endpoint_tol = 1e-12;
    double C_r = -1.0;  // caller-supplied ||g^(r)||_inf; estimated when negative
};

// Sampled estimate of ||g^(r)||_inf on [a,b].
double estimate_Cr(const ScalarFunction& g, double a, double b, int r, int samples = 20001);
double sup_norm(const ScalarFunction& g, double a, double b, int samples = 20001);

double level_bound(int r, double len, double C_r, double lambda);     // 10 r (1 + |I| C_r^{1/r} lambda^{-1/r})
double sublevel_bound(int r, double len, double C_r, double lambda);  // 30 r (...)

// Bands: maximal components of {lambda <= |g| < 2 lambda} for dyadic lambda from
// the largest dyadic <= ||g||_inf down to the largest dyadic <= lambda_min.
std::vector<IntervalDecomposition> level_decompose(const ScalarFunction& g, double a, double b, int r,
                                                   double lambda_min = 0x1p-40,
                                                   const SublevelOptions& opts = {});

// Cover V of {|g| < lambda} with V inside {|g| < 2 lambda}.
IntervalDecomposition sublevel_decompose(const ScalarFunction& g, double a, double b, int r,
                                         double lambda, const SublevelOptions& opts = {});

// Sublevel cover whose pieces have length >= C lambda (requires ||g'|| <= 1).
IntervalDecomposition thickened_decompose(const ScalarFunction& g, double a, double b, int r,
                                          double lambda, double C, const SublevelOptions& opts = {});

struct ContainmentCheck {
    size_t samples = 0;
    size_t inner_violations = 0;  // |g| < lambda outside the cover
    size_t outer_violations = 0;  // in the cover with |g| >= outer_factor * lambda
    bool disjoint = false;        // sorted, pairwise disjoint, inside the base interval
    bool ok() const { return inner_violations == 0 && outer_violations == 0 && disjoint; }
};

// Grid check of {|g| < lambda} in V in {|g| < outer_factor lambda} at step lambda / 100.
ContainmentCheck check_containment(const ScalarFunction& g, const IntervalDecomposition& d, double outer_factor);

// Recursion C~_m = c_m (m >= M), C~_{m-1} = 2^{m(m-1)} + C~_m, M = ceil(1/eps).
// c holds c_1..c_k; returns C~_0..C~_k.
std::vector<double> deriv_interp_constants(double eps, const std::vector<double>& c);

struct DerivInterpReport {
    int k = 0;
    double eps = 0.0;
    double b = 0.0;
    std::vector<double> c;        // c_0..c_k
    std::vector<double> C_tilde;  // C~_0..C~_k
    std::vector<double> sup;      // sampled ||g^(m)||_inf
    std::vector<double> bound;    // c_0 C~_m b^{-m}
    std::vector<double> margin;   // bound - sup
    bool pass = false;
};

// c holds c_0..c_k.
DerivInterpReport deriv_interp_check(const ScalarFunction& g, double a, double b, int k, double eps,
                                     const std::vector<double>& c, int samples = 4001);

}  // namespace hypx
