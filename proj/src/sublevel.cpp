#include "hypx/sublevel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypx/types.hpp"

namespace hypx {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct Sample {
    double t;
    double v;
    int cls;
};

// Uniform scan refined by midpoint insertion until neighbouring classes differ
// by at most one.
template <class Classify>
std::vector<Sample> adaptive_scan(const ScalarFunction& g, double a, double b, double step,
                                  Classify cls) {
    const long n = std::max(1L, static_cast<long>(std::ceil((b - a) / step - 1e-9)));
    std::vector<Sample> base;
    base.reserve(n + 1);
    for (long i = 0; i <= n; ++i) {
        double t = (i == n) ? b : a + static_cast<double>(i) * step;
        double v = g(t);
        base.push_back({t, v, cls(v)});
    }
    std::vector<Sample> out;
    out.reserve(base.size());
    out.push_back(base[0]);
    for (size_t i = 0; i + 1 < base.size(); ++i) {
        // Depth-first refinement of one base step.
        std::vector<std::pair<Sample, int>> stack;
        Sample left = base[i];
        stack.push_back({base[i + 1], 0});
        while (!stack.empty()) {
            auto [right, depth] = stack.back();
            if (std::abs(right.cls - left.cls) <= 1) {
                out.push_back(right);
                left = right;
                stack.pop_back();
                continue;
            }
            if (depth >= 64) {
                std::ostringstream os;
                os << "class jump from " << left.cls << " to " << right.cls << " near t=" << left.t
                   << " not resolved by refinement";
                throw Error(ErrorCode::ResolutionInsufficient, os.str());
            }
            double tm = 0.5 * (left.t + right.t);
            double vm = g(tm);
            stack.back().second = depth + 1;
            stack.push_back({{tm, vm, cls(vm)}, depth + 1});
        }
    }
    return out;
}

// Bisection for the point between t_in (inside) and t_out (outside) where the
// predicate changes; returns the last inside point, or the first outside point
// when outward is set.
template <class Inside>
double refine_edge(double t_in, double t_out, Inside inside, double tol, bool outward = false) {
    for (int it = 0; it < 200 && std::fabs(t_out - t_in) > tol; ++it) {
        double tm = 0.5 * (t_in + t_out);
        if (inside(tm)) t_in = tm;
        else t_out = tm;
    }
    return outward ? t_out : t_in;
}

struct Run {
    size_t first;
    size_t last;
    int cls;
};

std::vector<Run> runs_of(const std::vector<Sample>& s) {
    std::vector<Run> runs;
    for (size_t i = 0; i < s.size(); ++i) {
        if (!runs.empty() && runs.back().cls == s[i].cls) runs.back().last = i;
        else runs.push_back({i, i, s[i].cls});
    }
    return runs;
}

double scan_step(double lambda, double len, const SublevelOptions& o) {
    const double max_step = len * o.max_step_fraction;
    const double min_step = len * o.min_step_fraction;
    int m = std::max(o.refine_factor, 1);
    double step = lambda / (100.0 * m);
    if (step > max_step) {
        m = static_cast<int>(std::ceil(lambda / (100.0 * max_step)));
        step = lambda / (100.0 * m);
    }
    return std::max(step, min_step);
}

void check_interval(double a, double b) {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
        throw Error(ErrorCode::InvalidParam, "base interval must satisfy a < b");
}

void merge_touching(std::vector<Interval>& v, double gap) {
    std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.a <= out.back().b + gap) out.back().b = std::max(out.back().b, iv.b);
        else out.push_back(iv);
    }
    v = std::move(out);
}

}  // namespace

double ScalarFunction::derivative(int m, double t, double h) const {
    if (m == 0) return g(t);
    if (deriv) return deriv(m, t);
    // Central difference of order m; step grows with m to limit cancellation.
    const double hm = std::max(h, std::pow(1e-15, 1.0 / (m + 2)));
    double s = 0.0;
    for (int i = 0; i <= m; ++i)
        s += ((i % 2) ? -1.0 : 1.0) * binom(m, i) * g(t + (0.5 * m - i) * hm);
    return s / std::pow(hm, m);
}

bool IntervalDecomposition::covers(double t, double slack) const {
    for (const auto& iv : intervals)
        if (iv.contains(t, slack)) return true;
    return false;
}

double estimate_Cr(const ScalarFunction& g, double a, double b, int r, int samples) {
    check_interval(a, b);
    double best = 0.0;
    const double hm = g.deriv ? 0.0 : std::max(1e-3, std::pow(1e-15, 1.0 / (r + 2)));
    const double lo = std::min(a + 0.5 * r * hm, 0.5 * (a + b));
    const double hi = std::max(b - 0.5 * r * hm, 0.5 * (a + b));
    for (int i = 0; i < samples; ++i) {
        double t = a + (b - a) * i / (samples - 1);
        if (!g.deriv) t = std::clamp(t, lo, hi);
        best = std::max(best, std::fabs(g.derivative(r, t)));
    }
    return best;
}

double sup_norm(const ScalarFunction& g, double a, double b, int samples) {
    check_interval(a, b);
    double best = 0.0;
    for (int i = 0; i < samples; ++i) best = std::max(best, std::fabs(g(a + (b - a) * i / (samples - 1))));
    return best;
}

double level_bound(int r, double len, double C_r, double lambda) {
    return 10.0 * r * (1.0 + len * std::pow(C_r, 1.0 / r) * std::pow(lambda, -1.0 / r));
}

double sublevel_bound(int r, double len, double C_r, double lambda) {
    return 30.0 * r * (1.0 + len * std::pow(C_r, 1.0 / r) * std::pow(lambda, -1.0 / r));
}

std::vector<IntervalDecomposition> level_decompose(const ScalarFunction& g, double a, double b, int r,
                                                   double lambda_min, const SublevelOptions& opts) {
    check_interval(a, b);
    if (r < 1) throw Error(ErrorCode::InvalidParam, "r must be >= 1");
    if (!(lambda_min > 0.0)) throw Error(ErrorCode::InvalidParam, "lambda_min must be positive");
    const double len = b - a;
    const int e_bottom = static_cast<int>(std::floor(std::log2(lambda_min)));
    const int below = e_bottom - 1;
    auto cls = [&](double v) {
        double m = std::fabs(v);
        if (!(m > 0.0)) return below;
        int e = static_cast<int>(std::floor(std::log2(m)));
        return std::max(e, below);
    };
    const auto samples = adaptive_scan(g, a, b, len * opts.max_step_fraction, cls);
    double sup = 0.0;
    for (const auto& s : samples) sup = std::max(sup, std::fabs(s.v));
    std::vector<IntervalDecomposition> out;
    if (!(sup > 0.0) || sup < std::ldexp(1.0, e_bottom)) return out;
    const int e_top = static_cast<int>(std::floor(std::log2(sup)));
    const double C_r = opts.C_r >= 0.0 ? opts.C_r : estimate_Cr(g, a, b, r);

    for (int e = e_top; e >= e_bottom; --e) {
        IntervalDecomposition d;
        d.base_a = a;
        d.base_b = b;
        d.lambda = std::ldexp(1.0, e);
        d.r = r;
        d.C_r = C_r;
        out.push_back(d);
    }
    const auto runs = runs_of(samples);
    for (size_t k = 0; k < runs.size(); ++k) {
        const Run& run = runs[k];
        if (run.cls == below) continue;
        const int e = run.cls;
        const double lam = std::ldexp(1.0, e);
        auto inside = [&](double t) {
            double m = std::fabs(g(t));
            return m >= lam && m < 2.0 * lam;
        };
        double left = samples[run.first].t;
        double right = samples[run.last].t;
        if (run.first > 0) left = refine_edge(left, samples[run.first - 1].t, inside, opts.endpoint_tol);
        if (run.last + 1 < samples.size())
            right = refine_edge(right, samples[run.last + 1].t, inside, opts.endpoint_tol);
        out[static_cast<size_t>(e_top - e)].intervals.push_back({left, right, e});
    }
    for (auto& d : out) {
        d.cardinality_bound = level_bound(r, len, C_r, d.lambda);
        d.within_bound = static_cast<double>(d.intervals.size()) <= d.cardinality_bound;
    }
    return out;
}

IntervalDecomposition sublevel_decompose(const ScalarFunction& g, double a, double b, int r,
                                         double lambda, const SublevelOptions& opts) {
    check_interval(a, b);
    if (r < 1) throw Error(ErrorCode::InvalidParam, "r must be >= 1");
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidParam, "lambda must be positive");
    const double len = b - a;
    auto cls = [lambda](double v) {
        double m = std::fabs(v);
        return m < lambda ? 0 : (m < 2.0 * lambda ? 1 : 2);
    };
    const auto samples = adaptive_scan(g, a, b, scan_step(lambda, len, opts), cls);
    double sup = 0.0;
    for (const auto& s : samples) sup = std::max(sup, std::fabs(s.v));
    if (lambda > sup) {
        std::ostringstream os;
        os << "lambda=" << lambda << " exceeds sampled sup |g|=" << sup;
        throw Error(ErrorCode::LevelExceedsMax, os.str());
    }

    IntervalDecomposition d;
    d.base_a = a;
    d.base_b = b;
    d.lambda = lambda;
    d.r = r;
    d.C_r = opts.C_r >= 0.0 ? opts.C_r : estimate_Cr(g, a, b, r);

    auto in_sub = [&](double t) { return std::fabs(g(t)) < lambda; };
    auto in_band = [&](double t) {
        double m = std::fabs(g(t));
        return m >= lambda && m < 2.0 * lambda;
    };
    const auto runs = runs_of(samples);
    // Sublevel runs end just outside {|g| < lambda}, band runs just inside {|g| < 2 lambda}.
    auto run_extent = [&](const Run& run, auto inside, bool outward) {
        double left = samples[run.first].t, right = samples[run.last].t;
        if (run.first > 0) left = refine_edge(left, samples[run.first - 1].t, inside, opts.endpoint_tol, outward);
        if (run.last + 1 < samples.size())
            right = refine_edge(right, samples[run.last + 1].t, inside, opts.endpoint_tol, outward);
        return std::pair<double, double>{left, right};
    };
    std::vector<Interval> pieces;
    for (size_t k = 0; k < runs.size(); ++k) {
        if (runs[k].cls != 0) continue;
        auto [l, rr] = run_extent(runs[k], in_sub, true);
        // Attach the neighbouring band component, preferring the right one.
        if (k + 1 < runs.size() && runs[k + 1].cls == 1) rr = run_extent(runs[k + 1], in_band, false).second;
        else if (k > 0 && runs[k - 1].cls == 1) l = run_extent(runs[k - 1], in_band, false).first;
        pieces.push_back({l, rr, 0});
    }
    merge_touching(pieces, 4.0 * opts.endpoint_tol);
    d.intervals = std::move(pieces);
    d.cardinality_bound = sublevel_bound(r, len, d.C_r, lambda);
    d.within_bound = static_cast<double>(d.intervals.size()) <= d.cardinality_bound;
    return d;
}

IntervalDecomposition thickened_decompose(const ScalarFunction& g, double a, double b, int r,
                                          double lambda, double C, const SublevelOptions& opts) {
    check_interval(a, b);
    if (!(C >= 0.0)) throw Error(ErrorCode::InvalidParam, "C must be >= 0");
    const double len = b - a;
    const double delta = C * lambda;
    if (delta > len) throw Error(ErrorCode::ThickeningExceedsInterval, "C*lambda exceeds |I|");
    const double slope = estimate_Cr(g, a, b, 1);
    if (slope > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "sampled sup |g'|=" << slope << " > 1";
        throw Error(ErrorCode::SlopeBoundViolated, os.str());
    }
    IntervalDecomposition d = sublevel_decompose(g, a, b, r, lambda, opts);
    for (auto& iv : d.intervals) {
        if (iv.length() >= delta) continue;
        const double c = 0.5 * (iv.a + iv.b);
        double lo = c - 0.5 * delta, hi = c + 0.5 * delta;
        if (lo < a) {
            hi += a - lo;
            lo = a;
        }
        if (hi > b) {
            lo -= hi - b;
            hi = b;
        }
        iv.a = std::max(a, lo);
        iv.b = std::min(b, hi);
    }
    merge_touching(d.intervals, 0.0);
    d.within_bound = static_cast<double>(d.intervals.size()) <= d.cardinality_bound;
    return d;
}

ContainmentCheck check_containment(const ScalarFunction& g, const IntervalDecomposition& d, double outer_factor) {
    ContainmentCheck c;
    c.disjoint = true;
    for (size_t k = 0; k < d.intervals.size(); ++k) {
        const Interval& iv = d.intervals[k];
        if (!(iv.a <= iv.b) || iv.a < d.base_a || iv.b > d.base_b) c.disjoint = false;
        if (k > 0 && !(iv.a > d.intervals[k - 1].b)) c.disjoint = false;
    }
    const double step = d.lambda / 100.0;
    const auto n = static_cast<size_t>(std::ceil(d.base_length() / step));
    size_t cur = 0;
    for (size_t k = 0; k <= n; ++k) {
        const double t = std::min(d.base_b, d.base_a + static_cast<double>(k) * step);
        while (cur < d.intervals.size() && d.intervals[cur].b < t) ++cur;
        const bool in = cur < d.intervals.size() && d.intervals[cur].a <= t;
        const double v = std::fabs(g(t));
        if (v < d.lambda && !in) ++c.inner_violations;
        if (in && v >= outer_factor * d.lambda) ++c.outer_violations;
        ++c.samples;
    }
    return c;
}

std::vector<double> deriv_interp_constants(double eps, const std::vector<double>& c) {
    if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorCode::InvalidParam, "eps must lie in (0,1]");
    const int M = static_cast<int>(std::ceil(1.0 / eps - 1e-12));
    const int k = static_cast<int>(c.size());
    if (k < M) {
        std::ostringstream os;
        os << "k=" << k << " < ceil(1/eps)=" << M;
        throw Error(ErrorCode::KTooSmall, os.str());
    }
    std::vector<double> Ct(k + 1, 0.0);
    for (int m = M; m <= k; ++m) Ct[m] = c[m - 1];
    for (int m = M; m >= 1; --m) Ct[m - 1] = std::ldexp(1.0, m * (m - 1)) + Ct[m];
    return Ct;
}

DerivInterpReport deriv_interp_check(const ScalarFunction& g, double a, double b, int k, double eps,
                                     const std::vector<double>& c, int samples) {
    check_interval(a, b);
    if (static_cast<int>(c.size()) != k + 1)
        throw Error(ErrorCode::InvalidParam, "expected c_0..c_k");
    DerivInterpReport rep;
    rep.k = k;
    rep.eps = eps;
    rep.b = b - a;
    rep.c = c;
    if (!(c[0] < 1.0)) throw Error(ErrorCode::HypothesisViolated, "c_0 < 1 fails");
    if (k < std::ceil(1.0 / eps - 1e-12)) throw Error(ErrorCode::HypothesisViolated, "k >= 1/eps fails");
    if (rep.b > std::pow(c[0], eps) * (1.0 + 1e-12))
        throw Error(ErrorCode::HypothesisViolated, "|I| <= c_0^eps fails");
    for (int m = 0; m <= k; ++m) {
        double s = 0.0;
        for (int i = 0; i < samples; ++i)
            s = std::max(s, std::fabs(g.derivative(m, a + (b - a) * i / (samples - 1))));
        rep.sup.push_back(s);
        if (s > c[m] * (1.0 + 1e-9) + 1e-300) {
            std::ostringstream os;
            os << "||g^(" << m << ")|| = " << s << " > c_" << m << " = " << c[m];
            throw Error(ErrorCode::HypothesisViolated, os.str());
        }
    }
    rep.C_tilde = deriv_interp_constants(eps, std::vector<double>(c.begin() + 1, c.end()));
    rep.pass = true;
    for (int m = 0; m <= k; ++m) {
        double bound = c[0] * rep.C_tilde[m] * std::pow(rep.b, -m);
        rep.bound.push_back(bound);
        rep.margin.push_back(bound - rep.sup[m]);
        if (rep.sup[m] > bound) rep.pass = false;
    }
    return rep;
}

}  // namespace hypx
