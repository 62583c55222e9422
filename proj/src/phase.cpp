#include "hypx/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hypx {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::OrderExceeded: return "order-exceeded";
        case ErrorCode::Domain: return "domain";
        case ErrorCode::UnknownName: return "unknown-name";
        case ErrorCode::ParamRange: return "param-range";
        case ErrorCode::NonpositiveH: return "nonpositive-H";
        case ErrorCode::NoConvergence: return "no-convergence";
        case ErrorCode::SeparatedPair: return "separated-pair";
        case ErrorCode::NotSeparated: return "not-separated";
        case ErrorCode::MismatchedGrid: return "mismatched-grid";
        case ErrorCode::ResolutionInsufficient: return "resolution-insufficient";
        case ErrorCode::LevelExceedsMax: return "level-exceeds-max";
        case ErrorCode::SlopeBoundViolated: return "slope-bound-violated";
        case ErrorCode::ThickeningExceedsInterval: return "thickening-exceeds-interval";
        case ErrorCode::KTooSmall: return "k-too-small";
        case ErrorCode::HypothesisViolated: return "hypothesis-violated";
        case ErrorCode::InvalidParam: return "invalid-param";
        case ErrorCode::TolNotMet: return "tol-not-met";
        case ErrorCode::RTooSmall: return "R-too-small";
        case ErrorCode::ConfigParse: return "config-parse";
    }
    return "unknown";
}

PhaseFunction::PhaseFunction(std::shared_ptr<const PhaseModel> model, int order,
                             std::string label, Box domain)
    : model_(std::move(model)), order_(order), label_(std::move(label)), domain_(domain) {
    if (!model_) throw Error(ErrorCode::InvalidParam, "null phase model");
    if (order_ < 2) throw Error(ErrorCode::InvalidParam, "phase order must be >= 2");
}

double PhaseFunction::deriv(int a, int b, Vec2 z) const {
    if (a < 0 || b < 0) throw Error(ErrorCode::InvalidParam, "negative derivative index");
    if (a + b > order_) {
        std::ostringstream os;
        os << "a+b=" << a + b << " > M=" << order_;
        throw Error(ErrorCode::OrderExceeded, os.str());
    }
    if (!std::isfinite(z.x) || !std::isfinite(z.y) || !domain_.contains(z, 1e-12)) {
        std::ostringstream os;
        os << "point (" << z.x << "," << z.y << ") outside the phase domain";
        throw Error(ErrorCode::Domain, os.str());
    }
    return model_->deriv(a, b, z);
}

Mat2 PhaseFunction::hessian(Vec2 z) const {
    double xy = deriv(1, 1, z);
    return {deriv(2, 0, z), xy, xy, deriv(0, 2, z)};
}

namespace {

double falling(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= static_cast<double>(n - i);
    return r;
}

class PolynomialModel : public PhaseModel {
public:
    explicit PolynomialModel(std::vector<MonomialTerm> terms) : terms_(std::move(terms)) {}

    double deriv(int a, int b, Vec2 z) const override {
        double s = 0.0;
        for (const auto& t : terms_) {
            if (t.px < a || t.py < b) continue;
            s += t.coef * falling(t.px, a) * std::pow(z.x, t.px - a) * falling(t.py, b) *
                 std::pow(z.y, t.py - b);
        }
        return s;
    }

private:
    std::vector<MonomialTerm> terms_;
};

// xy + c (sin(ax) - ax) cos(ay)
class TrigModel : public PhaseModel {
public:
    TrigModel(double c, double a) : c_(c), a_(a) {}

    double deriv(int i, int j, Vec2 z) const override {
        double base = 0.0;
        if (i == 0 && j == 0) base = z.x * z.y;
        else if (i == 1 && j == 0) base = z.y;
        else if (i == 0 && j == 1) base = z.x;
        else if (i == 1 && j == 1) base = 1.0;
        return base + c_ * xfactor(i, z.x) * yfactor(j, z.y);
    }

private:
    double xfactor(int i, double x) const {
        double ax = a_ * x;
        if (i == 0) return std::sin(ax) - ax;
        if (i == 1) return a_ * (std::cos(ax) - 1.0);
        return std::pow(a_, i) * std::sin(ax + i * std::numbers::pi / 2.0);
    }
    double yfactor(int j, double y) const {
        return std::pow(a_, j) * std::cos(a_ * y + j * std::numbers::pi / 2.0);
    }

    double c_, a_;
};

void require_range(const std::string& name, double v, double lo, double hi) {
    if (!(v >= lo && v <= hi)) {
        std::ostringstream os;
        os << name << "=" << v << " outside [" << lo << "," << hi << "]";
        throw Error(ErrorCode::ParamRange, os.str());
    }
}

void require_count(const std::string& name, const std::vector<double>& p, size_t n) {
    if (p.size() != n) {
        std::ostringstream os;
        os << name << " expects " << n << " parameter(s), got " << p.size();
        throw Error(ErrorCode::ParamRange, os.str());
    }
}

}  // namespace

PhaseFunction make_polynomial_phase(std::vector<MonomialTerm> terms, int order,
                                    std::string label) {
    for (const auto& t : terms)
        if (t.px < 0 || t.py < 0) throw Error(ErrorCode::InvalidParam, "negative exponent");
    return PhaseFunction(std::make_shared<PolynomialModel>(std::move(terms)), order,
                         std::move(label));
}

std::vector<std::string> builtin_names() { return {"saddle", "cubic-x", "mixed-quartic", "trig"}; }

PhaseFunction builtin_family(const std::string& name, const std::vector<double>& params,
                             int order) {
    if (order < 3) throw Error(ErrorCode::ParamRange, "order must be >= 3");
    std::ostringstream label;
    label << name;
    for (double p : params) label << ":" << p;
    if (name == "saddle") {
        require_count(name, params, 0);
        return make_polynomial_phase({{1.0, 1, 1}}, order, label.str());
    }
    if (name == "cubic-x") {
        require_count(name, params, 1);
        require_range("c", params[0], -1.5e-6, 1.5e-6);
        return make_polynomial_phase({{1.0, 1, 1}, {params[0], 3, 0}}, order, label.str());
    }
    if (name == "mixed-quartic") {
        require_count(name, params, 1);
        require_range("c", params[0], -1.25e-6, 1.25e-6);
        return make_polynomial_phase({{1.0, 1, 1}, {params[0], 2, 2}}, order, label.str());
    }
    if (name == "trig") {
        require_count(name, params, 2);
        require_range("c", params[0], -5e-6, 5e-6);
        if (!(params[1] > 0.0 && params[1] <= 1.0))
            throw Error(ErrorCode::ParamRange, "a must lie in (0,1]");
        return PhaseFunction(std::make_shared<TrigModel>(params[0], params[1]), order,
                             label.str());
    }
    throw Error(ErrorCode::UnknownName, "unknown phase family '" + name + "'");
}

ValidationReport validate_hyp(const PhaseFunction& phi, double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.1))
        throw Error(ErrorCode::InvalidParam, "grid_step must lie in (0, 0.1]");
    ValidationReport r;
    r.grid_step = grid_step;
    const Vec2 o{0.0, 0.0};
    r.normal_residuals = {std::fabs(phi.raw(0, 0, o)),       std::fabs(phi.raw(1, 0, o)),
                          std::fabs(phi.raw(0, 1, o)),       std::fabs(phi.raw(2, 0, o)),
                          std::fabs(phi.raw(0, 2, o)),       std::fabs(phi.raw(1, 1, o) - 1.0)};
    r.max_normal_residual = *std::max_element(r.normal_residuals.begin(), r.normal_residuals.end());
    r.normal_ok = r.max_normal_residual <= kNormalTol;

    const int M = phi.order();
    const Box& dom = phi.domain();
    auto axis = [grid_step](double lo, double hi) {
        int n = static_cast<int>(std::ceil((hi - lo) / grid_step - 1e-9));
        std::vector<double> v(n + 1);
        for (int i = 0; i <= n; ++i) v[i] = (i == n) ? hi : lo + i * grid_step;
        return v;
    };
    const auto xs = axis(dom.xlo, dom.xhi);
    const auto ys = axis(dom.ylo, dom.yhi);
    for (double x : xs) {
        for (double y : ys) {
            Vec2 z{x, y};
            for (int n = 3; n <= M; ++n) {
                for (int a = 0; a <= n; ++a) {
                    double v = std::fabs(phi.raw(a, n - a, z));
                    if (v > r.max_high_deriv) {
                        r.max_high_deriv = v;
                        r.worst_a = a;
                        r.worst_b = n - a;
                        r.worst_z = z;
                    }
                }
            }
        }
    }
    r.high_ok = r.max_high_deriv <= kHighDerivBound;

    const auto sx = axis(-1.0, 1.0);
    for (double x : sx) {
        for (double y : sx) {
            Vec2 z{x, y};
            r.max_phi_xx = std::max(r.max_phi_xx, std::fabs(phi.raw(2, 0, z)));
            r.max_phi_yy = std::max(r.max_phi_yy, std::fabs(phi.raw(0, 2, z)));
            r.max_phi_xy_minus_1 = std::max(r.max_phi_xy_minus_1, std::fabs(phi.raw(1, 1, z) - 1.0));
        }
    }
    r.derived_ok = r.max_phi_xx <= kDerivedBound && r.max_phi_yy <= kDerivedBound &&
                   r.max_phi_xy_minus_1 <= kDerivedBound;
    r.pass = r.normal_ok && r.high_ok && r.derived_ok;
    return r;
}

}  // namespace hypx
