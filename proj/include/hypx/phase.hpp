#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hypx/types.hpp"

namespace hypx {

// Source of exact partial derivatives d^a_x d^b_y phi(z).
class PhaseModel {
public:
    virtual ~PhaseModel() = default;
    virtual double deriv(int a, int b, Vec2 z) const = 0;
};

class PhaseFunction {
public:
    PhaseFunction() = default;
    PhaseFunction(std::shared_ptr<const PhaseModel> model, int order, std::string label,
                  Box domain = {-2.0, 2.0, -2.0, 2.0});

    // Checked access: a+b <= order and z inside the domain.
    double deriv(int a, int b, Vec2 z) const;
    // Unchecked access for inner loops that already validated the inputs.
    double raw(int a, int b, Vec2 z) const { return model_->deriv(a, b, z); }

    double value(Vec2 z) const { return deriv(0, 0, z); }
    Vec2 grad(Vec2 z) const { return {deriv(1, 0, z), deriv(0, 1, z)}; }
    Mat2 hessian(Vec2 z) const;

    int order() const { return order_; }
    const std::string& label() const { return label_; }
    const Box& domain() const { return domain_; }
    bool valid() const { return static_cast<bool>(model_); }
    const std::shared_ptr<const PhaseModel>& model() const { return model_; }

private:
    std::shared_ptr<const PhaseModel> model_;
    int order_ = 0;
    std::string label_;
    Box domain_;
};

struct MonomialTerm {
    double coef;
    int px;
    int py;
};

// phi = sum coef * x^px * y^py, with exact derivatives of every order.
PhaseFunction make_polynomial_phase(std::vector<MonomialTerm> terms, int order,
                                    std::string label);

// Built-in Hyp^M members. Names and safe parameter ranges:
//   saddle         []      phi = xy
//   cubic-x        [c]     phi = xy + c x^3,            |c| <= 1.5e-6
//   mixed-quartic  [c]     phi = xy + c x^2 y^2,        |c| <= 1.25e-6
//   trig           [c, a]  phi = xy + c (sin(ax) - ax) cos(ay), |c| <= 5e-6, 0 < a <= 1
PhaseFunction builtin_family(const std::string& name, const std::vector<double>& params,
                             int order = 8);

std::vector<std::string> builtin_names();

struct ValidationReport {
    double grid_step = 0.0;
    // Normal-form residuals: phi, phi_x, phi_y, phi_xx, phi_yy, phi_xy - 1 at 0.
    std::array<double, 6> normal_residuals{};
    double max_normal_residual = 0.0;
    // max over 3 <= a+b <= M on the 2Sigma grid.
    double max_high_deriv = 0.0;
    int worst_a = 0, worst_b = 0;
    Vec2 worst_z;
    // max over the Sigma grid.
    double max_phi_xx = 0.0, max_phi_yy = 0.0, max_phi_xy_minus_1 = 0.0;
    bool normal_ok = false, high_ok = false, derived_ok = false;
    bool pass = false;
};

inline constexpr double kNormalTol = 1e-12;
inline constexpr double kHighDerivBound = 1e-5;
inline constexpr double kDerivedBound = 2e-5;

// Samples a grid over 2Sigma (high derivatives) and Sigma (second derivatives).
ValidationReport validate_hyp(const PhaseFunction& phi, double grid_step = 1.0 / 128.0);

}  // namespace hypx
