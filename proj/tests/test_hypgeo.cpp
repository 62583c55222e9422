#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hypx/hypgeo.hpp"

using namespace hypx;

namespace {

std::vector<PhaseFunction> builtins() {
    return {builtin_family("saddle", {}), builtin_family("cubic-x", {1.5e-6}), builtin_family("mixed-quartic", {1.25e-6}),
            builtin_family("trig", {5e-6, 1.0})};
}

const Cap& cap_at(const CapGrid& g, Vec2 z) { return g[static_cast<size_t>(g.owner(z))]; }

}  // namespace

TEST_CASE("saddle frame is the identity") {
    const PhaseFunction phi = builtin_family("saddle", {});
    const FrameData f = frame(phi, {0.4, -0.9});
    CHECK(f.H == 1.0);
    CHECK(f.A == 0.0);
    CHECK(f.B == 0.0);
    CHECK(f.q == 1.0);
    CHECK(f.T.a11 == 1.0);
    CHECK(f.T.a12 == 0.0);
    CHECK(f.T.a21 == 0.0);
    CHECK(f.T.a22 == 1.0);
    CHECK(f.T.det() == 1.0);
}

TEST_CASE("mixed-quartic A at (1,1)") {
    const double c = 1e-6;
    const PhaseFunction phi = builtin_family("mixed-quartic", {c});
    // phi_xx = phi_yy = 2c at (1,1), phi_xy = 1 + 4c.
    const double xy = 1.0 + 4.0 * c, H = xy * xy - 4.0 * c * c;
    const double expected = 2.0 * c / (xy + std::sqrt(H));
    CHECK(A_of(phi, {1.0, 1.0}) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(B_of(phi, {1.0, 1.0}) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("frame invariants on builtins") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const auto& phi : builtins())
        for (int s = 0; s < 200; ++s) {
            const Vec2 z{u(rng), u(rng)};
            const FrameData f = frame(phi, z);
            CHECK(std::fabs(f.H - 1.0) <= 1e-4);
            CHECK(std::fabs(f.A) <= 1e-3);
            CHECK(std::fabs(f.B) <= 1e-3);
            CHECK(std::fabs(f.T.det() - (1.0 - f.A * f.B)) <= 1e-15);
            const IdentityResiduals r = identity_residuals(phi, z, z, z, z, z);
            CHECK(r.normal_form <= 1e-12);
            CHECK(r.jacobian <= 1e-12);
        }
}

TEST_CASE("nonpositive H is rejected") {
    // phi = xy + 0.6 x^2 + 0.6 y^2 has H = 1 - 1.44 < 0.
    const PhaseFunction phi = make_polynomial_phase({{1.0, 1, 1}, {0.6, 2, 0}, {0.6, 0, 2}}, 4, "elliptic");
    try {
        frame(phi, {0.0, 0.0});
        FAIL("expected nonpositive-H");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonpositiveH);
    }
}

TEST_CASE("t functions") {
    const PhaseFunction saddle = builtin_family("saddle", {});
    const TPair t = t_funcs(saddle, {0.1, 0.2}, {0.3, -0.4}, {-0.5, 0.9});
    CHECK(t.t1 == doctest::Approx(0.9 - (-0.4)));
    CHECK(t.t2 == doctest::Approx(-0.5 - 0.3));
    const TPair z = t_funcs(saddle, {0.1, 0.2}, {0.3, -0.4}, {0.3, -0.4});
    CHECK(z.t1 == 0.0);
    CHECK(z.t2 == 0.0);
    // phi = xy + 1e-6 x^3, z = z1 = 0, z2 = (0.5, 0.5): phi_x(z2) = 0.5 + 3e-6 * 0.25.
    const PhaseFunction cubic = builtin_family("cubic-x", {1e-6});
    const TPair c = t_funcs(cubic, {0.0, 0.0}, {0.0, 0.0}, {0.5, 0.5});
    CHECK(B_of(cubic, {0.0, 0.0}) == 0.0);
    CHECK(c.t1 == doctest::Approx(0.5 + 7.5e-7).epsilon(1e-15));
    CHECK(c.t2 == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("gamma forms") {
    const PhaseFunction saddle = builtin_family("saddle", {});
    const Vec2 z1{0.2, -0.3}, z2{-0.6, 0.7};
    CHECK(gamma2(saddle, {0.0, 0.0}, z1, z2).direct == doctest::Approx(2.0 * (z2.x - z1.x) * (z2.y - z1.y)));
    CHECK(gamma2(saddle, {0.0, 0.0}, z1, z1).direct == 0.0);
    const PhaseFunction mq = builtin_family("mixed-quartic", {1e-6});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int s = 0; s < 200; ++s) {
        const Vec2 z{u(rng), u(rng)}, a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)}, d{u(rng), u(rng)};
        const GammaValue g2 = gamma2(mq, z, a, b);
        CHECK(g2.residual() <= 1e-12 * std::max(1.0, std::fabs(g2.direct)));
        // gamma4 with repeated pairs is gamma2 exactly.
        CHECK(gamma4(mq, z, a, b, a, b).direct == g2.direct);
        CHECK(gamma4(mq, z, a, b, c, d).direct ==
              doctest::Approx(gamma4(mq, z, c, d, a, b).direct).epsilon(1e-14));
    }
}

TEST_CASE("identity residuals on random tuples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& phi : builtins())
        for (int s = 0; s < 250; ++s) {
            const Vec2 z{u(rng), u(rng)}, a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)}, d{u(rng), u(rng)};
            const IdentityResiduals r = identity_residuals(phi, z, a, b, c, d);
            CHECK_MESSAGE(r.max() <= 1e-12, phi.label());
            CHECK(r.antisymmetry <= 1e-15);
        }
}

TEST_CASE("strong separation thresholds") {
    const PhaseFunction phi = builtin_family("saddle", {});
    const CapGrid g32(32, 1.0), g256(256, 1.0);
    CHECK_FALSE(strongly_separated(phi, cap_at(g32, {0.0, 0.0}), cap_at(g32, {0.5, 0.5}), 1.0, 32));
    CHECK(strongly_separated(phi, cap_at(g256, {0.0, 0.0}), cap_at(g256, {0.5, 0.5}), 1.0, 256));
    CHECK_FALSE(strongly_separated(phi, cap_at(g256, {0.0, 0.0}), cap_at(g256, {0.5, 0.1}), 1.0, 256));
    // Symmetric.
    std::mt19937 rng(9);
    std::uniform_int_distribution<size_t> pick(0, g256.size() - 1);
    for (int s = 0; s < 200; ++s) {
        const Cap& a = g256[pick(rng)];
        const Cap& b = g256[pick(rng)];
        CHECK(strongly_separated(phi, a, b, 1.0, 256) == strongly_separated(phi, b, a, 1.0, 256));
    }
    const CapGrid other(128, 1.0);
    try {
        strongly_separated(phi, g256[0], other[0], 1.0, 256);
        FAIL("expected mismatched grid");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MismatchedGrid);
    }
}

TEST_CASE("pair classification") {
    const PhaseFunction phi = builtin_family("saddle", {});
    const CapGrid g(256, 1.0);
    const Cap& a = cap_at(g, {0.1, 0.1});
    const Cap& b = g[static_cast<size_t>(g.index(a.i + 1, a.j))];
    CHECK(classify_pair(phi, a, b, 1.0, 256).tag == PairTag::CaseA);
    const PairClass c = classify_pair(phi, cap_at(g, {0.0, -0.8}), cap_at(g, {0.01, 0.8}), 1.0, 256);
    CHECK(c.tag == PairTag::CaseC);
    CHECK(c.orientation == Orientation::YDominant);
    CHECK(std::fabs(c.t_values[1]) <= 100.0 / 256);
    const PairClass x = classify_pair(phi, cap_at(g, {-0.8, 0.0}), cap_at(g, {0.8, 0.01}), 1.0, 256);
    CHECK(x.tag == PairTag::CaseC);
    CHECK(x.orientation == Orientation::XDominant);
    try {
        classify_pair(phi, cap_at(g, {0.0, 0.0}), cap_at(g, {0.5, 0.5}), 1.0, 256);
        FAIL("expected separated-pair");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SeparatedPair);
    }
    CHECK(pair_relation(phi, cap_at(g, {0.0, 0.0}), cap_at(g, {0.5, 0.5}), 1.0, 256).tag == PairTag::Separated);
}

TEST_CASE("case B branch through an A override") {
    const PhaseFunction phi = builtin_family("saddle", {});
    const CapGrid g(256, 1.0);
    ClassifyOptions o;
    o.A_override = [](Vec2 z) { return 0.01 * z.y; };
    const PairClass c = classify_pair(phi, cap_at(g, {0.0, -0.8}), cap_at(g, {0.01, 0.8}), 1.0, 256, o);
    CHECK(c.tag == PairTag::CaseB);
    // Builtin phases at desk scale: |grad A| is far below the case B threshold.
    const PhaseFunction mq = builtin_family("mixed-quartic", {1.25e-6});
    CHECK(classify_pair(mq, cap_at(g, {0.0, -0.8}), cap_at(g, {0.01, 0.8}), 1.0, 256).tag == PairTag::CaseC);
}

TEST_CASE("level curves") {
    const PhaseFunction saddle = builtin_family("saddle", {});
    for (double y : {-1.0, -0.3, 0.6, 1.0}) {
        CHECK(level_curve_x(saddle, {0.0, 0.0}, 0.2, y) == doctest::Approx(0.2).epsilon(1e-14));
        CHECK(level_curve_x(saddle, {0.3, 0.4}, 0.0, y) == doctest::Approx(0.3).epsilon(1e-14));
        const Vec2 t = tangent_dir(saddle, {0.0, 0.0}, 0.2, y);
        CHECK(t.x == doctest::Approx(0.0));
        CHECK(t.y == 1.0);
    }
    const PhaseFunction cubic = builtin_family("cubic-x", {1e-6});
    const Vec2 z1{0.0, 0.0};
    const double x = level_curve_x(cubic, z1, 0.1, 0.5);
    CHECK(std::fabs(t_funcs(cubic, z1, z1, {x, 0.5}).t2 - 0.1) <= 1e-12);
    const double yk = level_curve_y(cubic, z1, 0.1, 0.5);
    CHECK(std::fabs(t_funcs(cubic, z1, z1, {0.5, yk}).t1 - 0.1) <= 1e-12);
}

TEST_CASE("level curve slopes are tiny") {
    const PhaseFunction phi = builtin_family("trig", {5e-6, 1.0});
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int s = 0; s < 100; ++s) {
        const Vec2 z1{u(rng), u(rng)};
        const Vec2 t = tangent_dir(phi, z1, u(rng) * 0.5, u(rng) * 2.0);
        CHECK(std::fabs(t.x) <= 1e-3);
    }
}

TEST_CASE("tangent directions inside R_I and R_II") {
    const int K = 256;
    const double bound = 3.0 * std::pow(K, -0.75);
    const PhaseFunction phi = builtin_family("mixed-quartic", {1.25e-6});
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int tested = 0;
    for (int s = 0; s < 2000 && tested < 300; ++s) {
        const Vec2 z1{0.5 * u(rng), 0.5 * u(rng)};
        const double v = 100.0 / K * u(rng), y = u(rng);
        double x;
        try {
            x = level_curve_x(phi, z1, v, y);
        } catch (const Error&) {
            continue;
        }
        const Vec2 z{x, y};
        if (std::fabs(x) > 1.0) continue;
        if (std::fabs(A_of(phi, z) - A_of(phi, z1)) > std::pow(K, -0.75)) continue;
        ++tested;
        const Vec2 t = tangent_dir(phi, z1, v, y);
        CHECK(std::hypot(t.x + A_of(phi, z1), t.y - 1.0) <= bound);
    }
    CHECK(tested >= 100);
}

TEST_CASE("sampled transversality for separated pairs") {
    const int K = 256;
    const PhaseFunction phi = builtin_family("mixed-quartic", {1.25e-6});
    const CapGrid g(K, 1.0);
    std::mt19937 rng(19);
    std::uniform_int_distribution<size_t> pick(0, g.size() - 1);
    int pairs = 0;
    while (pairs < 20) {
        const Cap& a = g[pick(rng)];
        const Cap& b = g[pick(rng)];
        if (!strongly_separated(phi, a, b, 1.0, K)) continue;
        ++pairs;
        CHECK(min_sampled_gamma(phi, a, b, 3) >= 4.0 / (double(K) * K));
    }
}
