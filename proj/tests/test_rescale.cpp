#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "hypx/rescale.hpp"

using namespace hypx;

namespace {

const std::vector<std::pair<std::string, std::vector<double>>> kBuiltins{
    {"saddle", {}}, {"cubic-x", {1e-6}}, {"mixed-quartic", {1e-6}}, {"trig", {4e-6, 0.8}}};

FamilyParams params(int K) {
    FamilyParams p;
    p.K = K;
    return p;
}

// S xi assembled from D T^t (xi_12 + xi_3 grad phi(z0)) and the normalized third entry.
Vec3 oracle_xi_map(const RescaleData& rd, const Vec3& xi) {
    const Vec2 v{xi[0] + xi[2] * rd.grad0.x, xi[1] + xi[2] * rd.grad0.y};
    const Vec2 t = rd.T.transpose().apply(v);
    return {rd.w * t.x, rd.b * t.y, rd.q0 * rd.b * rd.w * xi[2]};
}

}  // namespace

TEST_CASE("saddle frames are trivial") {
    const PhaseFunction phi = builtin_family("saddle", {});
    const int K = 256;
    const double b = std::pow(K, -0.04);
    const RescaleData rd = make_rescale(phi, {0.0, 0.0}, b, K);
    CHECK(rd.q0 == 1.0);
    CHECK(rd.T.a11 == 1.0);
    CHECK(rd.T.a12 == 0.0);
    CHECK(rd.T.a21 == 0.0);
    CHECK(rd.T.a22 == 1.0);
    const PhaseFunction pt = tilde_phi(phi, rd), ps = phi_s(phi, rd);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int s = 0; s < 200; ++s) {
        const Vec2 z{u(rng), u(rng)};
        CHECK(ps.value(z) == doctest::Approx(z.x * z.y).epsilon(1e-13));
        const Vec2 zt{rd.w * z.x, b * z.y};
        CHECK(pt.value(zt) == doctest::Approx(phi.value(zt)).epsilon(1e-13));
    }
    const Vec3 xi{3.0, -5.0, 7.0};
    const Vec3 s = xi_map(rd, xi);
    CHECK(s[0] == doctest::Approx(rd.w * 3.0));
    CHECK(s[1] == doctest::Approx(b * -5.0));
    CHECK(s[2] == doctest::Approx(b * rd.w * 7.0));
    const Vec3 zero = xi_map(rd, {0.0, 0.0, 0.0});
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
    CHECK(zero[2] == 0.0);
}

TEST_CASE("translated saddle removes the affine part") {
    const PhaseFunction phi = builtin_family("saddle", {});
    const RescaleData rd = make_rescale(phi, {0.3, -0.2}, 0.2, 256);
    const PhaseFunction pt = tilde_phi(phi, rd);
    for (double x : {-0.01, 0.0, 0.004})
        for (double y : {-0.2, 0.05, 0.17}) CHECK(std::fabs(pt.value({x, y}) - x * y) <= 1e-15);
}

TEST_CASE("normal forms at generic centers") {
    const PhaseFunction phi = builtin_family("mixed-quartic", {1e-6});
    const RescaleData rd = make_rescale(phi, {0.5, 0.5}, 0.2, 256);
    // Frame identity t T D^2 phi T = q0 [[0,1],[1,0]].
    const Mat2 D{phi.deriv(2, 0, rd.z0), phi.deriv(1, 1, rd.z0), phi.deriv(1, 1, rd.z0), phi.deriv(0, 2, rd.z0)};
    const Mat2 M = rd.T.transpose() * D * rd.T;
    CHECK(std::fabs(M.a11) <= 1e-12);
    CHECK(std::fabs(M.a22) <= 1e-12);
    CHECK(std::fabs(M.a12 - rd.q0) <= 1e-12);
    CHECK(std::fabs(M.a21 - rd.q0) <= 1e-12);
    CHECK(normal_form_residual(tilde_phi(phi, rd)).max_residual <= 1e-12);
    CHECK(normal_form_residual(phi_s(phi, rd)).max_residual <= 1e-12);
}

TEST_CASE("xi map against an independent assembly") {
    const PhaseFunction phi = builtin_family("trig", {4e-6, 0.8});
    const RescaleData rd = make_rescale(phi, {-0.4, 0.35}, 0.15, 128);
    for (const Vec3& xi : {Vec3{1.0, 1.0, 1.0}, Vec3{-20.0, 3.0, 11.0}}) {
        const Vec3 got = xi_map(rd, xi), want = oracle_xi_map(rd, xi);
        for (int k = 0; k < 3; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-14));
    }
    // Linearity.
    const Vec3 a{1.0, 2.0, 3.0}, b{-4.0, 0.5, 2.0};
    const Vec3 sa = xi_map(rd, a), sb = xi_map(rd, b), sab = xi_map(rd, {a[0] + 2 * b[0], a[1] + 2 * b[1], a[2] + 2 * b[2]});
    for (int k = 0; k < 3; ++k) CHECK(sab[k] == doctest::Approx(sa[k] + 2 * sb[k]).epsilon(1e-13));
}

TEST_CASE("rescaled phases over random strips") {
    for (const auto& [name, prm] : kBuiltins) {
        const PhaseFunction phi = builtin_family(name, prm);
        for (int K : {128, 256}) {
            const CapGrid caps(K, 1.0);
            const StripFamily fam = build_family(phi, caps, params(K));
            const std::vector<int> ids = rescalable_strips(phi, fam, 50);
            REQUIRE(!ids.empty());
            for (int id : ids) {
                const RescaleData rd = rescale_from_strip(phi, fam.members[static_cast<size_t>(id)], K, 0.04);
                CHECK(rd.b >= std::pow(K, -0.75) - 1e-15);
                CHECK(rd.b <= std::pow(K, -0.04) + 1e-15);
                const PhaseFunction ps = phi_s(phi, rd);
                CHECK_MESSAGE(normal_form_residual(tilde_phi(phi, rd)).max_residual <= 1e-12, name);
                CHECK_MESSAGE(normal_form_residual(ps).max_residual <= 1e-12, name);
                // Coarse derivative grid; the default 1/128 step costs minutes over 400 phases.
                CHECK_MESSAGE(validate_hyp(ps, 0.1).pass, name << " K=" << K << " strip " << id);
            }
        }
    }
}

TEST_CASE("crucial observation on A-strips") {
    const CapGrid caps(256, 1.0);
    const CrucialReport s = crucial_observation(builtin_family("saddle", {}), build_family(builtin_family("saddle", {}), caps, params(256)));
    CHECK(s.samples > 0);
    CHECK(s.max_value == 0.0);
    for (const auto& [name, prm] : kBuiltins) {
        const PhaseFunction phi = builtin_family(name, prm);
        const CrucialReport r = crucial_observation(phi, build_family(phi, caps, params(256)));
        CHECK(std::isfinite(r.C));
        CHECK(r.C >= 0.0);
    }
}

TEST_CASE("scaling identity") {
    const int K = 256;
    SUBCASE("saddle at xi = 0 reduces to areas") {
        const PhaseFunction phi = builtin_family("saddle", {});
        const RescaleData rd = make_rescale(phi, {0.0, 0.0}, std::pow(K, -0.04), K);
        const IdentityReport r = scaling_identity_check(phi, constant_amplitude(), rd, {{0.0, 0.0, 0.0}}, 1e-10);
        const double area = 4.0 * rd.w * rd.b;
        CHECK(r.samples[0].lhs == doctest::Approx(area).epsilon(1e-10));
        CHECK(r.samples[0].rhs == doctest::Approx(area).epsilon(1e-10));
        CHECK(r.jacobian == doctest::Approx(rd.w * rd.b).epsilon(1e-14));
    }
    SUBCASE("cubic-x, random frequencies") {
        const PhaseFunction phi = builtin_family("cubic-x", {1e-6});
        const RescaleData rd = make_rescale(phi, {0.0, 0.0}, std::pow(K, -0.04), K);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-64.0 / std::sqrt(3.0), 64.0 / std::sqrt(3.0));
        std::vector<Vec3> xs;
        for (int t = 0; t < 20; ++t) xs.push_back({u(rng), u(rng), u(rng)});
        const IdentityReport r = scaling_identity_check(phi, smooth_random_amplitude(3), rd, xs, 1e-8);
        CHECK(r.samples.size() == 20);
        CHECK(r.max_rel_err <= 1e-6);
    }
    SUBCASE("amplitude supported outside L") {
        const PhaseFunction phi = builtin_family("saddle", {});
        const RescaleData rd = make_rescale(phi, {0.0, 0.0}, 0.1, K);
        Amplitude f;
        f.density = [](Vec2 z) { return z.y > 0.5 ? cplx(1.0) : cplx(0.0); };
        const IdentityReport r = scaling_identity_check(phi, f, rd, {{1.0, 2.0, 3.0}}, 1e-8);
        CHECK(r.samples[0].lhs == 0.0);
        CHECK(r.samples[0].rhs == 0.0);
        CHECK(r.max_rel_err == 0.0);
    }
}

TEST_CASE("norm relations of the rescaled amplitude") {
    const PhaseFunction phi = builtin_family("mixed-quartic", {1e-6});
    const RescaleData rd = make_rescale(phi, {0.2, -0.3}, 0.1, 256);
    const NormReport r = norm_relations(phi, smooth_random_amplitude(11), rd);
    CHECK(r.l2_rel_err <= 1e-10);
    CHECK(r.l2_bound_ok);
    CHECK(r.sup_ok);
    CHECK(r.fLs_sup <= r.f_sup * (1.0 + 1e-12));

    const NormReport one = norm_relations(phi, constant_amplitude(), rd);
    CHECK(one.fLs_sup <= 1.0 + 1e-15);
    CHECK(one.fL_l2 == doctest::Approx(std::sqrt(4.0 * rd.w * rd.b * std::fabs(rd.detT()))).epsilon(1e-10));
}

TEST_CASE("rescale errors") {
    const PhaseFunction elliptic = make_polynomial_phase({{1.0, 2, 0}, {1.0, 0, 2}}, 8, "x^2+y^2");
    try {
        make_rescale(elliptic, {0.0, 0.0}, 0.1, 256);
        FAIL("expected nonpositive H");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonpositiveH);
    }
}
