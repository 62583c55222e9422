#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "hypx/kernels.hpp"

using namespace hypx;
namespace k = hypx::kernels;

namespace {

struct Data {
    std::vector<double> x, y, p, wr, wi;
};

Data make_data(size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Data d;
    for (size_t i = 0; i < n; ++i) {
        d.x.push_back(u(rng));
        d.y.push_back(u(rng));
        d.p.push_back(d.x.back() * d.y.back());
        d.wr.push_back(u(rng));
        d.wi.push_back(u(rng));
    }
    return d;
}

// Plain std::complex oracle.
cplx oracle_sum(const Data& d, double a, double b, double c) {
    cplx s = 0.0;
    for (size_t i = 0; i < d.x.size(); ++i)
        s += cplx(d.wr[i], d.wi[i]) * std::exp(cplx(0.0, -(a * d.x[i] + b * d.y[i] + c * d.p[i])));
    return s;
}

}  // namespace

TEST_CASE("scalar phase_sum matches the complex oracle") {
    const Data d = make_data(257, 1);
    for (double scale : {0.0, 1.0, 50.0, 4000.0}) {
        const double a = 0.7 * scale, b = -1.3 * scale, c = 0.4 * scale;
        const cplx got = k::scalar::phase_sum(d.x.data(), d.y.data(), d.p.data(), d.wr.data(), d.wi.data(), d.x.size(), a, b, c);
        const cplx want = oracle_sum(d, a, b, c);
        CHECK(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)) + 1e-11);
    }
}

TEST_CASE("zero frequency gives the weight sum") {
    const Data d = make_data(100, 2);
    cplx w = 0.0;
    for (size_t i = 0; i < d.x.size(); ++i) w += cplx(d.wr[i], d.wi[i]);
    const cplx got = k::phase_sum(d.x.data(), d.y.data(), d.p.data(), d.wr.data(), d.wi.data(), d.x.size(), 0, 0, 0);
    CHECK(std::abs(got - w) <= 1e-13);
}

TEST_CASE("empty input") {
    const cplx got = k::phase_sum(nullptr, nullptr, nullptr, nullptr, nullptr, 0, 1, 2, 3);
    CHECK(got == cplx(0.0));
}

TEST_CASE("force_isa pins the dispatch target") {
    const k::Isa before = k::active_isa();
    k::force_isa(k::Isa::Scalar);
    CHECK(k::active_isa() == k::Isa::Scalar);
    if (k::avx2_available()) {
        k::force_isa(k::Isa::Avx2);
        CHECK(k::active_isa() == k::Isa::Avx2);
    } else {
        CHECK_THROWS_AS(k::force_isa(k::Isa::Avx2), Error);
    }
    k::force_isa(before);
    CHECK(std::string(k::isa_name(k::Isa::Scalar)) == "scalar");
}

TEST_CASE("avx2 sincos4 accuracy") {
    if (!k::avx2_available()) {
        MESSAGE("AVX2 not available; skipped");
        return;
    }
    std::mt19937_64 rng(3);
    for (double range : {1.0, 10.0, 1e3, 1e5}) {
        std::uniform_real_distribution<double> u(-range, range);
        double worst = 0.0;
        for (int t = 0; t < 20000; ++t) {
            double x[4], s[4], c[4];
            for (double& v : x) v = u(rng);
            k::avx2::sincos4(x, s, c);
            for (int l = 0; l < 4; ++l)
                worst = std::max({worst, std::fabs(s[l] - std::sin(x[l])), std::fabs(c[l] - std::cos(x[l]))});
        }
        CHECK_MESSAGE(worst <= 1e-15 * std::max(1.0, range) + 2e-16, "range " << range << " err " << worst);
    }
    double x[4] = {0.0, -0.0, M_PI / 2, -M_PI}, s[4], c[4];
    k::avx2::sincos4(x, s, c);
    CHECK(s[0] == 0.0);
    CHECK(c[0] == 1.0);
    CHECK(s[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c[3] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("scalar and avx2 kernels agree") {
    if (!k::avx2_available()) {
        MESSAGE("AVX2 not available; skipped");
        return;
    }
    for (size_t n : {1u, 3u, 4u, 5u, 17u, 1000u, 4099u}) {
        const Data d = make_data(n, static_cast<unsigned>(n));
        for (double scale : {0.0, 1.0, 64.0, 4096.0}) {
            const double a = 0.9 * scale, b = 0.2 * scale, c = -1.1 * scale;
            const cplx s = k::scalar::phase_sum(d.x.data(), d.y.data(), d.p.data(), d.wr.data(), d.wi.data(), n, a, b, c);
            const cplx v = k::avx2::phase_sum(d.x.data(), d.y.data(), d.p.data(), d.wr.data(), d.wi.data(), n, a, b, c);
            double mass = 0.0;
            for (size_t i = 0; i < n; ++i) mass += std::hypot(d.wr[i], d.wi[i]);
            CHECK_MESSAGE(std::abs(s - v) <= 1e-13 * mass * std::max(1.0, scale / 64.0), "n=" << n << " scale=" << scale);

            std::vector<double> sr(n), si(n), vr(n), vi(n);
            k::scalar::phase_factor(d.p.data(), d.wr.data(), d.wi.data(), n, c, sr.data(), si.data());
            k::avx2::phase_factor(d.p.data(), d.wr.data(), d.wi.data(), n, c, vr.data(), vi.data());
            double worst = 0.0;
            for (size_t i = 0; i < n; ++i) worst = std::max({worst, std::fabs(sr[i] - vr[i]), std::fabs(si[i] - vi[i])});
            CHECK(worst <= 1e-14 * std::max(1.0, scale / 64.0));
        }
    }
}

TEST_CASE("dispatched kernel matches the pinned scalar path") {
    const Data d = make_data(333, 9);
    const k::Isa before = k::active_isa();
    k::force_isa(k::Isa::Scalar);
    const cplx s = k::phase_sum(d.x.data(), d.y.data(), d.p.data(), d.wr.data(), d.wi.data(), 333, 3, 4, 5);
    k::force_isa(before);
    const cplx v = k::phase_sum(d.x.data(), d.y.data(), d.p.data(), d.wr.data(), d.wi.data(), 333, 3, 4, 5);
    CHECK(std::abs(s - v) <= 1e-12);
}
