// Acceptance runner: one PASS/FAIL line per criterion, with runtime against its budget.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypx/config.hpp"
#include "hypx/extension.hpp"
#include "hypx/hypgeo.hpp"
#include "hypx/rects.hpp"
#include "hypx/rescale.hpp"
#include "hypx/sublevel.hpp"
#include "hypx/wavepacket.hpp"

using namespace hypx;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Params = std::vector<double>;
const std::vector<std::pair<std::string, Params>> kBuiltins{
    {"saddle", {}}, {"cubic-x", {1e-6}}, {"mixed-quartic", {1e-6}}, {"trig", {4e-6, 0.8}}};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

FamilyParams family_params(int K) {
    FamilyParams p;
    p.K = K;
    return p;
}

Vec2 random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng)};
}

Outcome identities() {
    std::mt19937_64 rng(1);
    double worst = 0.0;
    size_t tuples = 0;
    for (const auto& [name, prm] : kBuiltins) {
        const PhaseFunction phi = builtin_family(name, prm);
        for (int t = 0; t < 1000; ++t) {
            const Vec2 z = random_point(rng), z1 = random_point(rng), z2 = random_point(rng),
                       z1p = random_point(rng), z2p = random_point(rng);
            worst = std::max(worst, identity_residuals(phi, z, z1, z2, z1p, z2p).max());
            ++tuples;
        }
    }
    return {worst <= 1e-12, "max relative residual " + fmt(worst) + " over " + std::to_string(tuples) + " tuples"};
}

Outcome transversality() {
    const int K = 256;
    const CapGrid caps(K, 1.0);
    const double floor = 4.0 / (double(K) * K);
    std::mt19937 rng(2);
    std::uniform_int_distribution<size_t> pick(0, caps.size() - 1);
    size_t violations = 0, pairs = 0;
    double smallest = 1e300;
    for (const auto& [name, prm] : kBuiltins) {
        const PhaseFunction phi = builtin_family(name, prm);
        for (int n = 0; n < 200;) {
            const Cap& a = caps[pick(rng)];
            const Cap& b = caps[pick(rng)];
            if (!strongly_separated(phi, a, b, 1.0, K)) continue;
            ++n;
            ++pairs;
            const double g = min_sampled_gamma(phi, a, b, 3);
            smallest = std::min(smallest, g);
            violations += g < floor;
        }
    }
    return {violations == 0, std::to_string(pairs) + " pairs, min |Gamma| " + fmt(smallest) + " vs " + fmt(floor) +
                                 ", " + std::to_string(violations) + " violations"};
}

Outcome sublevel_suite() {
    size_t runs = 0, failures = 0;
    const double C = 2.0;
    for (const auto& name : named_functions()) {
        const ScalarFunction g = named_function(name);
        const double sup = sup_norm(g, -1.0, 1.0);
        // The thickened cover needs |g'| <= 1; dividing by the slope keeps the sublevel sets.
        const double L = std::max(1.0, estimate_Cr(g, -1.0, 1.0, 1) * (1.0 + 1e-6));
        ScalarFunction gs;
        gs.g = [g, L](double t) { return g(t) / L; };
        gs.label = name + "/L";
        for (int k = 0; k < 10; ++k) {
            const double lambda = sup * std::pow(0.5, k + 1);
            for (int r : {1, 2}) {
                ++runs;
                const IntervalDecomposition d = sublevel_decompose(g, -1.0, 1.0, r, lambda);
                const IntervalDecomposition t = thickened_decompose(gs, -1.0, 1.0, r, lambda / L, C);
                bool ok = check_containment(g, d, 8.0).ok() && d.within_bound;
                ok = ok && check_containment(gs, t, 8.0 + C).ok() && t.within_bound;
                for (const auto& iv : t.intervals) ok = ok && iv.length() >= C * lambda / L - 1e-12;
                failures += !ok;
            }
        }
    }
    return {failures == 0, std::to_string(runs) + " decompositions (plain and thickened), " + std::to_string(failures) +
                               " failures"};
}

// sin, cos and exponential instances with closed-form derivatives.
ScalarFunction wave(double c0, double w, double phase) {
    ScalarFunction g;
    g.g = [=](double t) { return c0 * std::sin(w * t + phase); };
    g.deriv = [=](int m, double t) { return c0 * std::pow(w, m) * std::sin(w * t + phase + m * M_PI / 2); };
    g.label = "wave";
    return g;
}

ScalarFunction expo(double c0, double w) {
    ScalarFunction g;
    g.g = [=](double t) { return c0 * std::exp(w * t); };
    g.deriv = [=](int m, double t) { return c0 * std::pow(w, m) * std::exp(w * t); };
    g.label = "exp";
    return g;
}

Outcome deriv_interp() {
    struct Case {
        ScalarFunction g;
        double c0, w, eps, b;
        int k;
        double growth;  // sup of g on [0, b] over c0
    };
    std::vector<Case> cases;
    for (auto [c0, eps, k] : std::vector<std::tuple<double, double, int>>{
             {0.01, 0.5, 2}, {0.01, 0.5, 3}, {1e-3, 0.34, 3}, {1e-4, 0.25, 4}, {0.05, 0.5, 4}}) {
        const double b = std::pow(c0, eps);
        cases.push_back({wave(c0, 1.0 / b, 0.3), c0, 1.0 / b, eps, b, k, 1.0});
    }
    for (auto [c0, eps, k] : std::vector<std::tuple<double, double, int>>{
             {0.01, 0.5, 2}, {1e-3, 0.34, 3}, {1e-4, 0.25, 4}, {0.02, 0.5, 3}, {0.1, 0.5, 5}}) {
        const double b = 0.5 * std::pow(c0, eps);
        cases.push_back({expo(c0, 1.0 / b), c0, 1.0 / b, eps, b, k, std::exp(1.0)});
    }
    size_t passed = 0;
    double min_margin = 1e300;
    for (const Case& cs : cases) {
        std::vector<double> c;
        for (int m = 0; m <= cs.k; ++m) c.push_back(cs.c0 * cs.growth * std::pow(cs.w, m));
        if (!(c[0] < 1.0)) continue;
        const DerivInterpReport r = deriv_interp_check(cs.g, 0.0, cs.b, cs.k, cs.eps, c);
        passed += r.pass;
        for (int m = 0; m <= cs.k; ++m) min_margin = std::min(min_margin, r.margin[m] / r.bound[m]);
    }
    return {passed == cases.size(), std::to_string(passed) + "/" + std::to_string(cases.size()) +
                                        " instances, min relative margin " + fmt(min_margin)};
}

Outcome rescaling() {
    const int K = 256;
    const CapGrid caps(K, 1.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-64.0, 64.0);
    double worst_id = 0.0, worst_l2 = 0.0;
    size_t strips = 0, hyp_fail = 0, norm_fail = 0;
    for (const auto& [name, prm] : std::vector<std::pair<std::string, Params>>{
             {"cubic-x", {1e-6}}, {"mixed-quartic", {1e-6}}, {"trig", {4e-6, 0.8}}}) {
        const PhaseFunction phi = builtin_family(name, prm);
        const StripFamily fam = build_family(phi, caps, family_params(K));
        for (int id : rescalable_strips(phi, fam, 5)) {
            ++strips;
            const RescaleData rd = rescale_from_strip(phi, fam.members[static_cast<size_t>(id)], K, 0.04);
            const Amplitude f = smooth_random_amplitude(static_cast<unsigned>(strips));
            std::vector<Vec3> xs;
            for (int t = 0; t < 20; ++t) xs.push_back({u(rng), u(rng), u(rng)});
            worst_id = std::max(worst_id, scaling_identity_check(phi, f, rd, xs, 1e-8).max_rel_err);
            hyp_fail += !validate_hyp(phi_s(phi, rd)).pass;
            const NormReport nr = norm_relations(phi, f, rd);
            worst_l2 = std::max(worst_l2, nr.l2_rel_err);
            norm_fail += !(nr.l2_rel_err <= 1e-10 && nr.l2_bound_ok && nr.sup_ok);
        }
    }
    const bool pass = strips == 15 && worst_id <= 1e-6 && hyp_fail == 0 && norm_fail == 0;
    return {pass, std::to_string(strips) + " strips, identity max rel " + fmt(worst_id) + ", phi^s Hyp failures " +
                      std::to_string(hyp_fail) + ", L2 rel " + fmt(worst_l2)};
}

Outcome cover() {
    size_t families = 0, uncovered = 0, over = 0;
    int case_c = 0;
    for (const auto& [name, prm] : std::vector<std::pair<std::string, Params>>{{"saddle", {}}, {"mixed-quartic", {1e-6}}}) {
        const PhaseFunction phi = builtin_family(name, prm);
        for (int K : {128, 256}) {
            const CapGrid caps(K, 1.0);
            const StripFamily fam = build_family(phi, caps, family_params(K));
            const int per = caps.per_side();
            std::mt19937 rng(static_cast<unsigned>(K));
            std::uniform_int_distribution<int> pick(per / 4, 3 * per / 4 - 1);
            for (unsigned seed = 1; seed <= 6; ++seed) {
                // Alternate central anchors with anchors near y = -0.8, where Case C pairs occur.
                const int i = pick(rng), j = seed % 3 == 0 ? per / 10 : pick(rng);
                const std::vector<int> F = nonseparated_family(phi, caps, caps.index(i, j), 12, seed, seed % 2 == 1);
                const CoverReport r = geometric_cover(phi, caps, fam, F);
                ++families;
                uncovered += !r.all_covered;
                over += !(r.within_bound && r.bands_within_cor22);
                case_c += r.case_c;
            }
        }
    }
    return {uncovered == 0 && over == 0, std::to_string(families) + " families, " + std::to_string(uncovered) +
                                             " not covered, " + std::to_string(over) + " over bound, " +
                                             std::to_string(case_c) + " Case C pairs"};
}

Outcome strips() {
    const int K = 256;
    const CapGrid caps(K, 1.0);
    bool pass = true;
    int n1 = 0, nbar = 0;
    double ratio = 0.0;
    std::string per;
    for (const auto& [name, prm] : kBuiltins) {
        const PhaseFunction phi = builtin_family(name, prm);
        const StripFamily fam = build_family(phi, caps, family_params(K));
        const StripCheck c = check_strips(phi, fam);
        pass = pass && c.proximity_ok && c.length_ok;
        ratio = std::max(ratio, c.max_level_ratio / c.C1);
        const double step = 1.0 / 128.0;
        n1 = std::max({n1, overlap_stats(fam, {Family::AStrip}, step).max_multiplicity,
                       overlap_stats(fam, {Family::BStrip}, step).max_multiplicity});
        const int nb = closure_overlap(fam, build_closure(fam, caps), step).max_multiplicity;
        nbar = std::max(nbar, nb);
        per += " " + name + "=" + std::to_string(nb);
    }
    pass = pass && n1 <= 8 && nbar <= 64;
    return {pass, "max |A - A_k| / (C1 s) " + fmt(ratio) + ", N1 " + std::to_string(n1) + ", Nbar " +
                      std::to_string(nbar) + " (" + per.substr(1) + ")"};
}

double simpson(const std::function<double(double)>& g, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = g(a) + g(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * g(a + k * h);
    return s * h / 3.0;
}

Outcome extension_checks() {
    const PhaseFunction saddle = builtin_family("saddle", {});
    double area_err = 0.0;
    for (const auto& [name, prm] : kBuiltins)
        area_err = std::max(area_err, std::abs(extend(builtin_family(name, prm), constant_amplitude(), {0, 0, 0}, 1e-10) - 4.0));

    const PhaseFunction phi = builtin_family("trig", {4e-6, 0.8});
    const Amplitude f = smooth_random_amplitude(3);
    const double a = 2.5, b = -4.0, tol = 1e-8;
    Amplitude g;
    g.density = [&](Vec2 z) { return f(z) * std::exp(cplx(0.0, -(a * z.x + b * z.y))); };
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-16.0, 16.0);
    double mod_err = 0.0;
    for (int t = 0; t < 10; ++t) {
        const Vec3 xi{u(rng), u(rng), u(rng)};
        const cplx rhs = extend(phi, f, {xi[0] + a, xi[1] + b, xi[2]}, tol);
        mod_err = std::max(mod_err, std::abs(extend(phi, g, xi, tol) - rhs) / std::max(1.0, std::abs(rhs)));
    }

    const double oracle = simpson([](double y) { return y == 0.0 ? 2.0 : 2.0 * std::sin(8.0 * y) / (8.0 * y); }, -1.0, 1.0, 20000);
    const double oracle_err = std::abs(extend(saddle, constant_amplitude(), {0, 0, 8}, 1e-10) - oracle);

    const double coarse = lp_norm(extension_field(saddle, constant_amplitude(), make_freq_grid(16.0, 1.0)), 3.25);
    const double fine = lp_norm(extension_field(saddle, constant_amplitude(), make_freq_grid(16.0, 0.5)), 3.25);
    const double half = std::fabs(coarse - fine) / fine;

    const bool pass = area_err <= 1e-10 && mod_err <= tol && oracle_err <= 1e-8 && half <= 0.02;
    return {pass, "area " + fmt(area_err) + ", modulation " + fmt(mod_err) + ", oracle " + fmt(oracle_err) +
                      ", half-step " + fmt(100.0 * half) + "%"};
}

Outcome broadness() {
    const int K = 128;
    const PhaseFunction phi = builtin_family("saddle", {});
    auto caps = std::make_shared<const CapGrid>(K, 1.0);
    const StripFamily fam = build_family(phi, *caps, family_params(K));
    const FreqGrid grid = make_freq_grid(32.0, 4.0);
    const double alpha = std::pow(K, -0.05);

    const BroadField bf = broad_field(phi, attach_grid(constant_amplitude(), caps), fam, alpha, grid);
    const std::vector<double> lo = bf.br(0.5 * alpha), mid = bf.br(alpha), hi = bf.br(2.0 * alpha);
    bool bounded = true, monotone = true;
    size_t broad = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const double e = std::abs(bf.base.values[i]);
        bounded = bounded && mid[i] <= e && (mid[i] == 0.0 || mid[i] == e);
        monotone = monotone && lo[i] <= mid[i] && mid[i] <= hi[i];
        broad += mid[i] > 0.0;
    }
    size_t labelled = 0;
    for (char l : bf.labels(alpha)) labelled += l == 'A' || l == 'B' || l == 'C';

    const BroadField one = broad_field(phi, restrict(constant_amplitude(), caps, std::vector<int>{caps->index(60, 190)}),
                                       fam, alpha, grid);
    double single = 0.0;
    for (double v : one.br(alpha)) single = std::max(single, v);

    const bool pass = bounded && monotone && labelled == grid.size() && single == 0.0;
    return {pass, std::to_string(grid.size()) + " points, " + std::to_string(broad) + " broad, " +
                      std::to_string(bf.delta_count) + " Delta, single-cap max Br " + fmt(single)};
}

Outcome wave_packets() {
    const PhaseFunction phi = builtin_family("saddle", {});
    const Amplitude f = constant_amplitude();
    const WavePacketDecomp d = decompose(phi, f, 64.0, 0.1);
    const ReconstructionReport rec = reconstruction_check(phi, f, d, 4.0);
    const PacketReport pr = packet_checks(phi, d, 8, 1);
    const bool rec_ok = rec.rel_l2 <= 1e-3;
    const bool pass = rec_ok && pr.support_violations == 0 && pr.decay_ratio <= 1e-4 &&
                      (pr.orthogonality <= 1e-6 || pr.orthogonality_vacuous) && pr.energy_C <= 4.0;
    return {pass, std::to_string(d.packets.size()) + " packets, reconstruction " + fmt(rec.rel_l2) + ", (a) " +
                      std::to_string(pr.support_violations) + ", (b) " + fmt(pr.decay_ratio) + " vs 1e-4, (d) " +
                      fmt(pr.orthogonality) + " vs 1e-6, (e) C " + fmt(pr.energy_C)};
}

Outcome growth(const fs::path& out) {
    const int K = 128;
    const PhaseFunction phi = builtin_family("saddle", {});
    auto caps = std::make_shared<const CapGrid>(K, 1.0);
    const StripFamily fam = build_family(phi, *caps, family_params(K));
    const GrowthTable t = growth_sweep(phi, attach_grid(constant_amplitude(), caps), fam, 3.25, {16, 32, 64, 128},
                                       std::pow(K, -0.05), 9);
    fs::create_directories(out);
    std::ofstream csv(out / "growth_saddle.csv");
    csv << "R,h,norm,full_norm,broad_fraction,points\n";
    for (const auto& r : t.rows)
        csv << r.R << "," << r.h << "," << r.norm << "," << r.full_norm << "," << r.broad_fraction << "," << r.points << "\n";
    return {t.slope_finite, "slope " + fmt(t.slope) + ", table in " + (out / "growth_saddle.csv").string()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> known_red, only;
    std::string out;
    app.add_option("--known-red", known_red, "criteria reported but excluded from the exit status");
    app.add_option("--only", only, "run only these criteria");
    app.add_option("--out", out, "directory for persisted tables");
    CLI11_PARSE(app, argc, argv);
    if (out.empty()) out = std::getenv("HYPX_OUT_DIR") ? std::getenv("HYPX_OUT_DIR") : "acceptance_out";

    struct Criterion {
        int id;
        const char* name;
        double budget;
        bool gated;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "algebraic identities", 5, true, identities},
        {2, "transversality", 30, true, transversality},
        {3, "sublevel suite", 10, true, sublevel_suite},
        {4, "derivative interpolation", 5, true, deriv_interp},
        {5, "rescaling identity", 300, true, rescaling},
        {6, "geometric cover", 120, true, cover},
        {7, "strip families", 60, true, strips},
        {8, "extension operator", 120, true, extension_checks},
        {9, "broadness", 120, true, broadness},
        {10, "wave packets", 300, true, wave_packets},
        {11, "growth sweep", 0, false, [&] { return growth(out); }},
    };
    const std::set<int> red(known_red.begin(), known_red.end()), sel(only.begin(), only.end());
    int failed = 0;
    for (const Criterion& c : all) {
        if (!sel.empty() && !sel.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = !c.gated || secs <= c.budget;
        const bool ok = o.pass && in_time;
        std::string tag = c.gated ? (ok ? "PASS" : "FAIL") : (o.pass ? "INFO" : "INFO-FAIL");
        std::ostringstream line;
        line << "criterion " << (c.id < 10 ? " " : "") << c.id << " " << tag << "  " << c.name << ": " << o.detail;
        if (c.gated)
            line << "  [" << fmt(secs) << " s / " << c.budget << " s" << (in_time ? "" : ", over budget") << "]";
        else
            line << "  [" << fmt(secs) << " s, not gated]";
        if (c.gated && !ok && red.count(c.id)) line << "  (known red, excluded from exit status)";
        std::cout << line.str() << std::endl;
        if (c.gated && !ok && !red.count(c.id)) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
