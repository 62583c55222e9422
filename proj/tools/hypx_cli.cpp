#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypx/config.hpp"
#include "hypx/extension.hpp"
#include "hypx/hypgeo.hpp"
#include "hypx/kernels.hpp"
#include "hypx/parallel.hpp"
#include "hypx/phase.hpp"
#include "hypx/rects.hpp"
#include "hypx/rescale.hpp"
#include "hypx/sublevel.hpp"
#include "hypx/wavepacket.hpp"

using json = nlohmann::ordered_json;
using namespace hypx;

namespace {

constexpr const char* kSchema = "hypx/1";

// 12 significant digits, so summaries are stable across runs and platforms.
double fx(double v) {
    if (!std::isfinite(v)) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string csv_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json vec2(Vec2 z) { return json::array({fx(z.x), fx(z.y)}); }
json vec3(const Vec3& v) { return json::array({fx(v[0]), fx(v[1]), fx(v[2])}); }

json box_json(const Box& b) { return json::array({fx(b.xlo), fx(b.xhi), fx(b.ylo), fx(b.yhi)}); }

json cap_json(const CapGrid& caps, int idx) {
    const Cap& c = caps[static_cast<size_t>(idx)];
    return {{"index", idx}, {"i", c.i}, {"j", c.j}, {"center", vec2(c.center)}, {"side", fx(c.side)},
            {"clip", box_json(c.clip)}};
}

json strip_json(const Strip& s, int idx) {
    return {{"index", idx},
            {"family", family_name(s.family)},
            {"k", s.k},
            {"j", s.j},
            {"i", s.i},
            {"center", vec2(s.center)},
            {"dir", vec2(s.dir)},
            {"half_width", fx(s.half_width)},
            {"half_length", fx(s.half_length)},
            {"level", fx(s.level)}};
}

json decomposition_json(const IntervalDecomposition& d) {
    json iv = json::array();
    for (const auto& x : d.intervals) iv.push_back({{"a", fx(x.a)}, {"b", fx(x.b)}, {"band", x.band}});
    return {{"base", json::array({fx(d.base_a), fx(d.base_b)})},
            {"lambda", fx(d.lambda)},
            {"r", d.r},
            {"C_r", fx(d.C_r)},
            {"count", d.intervals.size()},
            {"cardinality_bound", fx(d.cardinality_bound)},
            {"within_bound", d.within_bound},
            {"intervals", iv}};
}

struct Context {
    ExperimentConfig cfg;
    std::filesystem::path out;
    std::string command;
};

json header(const Context& ctx) {
    json cfg = json::object();
    for (const auto& [k, v] : ctx.cfg.as_map()) cfg[k] = v;
    return {{"schema", kSchema}, {"subcommand", ctx.command}, {"config", cfg}};
}

void write_json(const Context& ctx, const std::string& name, const json& j) {
    std::ofstream os(ctx.out / name);
    if (!os) throw std::runtime_error("cannot write " + (ctx.out / name).string());
    os << j.dump(2) << "\n";
}

class CsvWriter {
public:
    CsvWriter(const Context& ctx, const std::string& name, const std::vector<std::string>& columns)
        : os_(ctx.out / name) {
        if (!os_) throw std::runtime_error("cannot write " + (ctx.out / name).string());
        for (size_t k = 0; k < columns.size(); ++k) os_ << (k ? "," : "") << columns[k];
        os_ << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t k = 0; k < cells.size(); ++k) os_ << (k ? "," : "") << cells[k];
        os_ << "\n";
    }

private:
    std::ofstream os_;
};

std::shared_ptr<const CapGrid> cap_grid(const ExperimentConfig& c) {
    return std::make_shared<const CapGrid>(c.K, c.mu);
}

// validate-phase: Hyp^M membership report.
int cmd_validate_phase(const Context& ctx) {
    const PhaseFunction phi = make_phase(ctx.cfg);
    const ValidationReport r = validate_hyp(phi);
    json j = header(ctx);
    j["phase"] = phi.label();
    j["normal_residuals"] = json::array();
    for (double v : r.normal_residuals) j["normal_residuals"].push_back(fx(v));
    j["max_normal_residual"] = fx(r.max_normal_residual);
    j["max_high_deriv"] = fx(r.max_high_deriv);
    j["worst_order"] = json::array({r.worst_a, r.worst_b});
    j["worst_z"] = vec2(r.worst_z);
    j["max_phi_xx"] = fx(r.max_phi_xx);
    j["max_phi_yy"] = fx(r.max_phi_yy);
    j["max_phi_xy_minus_1"] = fx(r.max_phi_xy_minus_1);
    j["normal_ok"] = r.normal_ok;
    j["high_ok"] = r.high_ok;
    j["derived_ok"] = r.derived_ok;
    j["pass"] = r.pass;
    write_json(ctx, "validate_phase.json", j);
    std::cout << "validate-phase " << phi.label() << ": " << (r.pass ? "pass" : "FAIL") << "\n";
    return r.pass ? 0 : 1;
}

// geometry-report: frame fields on a grid (CSV) and identity residuals on random tuples (JSON).
// Columns: x,y,H,A,B,q,T11,T12,T21,T22,detT,normal_form_res,jacobian_res,a_relation_res
int cmd_geometry_report(const Context& ctx) {
    const PhaseFunction phi = make_phase(ctx.cfg);
    const int n = ctx.cfg.grid_points;
    CsvWriter csv(ctx, "geometry.csv",
                  {"x", "y", "H", "A", "B", "q", "T11", "T12", "T21", "T22", "detT", "normal_form_res", "jacobian_res",
                   "a_relation_res"});
    double grid_max = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Vec2 z{-1.0 + 2.0 * a / (n - 1), -1.0 + 2.0 * b / (n - 1)};
            const FrameData f = frame(phi, z);
            const IdentityResiduals r = identity_residuals(phi, z, z, z, z, z);
            grid_max = std::max({grid_max, r.normal_form, r.jacobian, r.a_relation});
            csv.row({csv_num(z.x), csv_num(z.y), csv_num(f.H), csv_num(f.A), csv_num(f.B), csv_num(f.q),
                     csv_num(f.T.a11), csv_num(f.T.a12), csv_num(f.T.a21), csv_num(f.T.a22), csv_num(f.T.det()),
                     csv_num(r.normal_form), csv_num(r.jacobian), csv_num(r.a_relation)});
        }
    std::mt19937_64 rng(ctx.cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto pt = [&] { return Vec2{u(rng), u(rng)}; };
    IdentityResiduals worst;
    const int tuples = 1000;
    for (int t = 0; t < tuples; ++t) {
        const Vec2 z = pt(), z1 = pt(), z2 = pt(), z1p = pt(), z2p = pt();
        const IdentityResiduals r = identity_residuals(phi, z, z1, z2, z1p, z2p);
        worst.factorization = std::max(worst.factorization, r.factorization);
        worst.four_point = std::max(worst.four_point, r.four_point);
        worst.four_point_symmetry = std::max(worst.four_point_symmetry, r.four_point_symmetry);
        worst.normal_form = std::max(worst.normal_form, r.normal_form);
        worst.jacobian = std::max(worst.jacobian, r.jacobian);
        worst.tdiff = std::max(worst.tdiff, r.tdiff);
        worst.a_relation = std::max(worst.a_relation, r.a_relation);
        worst.antisymmetry = std::max(worst.antisymmetry, r.antisymmetry);
    }
    const bool pass = worst.max() <= 1e-12 && grid_max <= 1e-12;
    json j = header(ctx);
    j["phase"] = phi.label();
    j["grid_points"] = n;
    j["grid_max_residual"] = fx(grid_max);
    j["tuples"] = tuples;
    j["residuals"] = {{"factorization", fx(worst.factorization)},
                      {"four_point", fx(worst.four_point)},
                      {"four_point_symmetry", fx(worst.four_point_symmetry)},
                      {"normal_form", fx(worst.normal_form)},
                      {"jacobian", fx(worst.jacobian)},
                      {"tdiff", fx(worst.tdiff)},
                      {"a_relation", fx(worst.a_relation)},
                      {"antisymmetry", fx(worst.antisymmetry)}};
    j["tolerance"] = 1e-12;
    j["pass"] = pass;
    write_json(ctx, "geometry.json", j);
    std::cout << "geometry-report " << phi.label() << ": max residual " << worst.max() << " "
              << (pass ? "pass" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

// sublevel: V_lambda cover, thickened cover when |g'| <= 1, and dyadic bands.
int cmd_sublevel(const Context& ctx) {
    const auto& c = ctx.cfg;
    const ScalarFunction g = named_function(c.sublevel_function);
    const IntervalDecomposition d =
        sublevel_decompose(g, c.sublevel_a, c.sublevel_b, c.sublevel_r, c.sublevel_lambda);
    const ContainmentCheck chk = check_containment(g, d, 8.0);
    json j = header(ctx);
    j["function"] = g.label;
    j["sublevel"] = decomposition_json(d);
    j["containment"] = {{"samples", chk.samples},
                        {"inner_violations", chk.inner_violations},
                        {"outer_violations", chk.outer_violations},
                        {"disjoint", chk.disjoint}};
    bool pass = chk.ok() && d.within_bound;
    const double thick_C = 2.0;
    if (estimate_Cr(g, c.sublevel_a, c.sublevel_b, 1) <= 1.0 &&
        thick_C * c.sublevel_lambda <= c.sublevel_b - c.sublevel_a) {
        const IntervalDecomposition t =
            thickened_decompose(g, c.sublevel_a, c.sublevel_b, c.sublevel_r, c.sublevel_lambda, thick_C);
        const ContainmentCheck tc = check_containment(g, t, 8.0 + thick_C);
        double min_len = INFINITY;
        for (const auto& iv : t.intervals) min_len = std::min(min_len, iv.length());
        const bool ok = tc.ok() && t.within_bound && min_len >= thick_C * c.sublevel_lambda * (1.0 - 1e-12);
        j["thickened"] = decomposition_json(t);
        j["thickened"]["C"] = thick_C;
        j["thickened"]["min_length"] = fx(min_len);
        j["thickened"]["containment_ok"] = tc.ok();
        j["thickened"]["pass"] = ok;
        pass = pass && ok;
    } else {
        j["thickened"] = nullptr;
    }
    json bands = json::array();
    for (const auto& b : level_decompose(g, c.sublevel_a, c.sublevel_b, c.sublevel_r, c.sublevel_lambda)) {
        bands.push_back({{"lambda", fx(b.lambda)},
                         {"count", b.intervals.size()},
                         {"cardinality_bound", fx(b.cardinality_bound)},
                         {"within_bound", b.within_bound}});
        pass = pass && b.within_bound;
    }
    j["bands"] = bands;
    j["pass"] = pass;
    write_json(ctx, "sublevel.json", j);
    std::cout << "sublevel " << g.label << ": " << d.intervals.size() << " intervals, "
              << (pass ? "pass" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

// cover: strip family records, the cover L_0 of a non-separated family, and its report.
int cmd_cover(const Context& ctx) {
    const auto& c = ctx.cfg;
    const PhaseFunction phi = make_phase(c);
    const auto caps = cap_grid(c);
    const StripFamily fam = build_family(phi, *caps, make_family_params(c));
    std::vector<int> F = c.cover_F;
    for (int id : F)
        if (id < 0 || static_cast<size_t>(id) >= caps->size())
            throw Error(ErrorCode::InvalidParam, "cover_F index out of range");
    if (F.empty()) {
        std::mt19937 rng(c.seed);
        const int per = caps->per_side();
        std::uniform_int_distribution<int> pick(per / 4, 3 * per / 4 - 1);
        const int tau1 = caps->index(pick(rng), pick(rng));
        F = nonseparated_family(phi, *caps, tau1, c.cover_size, c.seed, true);
    }
    const CoverReport r = geometric_cover(phi, *caps, fam, F);
    json j = header(ctx);
    j["phase"] = phi.label();
    j["s"] = fx(fam.s);
    json members = json::array();
    for (size_t k = 0; k < fam.members.size(); ++k) members.push_back(strip_json(fam.members[k], static_cast<int>(k)));
    j["family"] = members;
    json fj = json::array();
    for (int id : F) fj.push_back(cap_json(*caps, id));
    j["F"] = fj;
    json l0 = json::array();
    for (int m : r.members) l0.push_back(strip_json(fam.members[static_cast<size_t>(m)], m));
    j["L0"] = l0;
    j["report"] = {{"L0_size", r.members.size()},
                   {"all_covered", r.all_covered},
                   {"uncovered", r.uncovered},
                   {"case_a", r.case_a},
                   {"case_b", r.case_b},
                   {"case_c", r.case_c},
                   {"intervals_used", r.intervals_used},
                   {"tiles_used", r.tiles_used},
                   {"band_count", r.band_count},
                   {"fallback_additions", r.fallback_additions},
                   {"bound", fx(r.bound)},
                   {"within_bound", r.within_bound},
                   {"cardinality_bound", fx(r.cor22_bound)},
                   {"bands_within_cardinality_bound", r.bands_within_cor22}};
    const bool pass = r.all_covered && r.within_bound && r.bands_within_cor22;
    j["pass"] = pass;
    write_json(ctx, "cover.json", j);
    std::cout << "cover " << phi.label() << " K=" << c.K << ": |F|=" << F.size() << " |L0|=" << r.members.size()
              << " " << (pass ? "pass" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

std::vector<Vec3> random_xi(std::mt19937_64& rng, int count, double R) {
    std::uniform_real_distribution<double> u(-R, R);
    std::vector<Vec3> out;
    for (int k = 0; k < count; ++k) out.push_back({u(rng), u(rng), u(rng)});
    return out;
}

// rescale-check: the scaling identity, phi^s membership and norm relations per strip.
int cmd_rescale_check(const Context& ctx) {
    const auto& c = ctx.cfg;
    const PhaseFunction phi = make_phase(c);
    const auto caps = cap_grid(c);
    const StripFamily fam = build_family(phi, *caps, make_family_params(c));
    const Amplitude f = make_amplitude(c, nullptr);
    std::mt19937_64 rng(c.seed);
    json strips = json::array();
    bool pass = true;
    double worst = 0.0;
    const std::vector<int> picked = rescalable_strips(phi, fam, c.rescale_strips);
    if (picked.empty()) throw Error(ErrorCode::InvalidParam, "no A-strip admits a frame box inside Sigma");
    for (int idx : picked) {
        const RescaleData rd = rescale_from_strip(phi, fam.members[static_cast<size_t>(idx)], c.K, c.eps_prime);
        const auto xi = random_xi(rng, c.rescale_xi, 64.0);
        const IdentityReport id = scaling_identity_check(phi, f, rd, xi, c.quad_tol);
        const ValidationReport v = validate_hyp(phi_s(phi, rd), 1.0 / 32.0);
        const NormReport nr = norm_relations(phi, f, rd);
        const bool ok = id.max_rel_err <= 1e-6 && v.pass && nr.l2_rel_err <= 1e-10 && nr.l2_bound_ok && nr.sup_ok;
        pass = pass && ok;
        worst = std::max(worst, id.max_rel_err);
        json samples = json::array();
        for (const auto& s : id.samples)
            samples.push_back({{"xi", vec3(s.xi)}, {"s_xi", vec3(s.s_xi)}, {"lhs", fx(s.lhs)}, {"rhs", fx(s.rhs)},
                               {"rel_err", fx(s.rel_err)}});
        strips.push_back({{"strip", idx},
                          {"z0", vec2(rd.z0)},
                          {"b", fx(rd.b)},
                          {"w", fx(rd.w)},
                          {"q0", fx(rd.q0)},
                          {"detT", fx(rd.detT())},
                          {"jacobian", fx(id.jacobian)},
                          {"max_rel_err", fx(id.max_rel_err)},
                          {"phi_s_valid", v.pass},
                          {"phi_s_max_high_deriv", fx(v.max_high_deriv)},
                          {"l2_rel_err", fx(nr.l2_rel_err)},
                          {"l2_bound_ok", nr.l2_bound_ok},
                          {"sup_ok", nr.sup_ok},
                          {"pass", ok},
                          {"samples", samples}});
    }
    json j = header(ctx);
    j["phase"] = phi.label();
    j["max_rel_err"] = fx(worst);
    j["strips"] = strips;
    j["pass"] = pass;
    write_json(ctx, "rescale.json", j);
    std::cout << "rescale-check " << phi.label() << ": max rel err " << worst << " " << (pass ? "pass" : "FAIL")
              << "\n";
    return pass ? 0 : 1;
}

std::string label_str(char ch) { return std::string(1, ch); }

// extension-run: per R, |E f| and Br on a grid of B_R.
// extension_norms.csv columns: R,h,points,norm_full,norm_broad,broad_fraction,max_ratio
// extension_field_R<R>.csv columns: xi1,xi2,xi3,abs_Ef,broad,label
int cmd_extension_run(const Context& ctx) {
    const auto& c = ctx.cfg;
    const PhaseFunction phi = make_phase(c);
    const auto caps = cap_grid(c);
    const StripFamily fam = build_family(phi, *caps, make_family_params(c));
    const Amplitude f = make_amplitude(c, caps);
    const double alpha = c.alpha_value();
    FieldOptions fo;
    fo.order = c.field_order;
    fo.panel_scale = c.panel_scale;
    CsvWriter norms(ctx, "extension_norms.csv",
                    {"R", "h", "points", "norm_full", "norm_broad", "broad_fraction", "max_ratio"});
    json rows = json::array();
    std::vector<double> logR, logN;
    for (double R : c.R_list) {
        const double h = 2.0 * R / (c.grid_points - 1);
        const FreqGrid grid = make_freq_grid(R, h);
        const BroadField bf = broad_field(phi, f, fam, alpha, grid, fo);
        std::vector<double> abs_full(grid.size());
        for (size_t k = 0; k < grid.size(); ++k) abs_full[k] = std::abs(bf.base.values[k]);
        const std::vector<double> br = bf.br(alpha);
        const std::vector<char> labels = bf.labels(alpha);
        size_t broad = 0;
        for (char ch : labels) broad += ch == 'A';
        const double nf = lp_norm(abs_full, h, c.p), nb = lp_norm(br, h, c.p);
        const double frac = static_cast<double>(broad) / static_cast<double>(grid.size());
        norms.row({csv_num(R), csv_num(h), std::to_string(grid.size()), csv_num(nf), csv_num(nb), csv_num(frac),
                   csv_num(bf.max_ratio())});
        rows.push_back({{"R", fx(R)},
                        {"h", fx(h)},
                        {"points", grid.size()},
                        {"norm_full", fx(nf)},
                        {"norm_broad", fx(nb)},
                        {"broad_fraction", fx(frac)},
                        {"delta_count", bf.delta_count},
                        {"atom_count", bf.atom_count}});
        if (nb > 0.0) {
            logR.push_back(std::log(R));
            logN.push_back(std::log(nb));
        }
        CsvWriter field(ctx, "extension_field_R" + csv_num(R) + ".csv",
                        {"xi1", "xi2", "xi3", "abs_Ef", "broad", "label"});
        for (size_t k = 0; k < grid.size(); ++k) {
            const Vec3 xi = grid.point(k);
            field.row({csv_num(xi[0]), csv_num(xi[1]), csv_num(xi[2]), csv_num(abs_full[k]),
                       labels[k] == 'A' ? "1" : "0", label_str(labels[k])});
        }
    }
    json j = header(ctx);
    j["phase"] = phi.label();
    j["alpha"] = fx(alpha);
    j["p"] = fx(c.p);
    j["rows"] = rows;
    const double slope = logR.size() >= 2 ? fit_slope(logR, logN) : NAN;
    j["slope"] = std::isfinite(slope) ? json(fx(slope)) : json(nullptr);
    write_json(ctx, "extension.json", j);
    std::cout << "extension-run " << phi.label() << ": " << rows.size() << " norm rows\n";
    return 0;
}

// wavepacket-check: reconstruction and the (a)-(e) proxies at R, delta.
int cmd_wavepacket_check(const Context& ctx) {
    const auto& c = ctx.cfg;
    const PhaseFunction phi = make_phase(c);
    const Amplitude f = make_amplitude(c, nullptr);
    WavePacketOptions wo;
    wo.samples = c.wp_samples;
    wo.modes = c.wp_modes;
    const WavePacketDecomp d = decompose(phi, f, c.R, c.delta, wo);
    const ReconstructionReport rec = reconstruction_check(phi, f, d, c.wp_grid_step);
    const PacketReport pr = packet_checks(phi, d, c.wp_packets, c.seed);
    const LatticeCoverage lc = tube_lattice_coverage(phi, d, c.wp_grid_step);
    const bool rec_ok = rec.rel_l2 <= 1e-3 && rec.max_over_f_l2 <= 1e-3;
    const bool support_ok = pr.support_violations == 0;
    const bool pass = rec_ok && support_ok && pr.decay_ok && (pr.orthogonality_ok || pr.orthogonality_vacuous) &&
                      pr.energy_ok && lc.ok;
    json j = header(ctx);
    j["phase"] = phi.label();
    j["thetas"] = d.thetas.size();
    j["packets"] = d.packets.size();
    j["lattice"] = fx(d.lattice);
    j["tube_radius"] = fx(d.radius);
    j["chi_radius"] = fx(d.chi_radius);
    j["reconstruction"] = {{"grid_h", fx(rec.grid_h)},
                           {"points", rec.points},
                           {"rel_l2", fx(rec.rel_l2)},
                           {"max_abs", fx(rec.max_abs)},
                           {"max_over_f_l2", fx(rec.max_over_f_l2)},
                           {"amplitude_rel_l2", fx(rec.amplitude_rel_l2)},
                           {"pass", rec_ok}};
    j["a_support"] = {{"violations", pr.support_violations}, {"pass", support_ok}};
    j["b_decay"] = {{"ratio", fx(pr.decay_ratio)},
                    {"ratio_median", fx(pr.decay_ratio_median)},
                    {"packets", pr.decay_packets},
                    {"threshold", 1e-4},
                    {"pass", pr.decay_ok}};
    j["d_orthogonality"] = {{"value", fx(pr.orthogonality)},
                            {"pairs", pr.orthogonality_pairs},
                            {"vacuous", pr.orthogonality_vacuous},
                            {"threshold", 1e-6},
                            {"pass", pr.orthogonality_ok}};
    j["e_energy"] = {{"C", fx(pr.energy_C)}, {"threshold", 4.0}, {"pass", pr.energy_ok}};
    j["lattice_coverage"] = {{"max_distance", fx(lc.max_distance)}, {"bound", fx(lc.bound)}, {"pass", lc.ok}};
    j["pass"] = pass;
    write_json(ctx, "wavepacket.json", j);
    std::cout << "wavepacket-check R=" << c.R << ": reconstruction " << rec.rel_l2 << ", "
              << (pass ? "pass" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

// broad-experiment: growth sweep of ||Br E f||_p over R_list.
// growth.csv columns: R,h,points,norm_broad,norm_full,broad_fraction
int cmd_broad_experiment(const Context& ctx) {
    const auto& c = ctx.cfg;
    const PhaseFunction phi = make_phase(c);
    const auto caps = cap_grid(c);
    const StripFamily fam = build_family(phi, *caps, make_family_params(c));
    const Amplitude f = make_amplitude(c, caps);
    FieldOptions fo;
    fo.order = c.field_order;
    fo.panel_scale = c.panel_scale;
    const GrowthTable t = growth_sweep(phi, f, fam, c.p, c.R_list, c.alpha_value(), c.grid_points, fo);
    CsvWriter csv(ctx, "growth.csv", {"R", "h", "points", "norm_broad", "norm_full", "broad_fraction"});
    json rows = json::array();
    for (const auto& r : t.rows) {
        csv.row({csv_num(r.R), csv_num(r.h), std::to_string(r.points), csv_num(r.norm), csv_num(r.full_norm),
                 csv_num(r.broad_fraction)});
        rows.push_back({{"R", fx(r.R)},
                        {"h", fx(r.h)},
                        {"points", r.points},
                        {"norm_broad", fx(r.norm)},
                        {"norm_full", fx(r.full_norm)},
                        {"broad_fraction", fx(r.broad_fraction)}});
    }
    json j = header(ctx);
    j["phase"] = phi.label();
    j["alpha"] = fx(t.alpha);
    j["p"] = fx(t.p);
    j["rows"] = rows;
    j["slope"] = t.slope_finite ? json(fx(t.slope)) : json(nullptr);
    j["slope_finite"] = t.slope_finite;
    write_json(ctx, "growth.json", j);
    std::cout << "broad-experiment " << phi.label() << ": slope "
              << (t.slope_finite ? csv_num(t.slope) : std::string("n/a")) << "\n";
    return t.slope_finite ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypx: numerical experiments for Fourier extension from hyperbolic surfaces"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    long long seed = -1;
    int nthreads = -1;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory (overrides HYPX_OUT_DIR and the config)");
    app.add_option("--seed", seed, "random seed (overrides the config)");
    app.add_option("--threads", nthreads, "worker threads, 0 for hardware concurrency");
    app.add_option("--set", sets, "extra key=value overrides, applied after the config file");

    using Handler = int (*)(const Context&);
    const std::vector<std::pair<std::string, Handler>> commands{
        {"validate-phase", cmd_validate_phase},     {"geometry-report", cmd_geometry_report},
        {"sublevel", cmd_sublevel},                 {"cover", cmd_cover},
        {"rescale-check", cmd_rescale_check},       {"extension-run", cmd_extension_run},
        {"wavepacket-check", cmd_wavepacket_check}, {"broad-experiment", cmd_broad_experiment}};
    for (const auto& [name, fn] : commands) app.add_subcommand(name, "")->fallthrough();
    CLI11_PARSE(app, argc, argv);

    Context ctx;
    Handler handler = nullptr;
    for (const auto& [name, fn] : commands)
        if (app.got_subcommand(name)) {
            ctx.command = name;
            handler = fn;
        }
    try {
        KeyValueFile kv = config_path.empty() ? KeyValueFile{} : KeyValueFile::load(config_path);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw Error(ErrorCode::ConfigParse, "--set expects key=value, got " + s);
            const KeyValueFile one = KeyValueFile::parse(s, "--set");
            for (const auto& [k, v] : one.values()) kv.set(k, v);
        }
        if (seed >= 0) kv.set("seed", std::to_string(seed));
        if (nthreads >= 0) kv.set("threads", std::to_string(nthreads));
        ctx.cfg = ExperimentConfig::from(kv);
        if (!out_dir.empty()) ctx.cfg.out = out_dir;
        else if (const char* env = std::getenv("HYPX_OUT_DIR"); env && *env) ctx.cfg.out = env;
        ctx.out = ctx.cfg.out;
        std::filesystem::create_directories(ctx.out);
        set_threads(ctx.cfg.threads);
        const auto t0 = std::chrono::steady_clock::now();
        const int rc = handler(ctx);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << ctx.command << " finished in " << secs << " s (kernel " << kernels::isa_name(kernels::active_isa())
                  << ", out " << ctx.out.string() << ")\n";
        return rc;
    } catch (const Error& e) {
        std::cerr << "hypx " << ctx.command << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "hypx " << ctx.command << ": " << e.what() << "\n";
        return 2;
    }
}
