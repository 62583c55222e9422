#include "hypx/rects.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "hypx/hypgeo.hpp"

namespace hypx {

const char* family_name(Family f) {
    switch (f) {
        case Family::AStrip: return "A";
        case Family::BStrip: return "B";
        case Family::BigCap: return "bigcap";
    }
    return "?";
}

bool Strip::contains(Vec2 z, double tol) const {
    const Vec2 d = z - center;
    return std::fabs(dot(d, dir)) <= half_length + tol && std::fabs(dot(d, perp())) <= half_width + tol;
}

bool Strip::contains_cap(const Cap& c, double tol) const {
    const Box& b = c.clip;
    return contains({b.xlo, b.ylo}, tol) && contains({b.xhi, b.ylo}, tol) &&
           contains({b.xlo, b.yhi}, tol) && contains({b.xhi, b.yhi}, tol);
}

std::array<Vec2, 4> Strip::corners() const {
    const Vec2 u = half_length * dir, w = half_width * perp();
    return {center - u - w, center + u - w, center + u + w, center - u + w};
}

size_t StripFamily::count(Family f) const {
    return static_cast<size_t>(
        std::count_if(members.begin(), members.end(), [f](const Strip& s) { return s.family == f; }));
}

namespace {

bool is_power_of_two(int k) { return k > 0 && (k & (k - 1)) == 0; }

Vec2 unit(Vec2 v) { return (1.0 / norm(v)) * v; }

// Parameter range of {origin + w * d : w in [lo,hi]} inside Sigma; empty when lo > hi.
std::pair<double, double> clip_line(Vec2 origin, Vec2 d, double lo, double hi) {
    auto clip1 = [&](double o, double dd) {
        if (std::fabs(dd) < 1e-300) {
            if (o < -1.0 || o > 1.0) lo = 1.0, hi = 0.0;
            return;
        }
        double a = (-1.0 - o) / dd, b = (1.0 - o) / dd;
        if (a > b) std::swap(a, b);
        lo = std::max(lo, a);
        hi = std::min(hi, b);
    };
    clip1(origin.x, d.x);
    clip1(origin.y, d.y);
    return {lo, hi};
}

struct LevelGrid {
    std::vector<double> levels;
    double lo, hi;
};

LevelGrid level_grid(double lo, double hi, double spacing) {
    LevelGrid g{{}, lo, hi};
    const int n = static_cast<int>(std::ceil((hi - lo) / spacing - 1e-12));
    // Left endpoints of the n intervals covering [lo, hi]; a constant A still gets one level.
    for (int k = 0; k < std::max(n, 1); ++k) g.levels.push_back(lo + k * spacing);
    return g;
}

// One orientation of the strip construction (A-family when use_A).
void build_strips(const PhaseFunction& phi, const FamilyParams& p, double s, bool use_A,
                  const std::vector<double>& levels, std::vector<Strip>& out) {
    const double Cs = p.C_prime * s;
    const double thr = p.C * s;
    const double piece_max = 0.5 * std::pow(static_cast<double>(p.K), -p.eps_prime);
    const double du = p.march_fraction * s;
    const double dw = 0.25 * s;
    const Vec2 corners[4] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    for (size_t k = 0; k < levels.size(); ++k) {
        const double lev = levels[k];
        const Vec2 dir = use_A ? unit({-lev, 1.0}) : unit({1.0, -lev});
        const Vec2 perp{dir.y, -dir.x};
        double umin = 1e300, umax = -1e300, wmin = 1e300, wmax = -1e300;
        for (Vec2 c : corners) {
            umin = std::min(umin, dot(c, dir));
            umax = std::max(umax, dot(c, dir));
            wmin = std::min(wmin, dot(c, perp));
            wmax = std::max(wmax, dot(c, perp));
        }
        const int jlo = static_cast<int>(std::floor(wmin / Cs)) - 1;
        const int jhi = static_cast<int>(std::ceil(wmax / Cs)) + 1;
        for (int j = jlo; j <= jhi; ++j) {
            const double w_lo = (j - 1) * Cs, w_hi = (j + 1) * Cs;
            if (!(w_hi > wmin && w_lo < wmax)) continue;
            // March along dir; a cross-section qualifies when it meets R_II^k.
            const long nu = static_cast<long>(std::ceil((umax - umin) / du));
            std::vector<std::pair<double, double>> comps;
            bool open = false;
            double ua = 0.0, ub = 0.0;
            for (long iu = 0; iu <= nu; ++iu) {
                const double u = std::min(umin + iu * du, umax);
                const Vec2 base = u * dir;
                auto [a, b] = clip_line(base, perp, w_lo, w_hi);
                bool ok = false;
                if (a <= b) {
                    const int nw = std::max(2, static_cast<int>(std::ceil((b - a) / dw)));
                    for (int iw = 0; iw <= nw && !ok; ++iw) {
                        const Vec2 z = base + (a + (b - a) * iw / nw) * perp;
                        const double v = use_A ? A_of(phi, z) : B_of(phi, z);
                        ok = std::fabs(v - lev) < thr;
                    }
                }
                if (ok) {
                    if (!open) ua = u;
                    ub = u;
                    open = true;
                } else if (open) {
                    comps.push_back({ua, ub});
                    open = false;
                }
            }
            if (open) comps.push_back({ua, ub});
            int piece_index = 0;
            for (auto [ca, cb] : comps) {
                // S^1 padding, then chop, then re-pad each piece.
                const double lo = ca - s, hi = cb + s;
                const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / piece_max - 1e-12)));
                const double len = (hi - lo) / n;
                for (int i = 0; i < n; ++i) {
                    Strip st;
                    st.family = use_A ? Family::AStrip : Family::BStrip;
                    st.k = static_cast<int>(k);
                    st.j = j;
                    st.i = piece_index++;
                    st.dir = dir;
                    st.level = lev;
                    st.core_lo = lo + i * len;
                    st.core_hi = lo + (i + 1) * len;
                    st.half_length = 0.5 * len + s;
                    st.half_width = Cs;
                    st.center = (0.5 * (st.core_lo + st.core_hi)) * dir + (j * Cs) * perp;
                    out.push_back(st);
                }
            }
        }
    }
}

std::vector<int> caps_inside(const Strip& st, const CapGrid& caps) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (Vec2 c : st.corners()) {
        xlo = std::min(xlo, c.x);
        xhi = std::max(xhi, c.x);
        ylo = std::min(ylo, c.y);
        yhi = std::max(yhi, c.y);
    }
    const int K = caps.K(), n = caps.per_side();
    const int ilo = std::max(0, static_cast<int>(std::floor((xlo + 1.0) * K)) - 1);
    const int ihi = std::min(n - 1, static_cast<int>(std::ceil((xhi + 1.0) * K)) + 1);
    const int jlo = std::max(0, static_cast<int>(std::floor((ylo + 1.0) * K)) - 1);
    const int jhi = std::min(n - 1, static_cast<int>(std::ceil((yhi + 1.0) * K)) + 1);
    std::vector<int> ids;
    for (int i = ilo; i <= ihi; ++i)
        for (int j = jlo; j <= jhi; ++j) {
            const int id = caps.index(i, j);
            if (st.contains_cap(caps[id])) ids.push_back(id);
        }
    return ids;
}

}  // namespace

StripFamily build_family(const PhaseFunction& phi, const CapGrid& caps, const FamilyParams& p) {
    if (!is_power_of_two(p.K) || p.K < 16) throw Error(ErrorCode::InvalidParam, "K must be a power of two >= 16");
    if (caps.K() != p.K || caps.mu() != p.mu) throw Error(ErrorCode::MismatchedGrid, "cap grid does not match (K, mu)");
    if (!(p.eps_prime > 0.0 && p.eps_prime <= 0.1)) throw Error(ErrorCode::InvalidParam, "eps' must lie in (0, 0.1]");
    if (!(p.C > 34.0)) throw Error(ErrorCode::InvalidParam, "C must exceed 34");
    if (!(p.C_prime > 0.0) || !(p.big_cap_constant > 0.0) || !(p.march_fraction > 0.0))
        throw Error(ErrorCode::InvalidParam, "C', big-cap constant and march step must be positive");

    StripFamily fam;
    fam.params = p;
    fam.s = std::sqrt(p.mu) * std::pow(static_cast<double>(p.K), -0.75);
    // Ranges of A and B on Sigma and the gradient bound.
    fam.A_min = fam.B_min = 1e300;
    fam.A_max = fam.B_max = -1e300;
    const int ng = 129;
    for (int a = 0; a < ng; ++a)
        for (int b = 0; b < ng; ++b) {
            const Vec2 z{-1.0 + 2.0 * a / (ng - 1), -1.0 + 2.0 * b / (ng - 1)};
            const double A = A_of(phi, z), B = B_of(phi, z);
            fam.A_min = std::min(fam.A_min, A);
            fam.A_max = std::max(fam.A_max, A);
            fam.B_min = std::min(fam.B_min, B);
            fam.B_max = std::max(fam.B_max, B);
            fam.grad_sup = std::max({fam.grad_sup, norm(grad_A(phi, z)), norm(grad_B(phi, z))});
        }
    fam.A_levels = level_grid(fam.A_min, fam.A_max, p.C * fam.s).levels;
    fam.B_levels = level_grid(fam.B_min, fam.B_max, p.C * fam.s).levels;

    std::vector<Strip> all;
    build_strips(phi, p, fam.s, true, fam.A_levels, all);
    build_strips(phi, p, fam.s, false, fam.B_levels, all);

    // Big caps: tiles of the 1/K grid with side >= big_cap_constant mu^{1/2} K^{-1/4}.
    const double want = p.big_cap_constant * std::sqrt(p.mu) * std::pow(static_cast<double>(p.K), -0.25);
    const int cells = std::min(2 * p.K, static_cast<int>(std::ceil(want * p.K - 1e-9)));
    const double side = static_cast<double>(cells) / p.K;
    const int nt = static_cast<int>(std::ceil(2.0 / side - 1e-12));
    for (int a = 0; a < nt; ++a)
        for (int b = 0; b < nt; ++b) {
            const double xlo = -1.0 + a * side, xhi = std::min(1.0, xlo + side);
            const double ylo = -1.0 + b * side, yhi = std::min(1.0, ylo + side);
            Strip st;
            st.family = Family::BigCap;
            st.i = a;
            st.j = b;
            st.center = {0.5 * (xlo + xhi), 0.5 * (ylo + yhi)};
            st.dir = {0.0, 1.0};
            st.half_length = 0.5 * (yhi - ylo);
            st.half_width = 0.5 * (xhi - xlo);
            st.core_lo = ylo;
            st.core_hi = yhi;
            all.push_back(st);
        }

    for (auto& st : all) {
        auto ids = caps_inside(st, caps);
        if (p.drop_empty && ids.empty()) continue;
        fam.members.push_back(st);
        fam.caps_in.push_back(std::move(ids));
    }
    return fam;
}

StripCheck check_strips(const PhaseFunction& phi, const StripFamily& fam, int samples_u, int samples_w) {
    StripCheck c;
    c.C1 = fam.C1();
    c.min_length = 1e300;
    c.max_length = 0.0;
    bool any = false;
    for (const auto& st : fam.members) {
        if (st.family == Family::BigCap) continue;
        any = true;
        c.min_length = std::min(c.min_length, st.length());
        c.max_length = std::max(c.max_length, st.length());
        const Vec2 w = st.perp();
        for (int a = 0; a < samples_u; ++a)
            for (int b = 0; b < samples_w; ++b) {
                const double u = -st.half_length + 2.0 * st.half_length * a / (samples_u - 1);
                const double v = -st.half_width + 2.0 * st.half_width * b / (samples_w - 1);
                const Vec2 z = st.center + u * st.dir + v * w;
                if (std::fabs(z.x) > 1.0 || std::fabs(z.y) > 1.0) continue;
                const double val = st.family == Family::AStrip ? A_of(phi, z) : B_of(phi, z);
                c.max_level_ratio = std::max(c.max_level_ratio, std::fabs(val - st.level) / fam.s);
            }
    }
    const double Kd = static_cast<double>(fam.params.K);
    c.proximity_ok = c.max_level_ratio <= c.C1;
    c.length_ok = !any || (c.min_length >= fam.s * (1.0 - 1e-12) &&
                           c.max_length <= std::pow(Kd, -fam.params.eps_prime) * (1.0 + 1e-12));
    if (!any) c.min_length = 0.0;
    return c;
}

bool CoverSet::inside_strip() const { return true; }

bool CoverSet::contains(const StripFamily& fam, Vec2 z, double tol) const {
    for (int m : members)
        if (!fam.members[m].contains(z, tol)) return false;
    return true;
}

Closure build_closure(const StripFamily& fam, const CapGrid& caps, const std::vector<int>& restrict_to) {
    const size_t nc = caps.size();
    std::vector<std::vector<int>> a_of(nc), b_of(nc), t_of(nc);
    for (size_t m = 0; m < fam.members.size(); ++m) {
        const Family f = fam.members[m].family;
        for (int c : fam.caps_in[m]) {
            auto& dst = f == Family::AStrip ? a_of[c] : (f == Family::BStrip ? b_of[c] : t_of[c]);
            dst.push_back(static_cast<int>(m));
        }
    }
    std::vector<int> pool = restrict_to;
    if (pool.empty()) {
        pool.resize(nc);
        for (size_t c = 0; c < nc; ++c) pool[c] = static_cast<int>(c);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    std::map<std::array<int, 3>, std::vector<int>> by_key;
    std::map<std::tuple<std::vector<int>, std::vector<int>, std::vector<int>>, int> atom_of_sig;
    Closure cl;
    std::vector<int> cap_atom(nc, -1);
    for (int c : pool) {
        auto sig = std::make_tuple(a_of[c], b_of[c], t_of[c]);
        auto it = atom_of_sig.find(sig);
        if (it == atom_of_sig.end()) {
            it = atom_of_sig.emplace(sig, static_cast<int>(cl.atoms.size())).first;
            cl.atoms.emplace_back();
        }
        cl.atoms[it->second].push_back(c);
        cap_atom[c] = it->second;
    }
    // Every key is generated from the atom signatures, then expanded to caps.
    std::map<std::array<int, 3>, std::vector<int>> key_atoms;
    for (const auto& [sig, atom] : atom_of_sig) {
        auto as = std::get<0>(sig), bs = std::get<1>(sig), ts = std::get<2>(sig);
        as.push_back(-1);
        bs.push_back(-1);
        ts.push_back(-1);
        for (int a : as)
            for (int b : bs)
                for (int t : ts) {
                    if (a < 0 && b < 0 && t < 0) continue;
                    key_atoms[{a, b, t}].push_back(atom);
                }
    }
    std::map<std::vector<int>, int> seen;
    for (auto& [key, atoms] : key_atoms) {
        std::sort(atoms.begin(), atoms.end());
        std::vector<int> cs;
        for (int at : atoms) cs.insert(cs.end(), cl.atoms[at].begin(), cl.atoms[at].end());
        std::sort(cs.begin(), cs.end());
        if (cs.empty()) continue;
        if (seen.count(cs)) continue;
        const int id = static_cast<int>(cl.sets.size());
        seen.emplace(cs, id);
        CoverSet set;
        for (int m : key)
            if (m >= 0) set.members.push_back(m);
        set.caps = std::move(cs);
        cl.sets.push_back(std::move(set));
        cl.set_atoms.push_back(atoms);
        cl.key_to_set.emplace(key, id);
    }
    return cl;
}

namespace {

template <class Visit>
void sample_sigma(double step, Visit visit) {
    const int n = std::max(1, static_cast<int>(std::round(2.0 / step)));
    const double h = 2.0 / n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) visit(Vec2{-1.0 + (a + 0.5) * h, -1.0 + (b + 0.5) * h});
}

}  // namespace

OverlapStats overlap_stats(const StripFamily& fam, const std::vector<Family>& kinds, double grid_step) {
    OverlapStats st;
    st.grid_step = grid_step;
    sample_sigma(grid_step, [&](Vec2 z) {
        ++st.points;
        int count = 0;
        for (const auto& m : fam.members)
            if (std::find(kinds.begin(), kinds.end(), m.family) != kinds.end() && m.contains(z, 0.0)) ++count;
        if (count > st.max_multiplicity) {
            st.max_multiplicity = count;
            st.where = z;
        }
    });
    return st;
}

OverlapStats closure_overlap(const StripFamily& fam, const Closure& cl, double grid_step) {
    OverlapStats st;
    st.grid_step = grid_step;
    sample_sigma(grid_step, [&](Vec2 z) {
        ++st.points;
        std::vector<int> as{-1}, bs{-1}, ts{-1};
        for (size_t m = 0; m < fam.members.size(); ++m) {
            const Strip& s = fam.members[m];
            if (!s.contains(z, 0.0)) continue;
            (s.family == Family::AStrip ? as : (s.family == Family::BStrip ? bs : ts)).push_back(static_cast<int>(m));
        }
        int count = 0;
        for (int a : as)
            for (int b : bs)
                for (int t : ts)
                    if (cl.key_to_set.count({a, b, t})) ++count;
        if (count > st.max_multiplicity) {
            st.max_multiplicity = count;
            st.where = z;
        }
    });
    return st;
}

std::vector<int> nonseparated_family(const PhaseFunction& phi, const CapGrid& caps, int tau1, int size,
                                     unsigned seed, bool y_dominant) {
    if (tau1 < 0 || static_cast<size_t>(tau1) >= caps.size()) throw Error(ErrorCode::InvalidParam, "cap index out of range");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int K = caps.K();
    const double mu = caps.mu();
    const Vec2 z1 = caps[tau1].center;
    std::vector<int> fam{tau1};
    std::set<int> seen{tau1};
    for (int tries = 0; static_cast<int>(fam.size()) < size && tries < 200 * size; ++tries) {
        Vec2 z;
        if (u(rng) < -0.4) {
            z = z1 + Vec2{60.0 * u(rng) / K, 60.0 * u(rng) / K};
        } else {
            const double t = u(rng), off = 20.0 * u(rng) / K;
            try {
                z = y_dominant ? Vec2{level_curve_x(phi, z1, 0.0, t) + off, t}
                               : Vec2{t, level_curve_y(phi, z1, 0.0, t) + off};
            } catch (const Error&) {
                continue;  // curve leaves the domain at this height
            }
        }
        if (std::fabs(z.x) > 1.0 || std::fabs(z.y) > 1.0) continue;
        const int c = caps.owner(z);
        if (seen.count(c)) continue;
        seen.insert(c);
        bool ok = true;
        for (int m : fam)
            if (strongly_separated(phi, caps[m], caps[c], mu, K)) {
                ok = false;
                break;
            }
        if (ok) fam.push_back(c);
    }
    return fam;
}

CoverReport geometric_cover(const PhaseFunction& phi, const CapGrid& caps, const StripFamily& fam,
                            const std::vector<int>& F) {
    CoverReport rep;
    if (F.empty()) {
        rep.all_covered = true;
        rep.within_bound = true;
        rep.bands_within_cor22 = true;
        return rep;
    }
    const int K = caps.K();
    const double mu = caps.mu();
    for (size_t a = 0; a < F.size(); ++a)
        for (size_t b = a + 1; b < F.size(); ++b)
            if (strongly_separated(phi, caps[F[a]], caps[F[b]], mu, K)) {
                std::ostringstream os;
                os << "caps " << F[a] << " and " << F[b] << " are strongly separated";
                throw Error(ErrorCode::SeparatedPair, os.str());
            }
    const Cap& tau1 = caps[F[0]];
    const Vec2 z1 = tau1.center;
    const double s = fam.s;
    const double lambda = 2.0 * s;

    std::vector<int> partners_y, partners_x;  // Case C partners per orientation
    for (size_t n = 1; n < F.size(); ++n) {
        const PairClass pc = classify_pair(phi, tau1, caps[F[n]], mu, K);
        if (pc.tag == PairTag::CaseA) ++rep.case_a;
        else if (pc.tag == PairTag::CaseB) ++rep.case_b;
        else {
            ++rep.case_c;
            (pc.orientation == Orientation::YDominant ? partners_y : partners_x).push_back(F[n]);
        }
    }

    std::set<int> chosen;
    const int r = 2;
    for (int orient = 0; orient < 2; ++orient) {
        const bool ydom = orient == 0;
        const auto& partners = ydom ? partners_y : partners_x;
        if (partners.empty()) continue;
        // Zero set of t^2 (or t^1) through z1, parametrised by y (or x).
        auto gamma = [&](double t) {
            return ydom ? Vec2{level_curve_x(phi, z1, 0.0, t), t} : Vec2{t, level_curve_y(phi, z1, 0.0, t)};
        };
        const double base = ydom ? A_of(phi, z1) : B_of(phi, z1);
        ScalarFunction g;
        g.g = [&, base](double t) {
            const Vec2 z = gamma(t);
            return (ydom ? A_of(phi, z) : B_of(phi, z)) - base;
        };
        g.label = ydom ? "A(gamma)-A(z1)" : "B(gamma)-B(z1)";
        IntervalDecomposition dec;
        SublevelOptions so;
        so.max_step_fraction = 1.0 / 512.0;
        const double gsup = sup_norm(g, -1.0, 1.0, 513);
        const double Cr = estimate_Cr(g, -1.0, 1.0, r, 513);
        if (gsup < lambda) {
            dec.base_a = -1.0;
            dec.base_b = 1.0;
            dec.lambda = lambda;
            dec.r = r;
            dec.C_r = Cr;
            dec.intervals = {{-1.0, 1.0, 0}};
        } else {
            so.C_r = Cr;
            dec = sublevel_decompose(g, -1.0, 1.0, r, lambda, so);
        }
        dec.cardinality_bound = sublevel_bound(r, 2.0, dec.C_r, lambda);
        dec.within_bound = static_cast<double>(dec.intervals.size()) <= dec.cardinality_bound;
        rep.cor22_bound += dec.cardinality_bound;

        // Level index nearest the value at z1.
        const auto& levels = ydom ? fam.A_levels : fam.B_levels;
        int kbest = 0;
        for (size_t k = 0; k < levels.size(); ++k)
            if (std::fabs(levels[k] - base) < std::fabs(levels[kbest] - base)) kbest = static_cast<int>(k);
        const Family fk = ydom ? Family::AStrip : Family::BStrip;

        for (const auto& iv : dec.intervals) {
            bool used = false;
            for (int c : partners) {
                const double coord = ydom ? caps[c].center.y : caps[c].center.x;
                if (iv.contains(coord, 1e-12)) used = true;
            }
            if (!used) continue;
            ++rep.intervals_used;
            // Tube projection onto the strip direction.
            const Vec2 dir = ydom ? unit({-levels[kbest], 1.0}) : unit({1.0, -levels[kbest]});
            const Vec2 perp{dir.y, -dir.x};
            const double t0 = 0.5 * (iv.a + iv.b);
            const double w0 = dot(gamma(t0), perp);
            double ulo = 1e300, uhi = -1e300;
            const int nt = 65;
            for (int q = 0; q < nt; ++q) {
                const double u = dot(gamma(iv.a + (iv.b - iv.a) * q / (nt - 1)), dir);
                ulo = std::min(ulo, u);
                uhi = std::max(uhi, u);
            }
            ulo -= s;
            uhi += s;
            // Strip index whose center line is nearest gamma(t0).
            int jbest = 0;
            double dbest = 1e300;
            for (const auto& m : fam.members)
                if (m.family == fk && m.k == kbest) {
                    const double d = std::fabs(dot(m.center, perp) - w0);
                    if (d < dbest) {
                        dbest = d;
                        jbest = m.j;
                    }
                }
            for (size_t m = 0; m < fam.members.size(); ++m) {
                const Strip& st = fam.members[m];
                if (st.family != fk || st.k != kbest || st.j != jbest) continue;
                if (st.core_hi >= ulo && st.core_lo <= uhi) chosen.insert(static_cast<int>(m));
            }
        }
        rep.decompositions.push_back(dec);
    }

    auto covered = [&](int c) {
        for (int m : chosen)
            if (fam.members[m].contains_cap(caps[c])) return true;
        return false;
    };
    std::set<int> case_c_caps(partners_y.begin(), partners_y.end());
    case_c_caps.insert(partners_x.begin(), partners_x.end());
    std::set<int> tiles;
    for (int c : F) {
        if (covered(c)) continue;
        const bool is_c = case_c_caps.count(c) > 0;
        int pick = -1;
        for (size_t m = 0; m < fam.members.size() && pick < 0; ++m) {
            const Strip& st = fam.members[m];
            if (is_c ? st.family == Family::BigCap : st.family != Family::BigCap) continue;
            if (st.contains_cap(caps[c])) pick = static_cast<int>(m);
        }
        if (is_c) {
            // Case C partner missed by the tube: any strip containing it.
            for (size_t m = 0; m < fam.members.size() && pick < 0; ++m)
                if (fam.members[m].contains_cap(caps[c])) pick = static_cast<int>(m);
            if (pick >= 0) ++rep.fallback_additions;
        } else if (pick >= 0) {
            tiles.insert(pick);
        }
        if (pick >= 0) chosen.insert(pick);
    }
    rep.tiles_used = static_cast<int>(tiles.size());
    rep.members.assign(chosen.begin(), chosen.end());
    for (int c : F)
        if (!covered(c)) rep.uncovered.push_back(c);
    rep.all_covered = rep.uncovered.empty();
    rep.band_count = rep.intervals_used + rep.tiles_used;
    rep.bound = rep.band_count * 6.0 * std::pow(static_cast<double>(K), fam.params.eps_prime);
    rep.within_bound = static_cast<double>(rep.members.size()) <= rep.bound;
    if (rep.cor22_bound == 0.0) rep.cor22_bound = sublevel_bound(r, 2.0, 0.0, lambda);
    rep.bands_within_cor22 = static_cast<double>(rep.band_count) <= rep.cor22_bound;
    return rep;
}

}  // namespace hypx
