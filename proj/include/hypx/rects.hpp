#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "hypx/caps.hpp"
#include "hypx/phase.hpp"
#include "hypx/sublevel.hpp"

namespace hypx {

enum class Family { AStrip, BStrip, BigCap };
const char* family_name(Family f);

// Rotated rectangle (A/B strips) or axis-parallel square (big caps).
struct Strip {
    Family family = Family::AStrip;
    int k = 0, j = 0, i = 0;
    Vec2 center;
    Vec2 dir{0.0, 1.0};  // unit vector along the length
    double half_width = 0.0;
    double half_length = 0.0;
    double level = 0.0;    // A_k or B_k; unused for big caps
    double core_lo = 0.0;  // chopped piece before re-padding, in <z, dir> units
    double core_hi = 0.0;

    Vec2 perp() const { return {dir.y, -dir.x}; }
    double length() const { return 2.0 * half_length; }
    bool contains(Vec2 z, double tol = 1e-12) const;
    bool contains_cap(const Cap& c, double tol = 1e-12) const;
    std::array<Vec2, 4> corners() const;
};

struct FamilyParams {
    int K = 256;
    double mu = 1.0;
    double eps_prime = 0.04;
    double C = 40.0;        // spacing of the A_k grid, in units of mu^{1/2} K^{-3/4}
    double C_prime = 64.0;  // strip half-thickness, same units
    double big_cap_constant = 2.0;  // big-cap side, in units of mu^{1/2} K^{-1/4}
    double march_fraction = 0.125;  // S^0 marching step, in units of mu^{1/2} K^{-3/4}
    bool drop_empty = true;         // discard members containing no cap
};

struct StripFamily {
    FamilyParams params;
    double s = 0.0;  // mu^{1/2} K^{-3/4}
    double A_min = 0.0, A_max = 0.0, B_min = 0.0, B_max = 0.0;
    double grad_sup = 0.0;  // sampled max(|grad A|, |grad B|) on Sigma
    std::vector<double> A_levels, B_levels;
    std::vector<Strip> members;
    std::vector<std::vector<int>> caps_in;  // per member, contained caps
    size_t count(Family f) const;
    // Proximity constant C_1 = C + (2C' + 2) sup|grad A|.
    double C1() const { return params.C + (2.0 * params.C_prime + 2.0) * grad_sup; }
};

StripFamily build_family(const PhaseFunction& phi, const CapGrid& caps, const FamilyParams& p);

struct StripCheck {
    double max_level_ratio = 0.0;  // max |A(z) - A_k| / s over samples, A or B strips
    double C1 = 0.0;
    bool proximity_ok = false;
    double min_length = 0.0, max_length = 0.0;
    bool length_ok = false;
};

StripCheck check_strips(const PhaseFunction& phi, const StripFamily& fam, int samples_u = 33,
                        int samples_w = 9);

// Element of the intersection closure.
struct CoverSet {
    std::vector<int> members;  // indices into StripFamily::members, at most one per family
    std::vector<int> caps;
    bool inside_strip() const;  // some member is an A or B strip
    bool contains(const StripFamily& fam, Vec2 z, double tol = 1e-12) const;
};

struct Closure {
    std::vector<CoverSet> sets;
    // Caps grouped by identical membership signature; every set is a union of atoms.
    std::vector<std::vector<int>> atoms;
    std::vector<std::vector<int>> set_atoms;
    std::map<std::array<int, 3>, int> key_to_set;  // representative keys only
};

// restrict_to: when non-empty, only these caps count (sets are deduplicated
// by their caps within restrict_to).
Closure build_closure(const StripFamily& fam, const CapGrid& caps,
                      const std::vector<int>& restrict_to = {});

struct OverlapStats {
    int max_multiplicity = 0;
    Vec2 where;
    double grid_step = 0.0;
    size_t points = 0;
};

// Family members of the selected kinds containing each grid point.
OverlapStats overlap_stats(const StripFamily& fam, const std::vector<Family>& kinds, double grid_step);
OverlapStats closure_overlap(const StripFamily& fam, const Closure& cl, double grid_step);

struct CoverReport {
    std::vector<int> members;  // L_0 as indices into StripFamily::members
    bool all_covered = false;
    std::vector<int> uncovered;
    int case_a = 0, case_b = 0, case_c = 0;
    int intervals_used = 0;
    int tiles_used = 0;
    int band_count = 0;
    int fallback_additions = 0;
    double bound = 0.0;  // band_count * 6 K^{eps'}
    bool within_bound = false;
    double cor22_bound = 0.0;
    bool bands_within_cor22 = false;
    std::vector<IntervalDecomposition> decompositions;
};

// Random pairwise non-separated family containing tau1 (first entry). Members are
// drawn near the zero set of t^2 (y-dominant) or t^1 (x-dominant) through tau1,
// or next to tau1, and kept only when not strongly separated from every member.
std::vector<int> nonseparated_family(const PhaseFunction& phi, const CapGrid& caps, int tau1, int size,
                                     unsigned seed, bool y_dominant);

CoverReport geometric_cover(const PhaseFunction& phi, const CapGrid& caps, const StripFamily& fam,
                            const std::vector<int>& F);

}  // namespace hypx
