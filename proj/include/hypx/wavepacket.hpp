#pragma once

#include <vector>

#include "hypx/caps.hpp"
#include "hypx/extension.hpp"
#include "hypx/phase.hpp"

namespace hypx {

struct WavePacketOptions {
    int samples = 192;  // DFT samples per axis on each 3 theta box
    int modes = 48;     // Fourier modes |n_i| <= modes
    double prune = 1e-10;  // drop modes with |c_n| below prune * max |c_n|
};

// Cap theta of side R^{-1/2}: spatial cutoff psi_theta (support in 2 theta) and
// Fourier coefficients of f psi_theta on the 3 theta period box.
struct Theta {
    Vec2 center;
    double side = 0.0;
    Box box3;     // 3 theta, the period box
    Box support;  // 3 theta intersected with Sigma
    std::vector<cplx> coef;  // (2 modes + 1)^2, index (n1 + modes) * (2 modes + 1) + (n2 + modes)
    std::vector<char> kept;  // per mode, survived pruning
    double f_energy = 0.0;   // integral of |f|^2 over 3 theta in Sigma
    Vec3 dir;                // unit tube direction, proportional to (-grad phi(omega_theta), 1)
};

// f_T = 1_Sigma w_theta chi_m(v_n) c_n exp(i v_n . (z - corner)). The frequency
// bumps chi_m sit on the lattice R^{1/2} Z^2 and the Fourier modes are spaced
// more widely, so every packet carries a single mode.
struct Packet {
    int theta = 0;
    int m1 = 0, m2 = 0;  // lattice index, tube offset R^{1/2} m
    int n1 = 0, n2 = 0;  // Fourier mode
    cplx amplitude;      // chi_m(v_n) c_n
    double energy = 0.0;  // integral of |f_T|^2
};

struct WavePacketDecomp {
    double R = 64.0;
    double delta = 0.1;
    int per_axis = 0;       // caps theta per side of Sigma
    double side = 0.0;      // 2 / per_axis
    double lattice = 0.0;   // R^{1/2}
    double period = 0.0;    // 3 side
    double radius = 0.0;    // R^{1/2 + delta}
    double chi_radius = 0.0;  // Euclidean support radius of chi_m
    WavePacketOptions opts;
    std::vector<Theta> thetas;
    std::vector<Packet> packets;

    Vec2 mode_freq(int n1, int n2) const;
    // Tube of p: axis through (offset, 0) along thetas[p.theta].dir, radius R^{1/2+delta}, length R.
    Vec2 offset(const Packet& p) const { return {lattice * p.m1, lattice * p.m2}; }
    double window(int theta, Vec2 z) const;     // 1_Sigma w_theta
    double cutoff(int theta, Vec2 z) const;     // psi_theta
    cplx packet_value(const Packet& p, Vec2 z) const;
    Amplitude packet_amplitude(size_t k) const;
    double axis_distance(const Packet& p, const Vec3& xi) const;
};

// Throws RTooSmall for R < 64 and InvalidParam for delta outside (0, 0.25].
WavePacketDecomp decompose(const PhaseFunction& phi, const Amplitude& f, double R, double delta,
                           const WavePacketOptions& opts = {});

// E f_T(xi) by tensor quadrature on the support of f_T.
cplx packet_extension(const PhaseFunction& phi, const WavePacketDecomp& d, const Packet& p, const Vec3& xi);

// sum_T f_T at the nodes of a tensor rule, x-fastest.
std::vector<cplx> reconstruct_on_nodes(const WavePacketDecomp& d, const Rule1D& rx, const Rule1D& ry);

struct ReconstructionReport {
    double grid_h = 0.0;
    size_t points = 0;
    double rel_l2 = 0.0;    // grid L2 of E f - sum E f_T over grid L2 of E f
    double max_abs = 0.0;   // max grid |E f - sum E f_T|
    double f_l2 = 0.0;
    double max_over_f_l2 = 0.0;
    double amplitude_rel_l2 = 0.0;  // ||f - sum f_T||_2 / ||f||_2 on the nodes
};

ReconstructionReport reconstruction_check(const PhaseFunction& phi, const Amplitude& f, const WavePacketDecomp& d,
                                          double grid_h, double panel_scale = 2.0);

struct PacketReport {
    size_t packets = 0;
    // (a) sampled points of Sigma outside 3 theta where some f_T is nonzero
    size_t support_violations = 0;
    // (b) median |E f_T| off 2T over median on T, worst over sampled packets
    double decay_ratio = 0.0;
    double decay_ratio_median = 0.0;
    size_t decay_packets = 0;
    bool decay_ok = false;
    // (d) max |<f_T1, f_T2>| / integral_{3 theta} |f|^2 over disjoint same-theta tubes
    double orthogonality = 0.0;
    size_t orthogonality_pairs = 0;
    bool orthogonality_ok = false;
    bool orthogonality_vacuous = false;
    // (e) max over theta of sum_T ||f_T||^2 / integral_{3 theta} |f|^2
    double energy_C = 0.0;
    bool energy_ok = false;
};

PacketReport packet_checks(const PhaseFunction& phi, const WavePacketDecomp& d, int sample_count, unsigned seed,
                           int xi_samples = 64);

struct LatticeCoverage {
    double max_distance = 0.0;  // max over grid points and theta of the distance to the nearest axis
    double bound = 0.0;         // R^{1/2}
    bool ok = false;
};

LatticeCoverage tube_lattice_coverage(const PhaseFunction& phi, const WavePacketDecomp& d, double grid_h);

}  // namespace hypx
