#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spt/homology.hpp"
#include "spt/loopgas.hpp"
#include "spt/pauli.hpp"
#include "spt/rng.hpp"

namespace spt {

// Gamma1: y-edges at y = y0 (dual 2-cycle, x-z plane).
// Gamma2: x-normal faces at x = x0, z in [z_left, z_right) going +z (y-z strip).
// S2L / S2R: y-edge lines at (x0, *, z_left) and (x0, *, z_right).
// Neighbourhoods hold faces whose centre lies within doubled Chebyshev distance
// alpha - 1 of the line in the x-z plane (strictly closer than alpha/2).
struct MembranePair {
    int x0 = 0;
    int y0 = 0;
    int z_left = 0;
    int z_right = 0;
    int alpha = 2;
    Chain gamma1;
    Chain gamma2;
    Chain s2l;
    Chain s2r;
    BitVec nbhd_left;
    BitVec nbhd_right;
};

// Largest alpha for which the two neighbourhoods stay disjoint.
int max_alpha(int d, int z_left, int z_right);
// ceil(c log d), c = 3 / (2 beta - log 5) unless c_override > 0, clamped to
// [2, max_alpha]. Above the Peierls temperature the largest admissible alpha is used.
int default_alpha(double beta, int d, int z_left, int z_right, double c_override = 0.0);

MembranePair build_membranes(const CubicLattice& lat, int z_left, int z_right, int alpha, int x0 = 0, int y0 = 0);

SymbolicPauli membrane_operator_1(const CubicLattice& lat, const MembranePair& mp);
SymbolicPauli membrane_operator_2(const CubicLattice& lat, const MembranePair& mp);

// Parity between Gamma1 and dGamma2 restricted to the left slice; 1 means the
// slice restrictions anti-commute.
int slice_anticommutation(const CubicLattice& lat, const MembranePair& mp);

std::pair<int, int> membrane_eigenvalue(const MembranePair& mp, const LoopConfig& cfg);

struct CorrectionReport {
    std::vector<std::size_t> detected_left;
    std::vector<std::size_t> detected_right;
    int flip_left = 0;
    int flip_right = 0;
    int m1 = 1;
    int m2_raw = 1;
    int m2 = 1;
};

CorrectionReport local_correct(const CubicLattice& lat, const MembranePair& mp, const LoopConfig& cfg);

struct OrderParameter {
    double o_raw = 0.0;
    double o_corrected = 0.0;
    double stderr_raw = 0.0;
    double stderr_ = 0.0;
    std::size_t n_samples = 0;
    int alpha = 0;
};

struct OrderParameterOptions {
    std::size_t n_samples = 10000;
    std::size_t n_chains = 16;
    std::size_t burn_in = 1000;
    std::size_t sweeps_between = 1;
    double winding_fraction = 0.1;
    uint64_t seed = 1;
};

OrderParameter order_parameter(const CubicLattice& lat, const MembranePair& mp, double beta,
                               const OrderParameterOptions& opt);
// Exact evaluation at d = 2 from the enumerated ensemble.
OrderParameter order_parameter_exact(const CubicLattice& lat, const MembranePair& mp, double beta);

// (<M1> + <M2>) / 2 on |+...+>.
double product_state_baseline(const CubicLattice& lat, const MembranePair& mp);

struct Correlators {
    int xx = 1;
    int zz = 1;
};

// Bulk X measurements with random single-site outcomes; the byproduct-corrected
// logical correlators reproduce m1 and the corrected m2.
Correlators localize_entanglement(const CubicLattice& lat, const MembranePair& mp, const LoopConfig& cfg,
                                  Rng& byproduct_rng);

}  // namespace spt
