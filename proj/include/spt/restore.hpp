#pragma once

#include <cstdint>
#include <vector>

#include "spt/homology.hpp"
#include "spt/rng.hpp"

namespace spt {

// p = 1 / (1 + exp(2 / T)), and its inverse.
double nishimori_p(double T);
double nishimori_T(double p);

// c1: Z errors on edge (dual) qubits; c1p: Z errors on face (primal) qubits.
struct NoiseSample {
    Chain c1;
    Chain c1p;
    double p = 0.0;
};

NoiseSample sample_noise(const CubicLattice& lat, double p, Rng& rng);

struct Syndrome {
    std::vector<uint32_t> vertex_defects;  // boundary of c1
    std::vector<uint32_t> cube_defects;    // dual boundary of c1p
};

Syndrome extract_syndrome(const CubicLattice& lat, const NoiseSample& noise);

enum class DecodeMethod { Greedy, Exact };

struct DecodeResult {
    Chain gamma1;   // recovery on edges
    Chain gamma1p;  // recovery on faces
    std::size_t weight = 0;
    std::size_t weight_dual = 0;
    HomologyClass residual;
    HomologyClass residual_dual;
    bool success_primal = true;
    bool success_dual = true;
    bool success = true;
};

// Exact matching is limited to this many defects per sublattice.
inline constexpr std::size_t kExactMatchLimit = 14;

// Pairs defects (per sublattice) and joins each pair by a shortest torus path.
DecodeResult decode(const CubicLattice& lat, const Syndrome& syn, DecodeMethod method);
// Fills residual classes and success flags from the true error.
void score(const CubicLattice& lat, const NoiseSample& noise, DecodeResult& res, int surface_offset = 0);

// Matching on a list of torus points; returns pairs of indices into pts.
std::vector<std::pair<int, int>> match_greedy(const CubicLattice& lat, const std::vector<uint32_t>& pts);
std::vector<std::pair<int, int>> match_exact(const CubicLattice& lat, const std::vector<uint32_t>& pts);
int torus_taxicab(const CubicLattice& lat, uint32_t a, uint32_t b);

struct ErrorRate {
    double fail_rate = 0.0;
    double stderr_ = 0.0;
    double fail_primal = 0.0;
    double fail_dual = 0.0;
    std::size_t n_trials = 0;
};

ErrorRate logical_error_rate(const CubicLattice& lat, double p, std::size_t n_trials, DecodeMethod method,
                             uint64_t seed);

// First crossing of rate_large - rate_small from below zero to above, by linear
// interpolation; NaN if the curves never cross on the grid.
double find_crossing(const std::vector<double>& ps, const std::vector<double>& rate_small,
                     const std::vector<double>& rate_large);

}  // namespace spt
