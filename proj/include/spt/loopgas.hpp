#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "spt/homology.hpp"
#include "spt/rng.hpp"

namespace spt {

// gamma: primal 1-cycle on edges. gamma_prime: dual 1-cycle on faces.
struct LoopConfig {
    Chain gamma;
    Chain gamma_prime;

    static LoopConfig empty(const CubicLattice& lat);
};

struct EnsembleParams {
    double beta = 1.0;
    int d = 4;
    uint64_t seed = 1;
    std::size_t sweeps = 1000;
    std::size_t burn_in = 1000;
    double winding_fraction = 0.1;
};

int energy(const LoopConfig& cfg);

struct LoopDecomposition {
    std::vector<Chain> loops;
    std::vector<int> lengths;
    int largest = 0;
};

// Greedy walk extraction into edge-disjoint simple loops. Works on primal
// 1-cycles (edges) and dual 1-cycles (faces).
LoopDecomposition decompose_loops(const CubicLattice& lat, const Chain& c);
std::vector<int> loop_lengths(const CubicLattice& lat, const Chain& c);
int largest_loop(const CubicLattice& lat, const Chain& c);

// Exact per-factor tables at d = 2; cycles are stored as bit masks over cells.
struct ExactFactor {
    Side side = Side::Primal;
    std::vector<uint64_t> cycles;
    std::vector<double> prob;
    std::vector<int> weight;
    std::vector<int> largest;

    double tail(int alpha) const;  // Pr(largest loop >= alpha)
    Chain chain(const CubicLattice& lat, std::size_t i) const;
};

struct ExactEnsemble {
    ExactFactor primal;
    ExactFactor dual;
};

ExactEnsemble exact_ensemble(const CubicLattice& lat, double beta);

// c' |Delta_0| exp(-alpha (2 beta - log 5)), c' = (12/5) / (1 - exp(log 5 - 2 beta)).
double peierls_tail(double alpha, double beta, int d);

enum class MoveKind { Plaquette, Winding };

struct MoveCounters {
    uint64_t proposed[2] = {0, 0};
    uint64_t accepted[2] = {0, 0};
    double rate(MoveKind k) const {
        int i = int(k);
        return proposed[i] ? double(accepted[i]) / double(proposed[i]) : 0.0;
    }
};

// Metropolis sampler over Z_1 x Z_1*. Moves XOR a plaquette boundary (or the
// four faces around an edge on the dual side) or a straight wrapping line.
class LoopSampler {
public:
    LoopSampler(const CubicLattice& lat, double beta, double winding_fraction = 0.1);

    const CubicLattice& lattice() const { return *lat_; }
    double beta() const { return beta_; }

    std::size_t num_moves(Side factor, MoveKind kind) const;
    std::span<const uint32_t> move_cells(Side factor, MoveKind kind, std::size_t i) const;
    double proposal_prob(Side factor, MoveKind kind) const;
    double acceptance(const Chain& c, Side factor, MoveKind kind, std::size_t i) const;
    // q(move) * acceptance; the move maps c to c XOR move.
    double transition_prob(const Chain& c, Side factor, MoveKind kind, std::size_t i) const;
    void apply(Chain& c, Side factor, MoveKind kind, std::size_t i) const;

    // One proposal on one factor. Returns true if accepted.
    bool propose(Chain& c, Side factor, Rng& rng);
    // One proposal on a uniformly chosen factor.
    void step(LoopConfig& cfg, Rng& rng);
    // 3 d^3 proposals on each factor.
    void sweep(LoopConfig& cfg, Rng& rng);

    const MoveCounters& counters() const { return counters_; }
    void reset_counters() { counters_ = {}; }

private:
    int delta_weight(const Chain& c, std::span<const uint32_t> cells) const;
    double accept_prob(int dw) const;

    const CubicLattice* lat_;
    double beta_;
    double wf_;
    std::vector<uint32_t> lines_[2];  // winding moves, d cells each
    std::vector<double> accept_table_;  // indexed by dw + offset
    int dw_offset_;
    MoveCounters counters_;
};

// Single Metropolis proposal; convenience wrapper.
LoopConfig mcmc_step(LoopSampler& sampler, LoopConfig cfg, Rng& rng);

struct ChainRecord {
    int d = 0;
    double beta = 0.0;
    uint64_t seed = 0;
    std::size_t chain = 0;
    std::size_t sweeps = 0;
    double accept_plaquette = 0.0;
    double accept_winding = 0.0;
    double mean_energy = 0.0;
    std::map<int, uint64_t> largest_hist;       // primal factor
    std::map<int, uint64_t> largest_dual_hist;  // dual factor
};

// Burn-in then `sweeps` measured sweeps from the empty configuration.
ChainRecord run_chain(const CubicLattice& lat, const EnsembleParams& params, std::size_t chain, uint64_t seed);

}  // namespace spt
