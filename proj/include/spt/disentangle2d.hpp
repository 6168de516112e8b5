#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spt/rng.hpp"

namespace spt {

// Periodic L x L triangular lattice, v = y * L + x. Neighbour offsets in
// cyclic order: (1,0), (1,1), (0,1), (-1,0), (-1,-1), (0,-1).
class TriLattice {
public:
    explicit TriLattice(int L);

    int L() const { return L_; }
    std::size_t size() const { return std::size_t(L_) * L_; }
    uint32_t index(int x, int y) const;
    int x(uint32_t v) const { return int(v % L_); }
    int y(uint32_t v) const { return int(v / L_); }

    const std::array<uint32_t, 6>& neighbours(uint32_t v) const { return nbr_[v]; }
    bool adjacent(uint32_t a, uint32_t b) const;
    // Edges between cyclically consecutive neighbours of v.
    std::array<std::pair<uint32_t, uint32_t>, 6> link1(uint32_t v) const;

    // Proper colouring: (x + y) mod 3 when 3 | L, greedy otherwise.
    int colour(uint32_t v) const { return colour_[v]; }
    int num_colours() const { return ncolours_; }

private:
    int L_;
    std::vector<std::array<uint32_t, 6>> nbr_;
    std::vector<int> colour_;
    int ncolours_ = 0;
};

// p = 2 / (exp(2 beta) + 1): probability that a site is a sink (k_v = 0).
double sink_probability(double beta);

struct SinkConfig {
    int L = 0;
    std::vector<uint8_t> k;
    std::size_t weight() const;
};

SinkConfig sample_sinks(const TriLattice& lat, double beta, Rng& rng);
double config_probability(const SinkConfig& cfg, double p);

// Square regions of side l. When l does not divide L the last row and column
// of squares absorb the remainder.
class GridPartition {
public:
    GridPartition(int L, int l);

    int L() const { return L_; }
    int l() const { return l_; }
    int squares_per_side() const { return nsq_; }
    std::size_t num_squares() const { return std::size_t(nsq_) * nsq_; }
    std::size_t square_of(int x, int y) const;
    std::vector<uint32_t> members(const TriLattice& lat, std::size_t sq) const;
    std::size_t square_size(std::size_t sq) const;

private:
    int L_, l_, nsq_;
    int start(int i) const { return i * l_; }
    int end(int i) const { return i + 1 == nsq_ ? L_ : (i + 1) * l_; }
};

// Default grid constant: twice the threshold -2 / log(1 - p).
double default_sink_c(double beta);
// l = ceil(sqrt(c log L)), clamped to [1, L].
int grid_side(int L, double c);

bool is_valid(const SinkConfig& cfg, const GridPartition& grid);
// Exact probability that every square holds a sink, and the union bound.
double valid_probability(const GridPartition& grid, double p);
double valid_union_bound(const GridPartition& grid, double p);

// Largest BFS eccentricity inside any square, using only edges between members.
int max_square_diameter(const TriLattice& lat, const GridPartition& grid);

enum class GateKind { U, W };

struct Gate {
    GateKind kind = GateKind::U;
    uint32_t v = 0;
    uint32_t w = 0;
};

struct Circuit {
    std::vector<std::vector<Gate>> layers;  // each entry runs in parallel
    std::vector<int> layer_shell;           // BFS shell of each entry
    std::vector<uint32_t> sinks;            // V(0)
    std::vector<int> dist;                  // distance to V(0)
    std::vector<int> partner;               // -1 if no gate
    int max_shell = 0;

    // Shell layers: U layers plus W layers.
    int depth() const { return 2 * max_shell; }
    std::size_t gate_depth() const { return layers.size(); }
    std::size_t num_gates() const;
};

struct CircuitOptions {
    // W layers run from the outermost shell inwards; the forward order breaks
    // the commutation side condition of the W rule.
    bool w_outer_first = true;
};

Circuit build_circuit(const TriLattice& lat, const SinkConfig& cfg, const GridPartition& grid,
                      const CircuitOptions& opt = {});

enum class TermKind { H, ZZ, X };

struct Term {
    TermKind kind = TermKind::H;
    uint32_t a = 0;
    uint32_t b = 0;  // second site of ZZ
    int sign = 1;
    friend bool operator==(const Term&, const Term&) = default;
};

class SideConditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// -sum_v k_v h_v as a term list (one term per k_v = 1 site).
std::vector<Term> imperfect_hamiltonian(const SinkConfig& cfg);
// Conjugates each term through the circuit using the U and W rewrite rules.
// Throws SideConditionError if a layer has overlapping gates or a gate fails to
// commute with a term it should leave alone.
std::vector<Term> conjugate_hamiltonian(const TriLattice& lat, const SinkConfig& cfg, const Circuit& circuit);
// {+X_v : k_v = 1}
std::vector<Term> target_hamiltonian(const SinkConfig& cfg);

// Small explicit-matrix patches.
struct Patch {
    std::string name;
    int n = 0;
    std::vector<std::vector<int>> nbrs;
    std::vector<std::vector<std::pair<int, int>>> link;
    std::vector<bool> closed;  // h_v commutes with the global X symmetry
    std::vector<std::pair<int, int>> rule_pairs;  // (v, w) gates to check
};

Patch star_patch();
Patch torus_patch(int L, std::size_t max_pairs = 6);

struct DenseReport {
    bool ok = true;
    double max_error = 0.0;
    std::size_t checks = 0;
    std::vector<std::string> failures;
};

DenseReport dense_oracle(const Patch& patch, double tol = 1e-10);

struct Lemma1Result {
    double distance = 0.0;
    double bound = 0.0;
    double pr_k1 = 0.0;
};

// ||rho(beta) - rho_f(beta)||_1 on the L = 3 torus.
Lemma1Result lemma1_gap(int L, double beta);
double lemma1_bound(int N, double beta);

}  // namespace spt
