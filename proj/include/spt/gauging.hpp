#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spt/gf2.hpp"
#include "spt/homology.hpp"
#include "spt/pauli.hpp"

namespace spt {

struct HamiltonianSpec {
    int sign = -1;
    std::vector<SymbolicPauli> terms;
    // Cell that generated each term, for reporting; dim 1 = edge, 2 = face.
    std::vector<std::pair<int, std::size_t>> cells;
};

// Cluster terms K(e) = X(e) Z(d*e) and K(f) = X(f) Z(df).
SymbolicPauli cluster_term(const CubicLattice& lat, int dim, std::size_t cell);
HamiltonianSpec cluster_hamiltonian(const CubicLattice& lat);
// -sum X over all face and edge qubits.
HamiltonianSpec trivial_hamiltonian(const CubicLattice& lat);

// Local 1-form symmetry generators: X on the six faces of a cube, X on the six
// edges at a vertex.
SymbolicPauli cube_symmetry(const CubicLattice& lat, std::size_t cube);
SymbolicPauli vertex_symmetry(const CubicLattice& lat, std::size_t vertex);

bool is_symmetric(const CubicLattice& lat, const SymbolicPauli& op);

// Precomputed linear algebra for the gauging map on one lattice.
//   X(faces c2)  -> X(edges dc2)         X(edges c1) -> X(faces d*c1)
//   Z(faces z)   -> Z(edges y), d*y = z  Z(edges z)  -> Z(faces F), dF = z
// The image is canonicalised modulo the gauge group: Z on face 2-cycles and
// Z on edge dual 2-cycles.
class Gauging {
public:
    explicit Gauging(const CubicLattice& lat);

    const CubicLattice& lattice() const { return lat_; }

    // Throws std::invalid_argument on non-symmetric input, or when a Z support
    // is closed but winds around the torus (no preimage under the boundary maps).
    SymbolicPauli gauge(const SymbolicPauli& op) const;

    // Unique representative of the operator's coset under the gauge group.
    SymbolicPauli reduce(SymbolicPauli op) const;
    bool equal_mod_gauge(const SymbolicPauli& a, const SymbolicPauli& b) const;
    bool is_gauge(const SymbolicPauli& op) const;

    std::size_t face_cycle_dim() const { return face_cycles_.dim(); }
    std::size_t edge_cocycle_dim() const { return edge_cocycles_.dim(); }

private:
    const CubicLattice& lat_;
    Gf2Basis face_cycles_;
    Gf2Basis edge_cocycles_;
    Gf2Solver face_preimage_;  // solves dF = z for F on faces
    Gf2Solver edge_preimage_;  // solves d*y = z for y on edges
};

struct DualityMismatch {
    std::string check;
    int dim = 0;
    std::size_t cell = 0;
    std::array<int, 4> coord{};
};

struct DualityReport {
    int d = 0;
    bool toric_code_ok = false;  // gauged trivial model
    bool hadamard_ok = false;    // gauged cluster model
    bool gauge_generators_ok = false;
    std::size_t terms_checked = 0;
    std::vector<DualityMismatch> mismatches;
    bool ok() const { return toric_code_ok && hadamard_ok && gauge_generators_ok; }
};

// Compares gauged[i] against expected[i] modulo gauge symmetry; mismatches are
// tagged with cells[i].
std::vector<DualityMismatch> compare_terms(const Gauging& g, const std::string& check,
                                           const std::vector<SymbolicPauli>& gauged,
                                           const std::vector<SymbolicPauli>& expected,
                                           const std::vector<std::pair<int, std::size_t>>& cells);

DualityReport verify_dualities(const CubicLattice& lat);

}  // namespace spt
