#pragma once

#include "spt/homology.hpp"

namespace spt {

// i^phase X(x_primal) Z(z_primal) X(x_dual) Z(z_dual).
// Primal qubits sit on faces, dual qubits on edges.
struct SymbolicPauli {
    int phase = 0;
    BitVec x_primal;
    BitVec z_primal;
    BitVec x_dual;
    BitVec z_dual;

    static SymbolicPauli identity(const CubicLattice& lat);
    // Builders from chains: faces go to primal qubits, edges to dual qubits.
    static SymbolicPauli X(const CubicLattice& lat, const Chain& c);
    static SymbolicPauli Z(const CubicLattice& lat, const Chain& c);

    bool is_identity() const;
    friend bool operator==(const SymbolicPauli&, const SymbolicPauli&) = default;
};

SymbolicPauli operator*(const SymbolicPauli& a, const SymbolicPauli& b);

bool pauli_commutes(const SymbolicPauli& a, const SymbolicPauli& b);

// Swap X and Z on every qubit, keeping the X-before-Z normal order.
SymbolicPauli hadamard(const SymbolicPauli& p);

// <+...+| P |+...+> for Hermitian P (even phase).
double plus_state_expectation(const SymbolicPauli& p);

}  // namespace spt
