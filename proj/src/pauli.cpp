#include "spt/pauli.hpp"

#include <stdexcept>

namespace spt {

SymbolicPauli SymbolicPauli::identity(const CubicLattice& lat) {
    SymbolicPauli p;
    p.x_primal = BitVec(lat.num_cells(2));
    p.z_primal = BitVec(lat.num_cells(2));
    p.x_dual = BitVec(lat.num_cells(1));
    p.z_dual = BitVec(lat.num_cells(1));
    return p;
}

SymbolicPauli SymbolicPauli::X(const CubicLattice& lat, const Chain& c) {
    SymbolicPauli p = identity(lat);
    if (c.dim == 2)
        p.x_primal = c.bits;
    else if (c.dim == 1)
        p.x_dual = c.bits;
    else
        throw std::invalid_argument("SymbolicPauli::X: qubits live on edges and faces only");
    return p;
}

SymbolicPauli SymbolicPauli::Z(const CubicLattice& lat, const Chain& c) {
    SymbolicPauli p = identity(lat);
    if (c.dim == 2)
        p.z_primal = c.bits;
    else if (c.dim == 1)
        p.z_dual = c.bits;
    else
        throw std::invalid_argument("SymbolicPauli::Z: qubits live on edges and faces only");
    return p;
}

bool SymbolicPauli::is_identity() const {
    return phase == 0 && x_primal.none() && z_primal.none() && x_dual.none() && z_dual.none();
}

SymbolicPauli operator*(const SymbolicPauli& a, const SymbolicPauli& b) {
    // Z(z1) X(x2) = (-1)^{|z1 & x2|} X(x2) Z(z1)
    int swaps = a.z_primal.dot(b.x_primal) + a.z_dual.dot(b.x_dual);
    SymbolicPauli p;
    p.phase = (a.phase + b.phase + 2 * swaps) & 3;
    p.x_primal = a.x_primal ^ b.x_primal;
    p.z_primal = a.z_primal ^ b.z_primal;
    p.x_dual = a.x_dual ^ b.x_dual;
    p.z_dual = a.z_dual ^ b.z_dual;
    return p;
}

bool pauli_commutes(const SymbolicPauli& a, const SymbolicPauli& b) {
    int s = a.x_primal.dot(b.z_primal) + a.z_primal.dot(b.x_primal) + a.x_dual.dot(b.z_dual) +
            a.z_dual.dot(b.x_dual);
    return (s & 1) == 0;
}

SymbolicPauli hadamard(const SymbolicPauli& p) {
    // H: X(a) Z(b) -> Z(a) X(b) = (-1)^{|a & b|} X(b) Z(a)
    SymbolicPauli h;
    int overlap = p.x_primal.dot(p.z_primal) + p.x_dual.dot(p.z_dual);
    h.phase = (p.phase + 2 * overlap) & 3;
    h.x_primal = p.z_primal;
    h.z_primal = p.x_primal;
    h.x_dual = p.z_dual;
    h.z_dual = p.x_dual;
    return h;
}

double plus_state_expectation(const SymbolicPauli& p) {
    if (p.z_primal.any() || p.z_dual.any()) return 0.0;
    if (p.phase & 1) throw std::invalid_argument("plus_state_expectation: operator is not Hermitian");
    return p.phase == 0 ? 1.0 : -1.0;
}

}  // namespace spt
