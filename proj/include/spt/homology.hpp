#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "spt/bitvec.hpp"

namespace spt {

// Dual cells are stored as their primal counterparts: a dual k-chain lives on
// primal (3-k)-cells. Chain::dim is always the primal cell dimension.
enum class Side { Primal, Dual };

// Periodic d x d x d cubic lattice.
// Flat index of a cell = orientation * d^3 + z * d^2 + y * d + x.
// Edges: orientation = direction. Faces: orientation = normal direction.
class CubicLattice {
public:
    explicit CubicLattice(int d);

    int d() const { return d_; }
    std::size_t sites() const { return n_; }
    std::size_t num_cells(int dim) const;

    std::size_t vertex(int x, int y, int z) const;
    std::size_t cell(int dim, int orient, int x, int y, int z) const;
    std::size_t cell(int /*dim*/, int orient, std::size_t v) const { return orient * n_ + v; }
    std::array<int, 4> coord(int dim, std::size_t idx) const;  // {orient, x, y, z}
    std::size_t shift(std::size_t v, int axis, int step) const;

    // Cells of dimension dim-1 in the boundary of a dim-cell.
    std::span<const uint32_t> down(int dim, std::size_t idx) const;
    // Cells of dimension dim+1 having the dim-cell in their boundary.
    std::span<const uint32_t> up(int dim, std::size_t idx) const;

private:
    int d_;
    std::size_t n_;
    std::array<std::vector<uint32_t>, 4> down_;
    std::array<std::vector<uint32_t>, 4> up_;
};

// The two axes other than o, in increasing order.
inline std::array<int, 2> other_axes(int o) {
    if (o == 0) return {1, 2};
    if (o == 1) return {0, 2};
    return {0, 1};
}

struct Chain {
    int dim = 0;
    Side side = Side::Primal;
    BitVec bits;

    static Chain zero(const CubicLattice& lat, int dim, Side side = Side::Primal);
    static Chain of(const CubicLattice& lat, int dim, Side side, const std::vector<std::size_t>& cells);

    std::size_t weight() const { return bits.count(); }
    bool empty() const { return bits.none(); }
    Chain& operator^=(const Chain& o);
    friend Chain operator^(Chain a, const Chain& b) { return a ^= b; }
    friend bool operator==(const Chain& a, const Chain& b) {
        return a.dim == b.dim && a.side == b.side && a.bits == b.bits;
    }
};

struct HomologyClass {
    std::array<int, 3> w{0, 0, 0};

    bool trivial() const { return w[0] == 0 && w[1] == 0 && w[2] == 0; }
    HomologyClass operator^(const HomologyClass& o) const {
        return {{w[0] ^ o.w[0], w[1] ^ o.w[1], w[2] ^ o.w[2]}};
    }
    friend bool operator==(const HomologyClass&, const HomologyClass&) = default;
};

Chain boundary(const CubicLattice& lat, const Chain& c);
Chain dual_boundary(const CubicLattice& lat, const Chain& c);

bool is_cycle(const CubicLattice& lat, const Chain& c);
bool is_dual_cycle(const CubicLattice& lat, const Chain& c);

// Winding parities against coordinate test surfaces placed at `offset`.
// Handles primal 1-cycles, dual 1-cycles, primal 2-cycles and dual 2-cycles.
HomologyClass homology_class(const CubicLattice& lat, const Chain& c, int offset = 0);

int intersection_parity(const Chain& a, const Chain& b);

// GF(2) basis of Z_1 (primal, edges) or Z_1* (dual, faces).
std::vector<Chain> cycle_space_basis(const CubicLattice& lat, Side side);

// Straight o-directed edge line through transverse coordinates (a, b) of other_axes(o).
Chain wrapping_line(const CubicLattice& lat, int o, int a, int b);
// Straight o-directed dual line: o-normal faces at transverse (a, b).
Chain dual_wrapping_line(const CubicLattice& lat, int o, int a, int b);

}  // namespace spt
