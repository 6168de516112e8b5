#include "spt/homology.hpp"

#include <stdexcept>

#include "spt/gf2.hpp"

namespace spt {

namespace {
constexpr std::array<int, 4> kDownStride{0, 2, 4, 6};
constexpr std::array<int, 4> kUpStride{6, 4, 2, 0};

int wrap(int a, int d) {
    a %= d;
    return a < 0 ? a + d : a;
}
}  // namespace

CubicLattice::CubicLattice(int d) : d_(d) {
    if (d < 2) throw std::invalid_argument("CubicLattice: d must be >= 2");
    n_ = std::size_t(d) * d * d;
    for (int k = 0; k < 4; ++k) {
        down_[k].assign(num_cells(k) * kDownStride[k], 0);
        up_[k].assign(num_cells(k) * kUpStride[k], 0);
    }
    std::vector<std::vector<uint8_t>> fill(4);
    for (int k = 0; k < 4; ++k) fill[k].assign(num_cells(k), 0);

    auto link = [&](int k, std::size_t hi, int slot, std::size_t lo) {
        down_[k][hi * kDownStride[k] + slot] = uint32_t(lo);
        auto& f = fill[k - 1][lo];
        up_[k - 1][lo * kUpStride[k - 1] + f] = uint32_t(hi);
        ++f;
    };

    for (std::size_t v = 0; v < n_; ++v) {
        for (int o = 0; o < 3; ++o) {
            std::size_t e = cell(1, o, v);
            link(1, e, 0, v);
            link(1, e, 1, shift(v, o, 1));
        }
        for (int nrm = 0; nrm < 3; ++nrm) {
            auto [a, b] = other_axes(nrm);
            std::size_t f = cell(2, nrm, v);
            link(2, f, 0, cell(1, a, v));
            link(2, f, 1, cell(1, a, shift(v, b, 1)));
            link(2, f, 2, cell(1, b, v));
            link(2, f, 3, cell(1, b, shift(v, a, 1)));
        }
        for (int nrm = 0; nrm < 3; ++nrm) {
            link(3, v, 2 * nrm, cell(2, nrm, v));
            link(3, v, 2 * nrm + 1, cell(2, nrm, shift(v, nrm, 1)));
        }
    }
}

std::size_t CubicLattice::num_cells(int dim) const {
    if (dim == 0 || dim == 3) return n_;
    if (dim == 1 || dim == 2) return 3 * n_;
    throw std::invalid_argument("CubicLattice: dimension out of range");
}

std::size_t CubicLattice::vertex(int x, int y, int z) const {
    return (std::size_t(wrap(z, d_)) * d_ + wrap(y, d_)) * d_ + wrap(x, d_);
}

std::size_t CubicLattice::cell(int dim, int orient, int x, int y, int z) const {
    int o = (dim == 0 || dim == 3) ? 0 : orient;
    return o * n_ + vertex(x, y, z);
}

std::array<int, 4> CubicLattice::coord(int dim, std::size_t idx) const {
    (void)dim;
    int o = int(idx / n_);
    std::size_t v = idx % n_;
    int x = int(v % d_);
    int y = int((v / d_) % d_);
    int z = int(v / (std::size_t(d_) * d_));
    return {o, x, y, z};
}

std::size_t CubicLattice::shift(std::size_t v, int axis, int step) const {
    int c[3] = {int(v % d_), int((v / d_) % d_), int(v / (std::size_t(d_) * d_))};
    c[axis] += step;
    return vertex(c[0], c[1], c[2]);
}

std::span<const uint32_t> CubicLattice::down(int dim, std::size_t idx) const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("down: dimension must be 1..3");
    return {down_[dim].data() + idx * kDownStride[dim], std::size_t(kDownStride[dim])};
}

std::span<const uint32_t> CubicLattice::up(int dim, std::size_t idx) const {
    if (dim < 0 || dim > 2) throw std::invalid_argument("up: dimension must be 0..2");
    return {up_[dim].data() + idx * kUpStride[dim], std::size_t(kUpStride[dim])};
}

Chain Chain::zero(const CubicLattice& lat, int dim, Side side) {
    return Chain{dim, side, BitVec(lat.num_cells(dim))};
}

Chain Chain::of(const CubicLattice& lat, int dim, Side side, const std::vector<std::size_t>& cells) {
    Chain c = zero(lat, dim, side);
    for (auto i : cells) c.bits.flip(i);
    return c;
}

Chain& Chain::operator^=(const Chain& o) {
    if (dim != o.dim) throw std::invalid_argument("Chain: adding chains of different dimension");
    bits ^= o.bits;
    return *this;
}

Chain boundary(const CubicLattice& lat, const Chain& c) {
    if (c.dim < 1) throw std::invalid_argument("boundary: dimension-0 chain has no boundary map");
    Chain out = Chain::zero(lat, c.dim - 1, c.side);
    c.bits.for_each([&](std::size_t i) {
        for (auto j : lat.down(c.dim, i)) out.bits.flip(j);
    });
    return out;
}

Chain dual_boundary(const CubicLattice& lat, const Chain& c) {
    if (c.dim > 2) throw std::invalid_argument("dual_boundary: dimension-3 chain has no dual boundary map");
    Chain out = Chain::zero(lat, c.dim + 1, c.side);
    c.bits.for_each([&](std::size_t i) {
        for (auto j : lat.up(c.dim, i)) out.bits.flip(j);
    });
    return out;
}

bool is_cycle(const CubicLattice& lat, const Chain& c) {
    if (c.side == Side::Dual) return is_dual_cycle(lat, c);
    if (c.dim == 0) return true;
    return boundary(lat, c).empty();
}

bool is_dual_cycle(const CubicLattice& lat, const Chain& c) {
    if (c.dim == 3) return true;
    return dual_boundary(lat, c).empty();
}

HomologyClass homology_class(const CubicLattice& lat, const Chain& c, int offset) {
    if (c.dim != 1 && c.dim != 2) throw std::invalid_argument("homology_class: only 1- and 2-cells carry classes here");
    if (!is_cycle(lat, c)) throw std::invalid_argument("homology_class: chain is not a cycle");
    const int d = lat.d();
    const int s = ((offset % d) + d) % d;
    HomologyClass h;
    // Loops (primal edges, dual faces) are cut by a transverse slice at
    // coordinate s; surfaces (primal faces, dual edges) by a line.
    bool loop = (c.dim == 1) == (c.side == Side::Primal);
    c.bits.for_each([&](std::size_t i) {
        auto [o, x, y, z] = lat.coord(c.dim, i);
        int xyz[3] = {x, y, z};
        if (loop) {
            if (xyz[o] == s) h.w[o] ^= 1;
        } else {
            auto [a, b] = other_axes(o);
            if (xyz[a] == s && xyz[b] == s) h.w[o] ^= 1;
        }
    });
    return h;
}

int intersection_parity(const Chain& a, const Chain& b) {
    if (a.dim != b.dim || a.bits.size() != b.bits.size())
        throw std::invalid_argument("intersection_parity: chains live on different cell sets");
    return a.bits.dot(b.bits);
}

std::vector<Chain> cycle_space_basis(const CubicLattice& lat, Side side) {
    // Primal: ker of edge -> vertex incidence. Dual: ker of face -> cube incidence.
    int dim = side == Side::Primal ? 1 : 2;
    int rows_dim = side == Side::Primal ? 0 : 3;
    std::size_t ncols = lat.num_cells(dim);
    std::vector<BitVec> rows(lat.num_cells(rows_dim), BitVec(ncols));
    for (std::size_t j = 0; j < ncols; ++j) {
        auto inc = side == Side::Primal ? lat.down(1, j) : lat.up(2, j);
        for (auto r : inc) rows[r].flip(j);
    }
    std::vector<Chain> out;
    for (auto& v : gf2_kernel(std::move(rows), ncols)) out.push_back(Chain{dim, side, std::move(v)});
    return out;
}

Chain wrapping_line(const CubicLattice& lat, int o, int a, int b) {
    auto ax = other_axes(o);
    Chain c = Chain::zero(lat, 1, Side::Primal);
    for (int t = 0; t < lat.d(); ++t) {
        int xyz[3];
        xyz[o] = t;
        xyz[ax[0]] = a;
        xyz[ax[1]] = b;
        c.bits.set(lat.cell(1, o, xyz[0], xyz[1], xyz[2]));
    }
    return c;
}

Chain dual_wrapping_line(const CubicLattice& lat, int o, int a, int b) {
    auto ax = other_axes(o);
    Chain c = Chain::zero(lat, 2, Side::Dual);
    for (int t = 0; t < lat.d(); ++t) {
        int xyz[3];
        xyz[o] = t;
        xyz[ax[0]] = a;
        xyz[ax[1]] = b;
        c.bits.set(lat.cell(2, o, xyz[0], xyz[1], xyz[2]));
    }
    return c;
}

}  // namespace spt
