#include <gtest/gtest.h>

#include <bit>

#include "spt/gf2.hpp"
#include "spt/homology.hpp"
#include "spt/rng.hpp"

using namespace spt;

namespace {

Chain random_chain(const CubicLattice& lat, int dim, Side side, Rng& rng) {
    Chain c = Chain::zero(lat, dim, side);
    for (std::size_t i = 0; i < lat.num_cells(dim); ++i)
        if (rng.bernoulli(0.3)) c.bits.set(i);
    return c;
}

// Vertex/edge incidence built from coordinates only.
std::vector<BitVec> vertex_edge_rows(int d) {
    const std::size_t n = std::size_t(d) * d * d;
    std::vector<BitVec> rows(n, BitVec(3 * n));
    auto vid = [&](int x, int y, int z) { return std::size_t(((z + d) % d) * d * d + ((y + d) % d) * d + (x + d) % d); };
    for (int o = 0; o < 3; ++o)
        for (int z = 0; z < d; ++z)
            for (int y = 0; y < d; ++y)
                for (int x = 0; x < d; ++x) {
                    std::size_t e = o * n + vid(x, y, z);
                    rows[vid(x, y, z)].flip(e);
                    rows[vid(x + (o == 0), y + (o == 1), z + (o == 2))].flip(e);
                }
    return rows;
}

}  // namespace

TEST(Lattice, CellCountsAndIncidence) {
    for (int d : {2, 3, 5}) {
        CubicLattice lat(d);
        std::size_t n = std::size_t(d) * d * d;
        EXPECT_EQ(lat.num_cells(0), n);
        EXPECT_EQ(lat.num_cells(1), 3 * n);
        EXPECT_EQ(lat.num_cells(2), 3 * n);
        EXPECT_EQ(lat.num_cells(3), n);
        for (std::size_t f = 0; f < 3 * n; ++f) EXPECT_EQ(lat.down(2, f).size(), 4u);
        for (std::size_t e = 0; e < 3 * n; ++e) EXPECT_EQ(lat.up(1, e).size(), 4u);
        for (std::size_t c = 0; c < n; ++c) EXPECT_EQ(lat.down(3, c).size(), 6u);
        for (std::size_t v = 0; v < n; ++v) EXPECT_EQ(lat.up(0, v).size(), 6u);
    }
}

TEST(Lattice, FlatIndexLayout) {
    CubicLattice lat(4);
    EXPECT_EQ(lat.cell(1, 2, 1, 2, 3), 2u * 64 + 3 * 16 + 2 * 4 + 1);
    EXPECT_EQ(lat.vertex(3, 0, 1), 16u + 3);
    auto c = lat.coord(2, lat.cell(2, 1, 3, 2, 1));
    EXPECT_EQ(c, (std::array<int, 4>{1, 3, 2, 1}));
}

TEST(Chain, XorGroupLaws) {
    CubicLattice lat(3);
    Rng rng(1);
    Chain a = random_chain(lat, 1, Side::Primal, rng), b = random_chain(lat, 1, Side::Primal, rng),
          c = random_chain(lat, 1, Side::Primal, rng);
    Chain zero = Chain::zero(lat, 1);
    EXPECT_EQ((a ^ b) ^ c, a ^ (b ^ c));
    EXPECT_EQ(a ^ b, b ^ a);
    EXPECT_EQ(a ^ zero, a);
    EXPECT_TRUE((a ^ a).empty());
}

TEST(Boundary, LinearOverXor) {
    Rng rng(2);
    for (int d : {2, 3, 4}) {
        CubicLattice lat(d);
        for (int dim : {1, 2, 3}) {
            Chain a = random_chain(lat, dim, Side::Primal, rng), b = random_chain(lat, dim, Side::Primal, rng);
            EXPECT_EQ(boundary(lat, a ^ b), boundary(lat, a) ^ boundary(lat, b));
        }
        for (int dim : {0, 1, 2}) {
            Chain a = random_chain(lat, dim, Side::Dual, rng), b = random_chain(lat, dim, Side::Dual, rng);
            EXPECT_EQ(dual_boundary(lat, a ^ b), dual_boundary(lat, a) ^ dual_boundary(lat, b));
        }
    }
}

TEST(Boundary, SingleFaceGivesItsFourEdges) {
    CubicLattice lat(3);
    // z-normal face at (1,1,1): x-edges at y=1,2 and y-edges at x=1,2.
    Chain f = Chain::of(lat, 2, Side::Primal, {lat.cell(2, 2, 1, 1, 1)});
    Chain expect = Chain::of(lat, 1, Side::Primal,
                             {lat.cell(1, 0, 1, 1, 1), lat.cell(1, 0, 1, 2, 1), lat.cell(1, 1, 1, 1, 1),
                              lat.cell(1, 1, 2, 1, 1)});
    EXPECT_EQ(boundary(lat, f), expect);
}

TEST(Boundary, RejectsDimensionZero) {
    CubicLattice lat(2);
    EXPECT_THROW(boundary(lat, Chain::zero(lat, 0)), std::invalid_argument);
    EXPECT_THROW(dual_boundary(lat, Chain::zero(lat, 3, Side::Dual)), std::invalid_argument);
}

TEST(Boundary, BoundaryOfBoundaryVanishes) {
    Rng rng(3);
    for (int d = 2; d <= 8; ++d) {
        CubicLattice lat(d);
        for (int dim : {2, 3}) EXPECT_TRUE(boundary(lat, boundary(lat, random_chain(lat, dim, Side::Primal, rng))).empty());
        for (int dim : {0, 1})
            EXPECT_TRUE(dual_boundary(lat, dual_boundary(lat, random_chain(lat, dim, Side::Dual, rng))).empty());
    }
    CubicLattice lat(3);
    EXPECT_TRUE(boundary(lat, boundary(lat, Chain::of(lat, 3, Side::Primal, {5}))).empty());
    EXPECT_TRUE(dual_boundary(lat, dual_boundary(lat, Chain::of(lat, 0, Side::Dual, {5}))).empty());
}

TEST(Boundary, TwoFacesSharingAnEdgeGiveSixEdgeLoop) {
    CubicLattice lat(3);
    // Faces (z-normal at (0,0,0)) and (z-normal at (1,0,0)) share the y-edge at x = 1.
    Chain two = Chain::of(lat, 2, Side::Primal, {lat.cell(2, 2, 0, 0, 0), lat.cell(2, 2, 1, 0, 0)});
    Chain b = boundary(lat, two);
    EXPECT_EQ(b.weight(), 6u);
    EXPECT_FALSE(b.bits.test(lat.cell(1, 1, 1, 0, 0)));
    EXPECT_TRUE(is_cycle(lat, b));
}

TEST(DualBoundary, EdgeHasFourCofaces) {
    CubicLattice lat(4);
    std::size_t e = lat.cell(1, 0, 2, 1, 3);
    Chain c = dual_boundary(lat, Chain::of(lat, 1, Side::Dual, {e}));
    EXPECT_EQ(c.weight(), 4u);
    c.bits.for_each([&](std::size_t f) {
        auto edges = lat.down(2, f);
        EXPECT_NE(std::find(edges.begin(), edges.end(), e), edges.end());
    });
}

TEST(DualBoundary, WrappingLineGivesTube) {
    const int d = 4;
    CubicLattice lat(d);
    Chain line = wrapping_line(lat, 0, 1, 2);
    ASSERT_EQ(line.weight(), std::size_t(d));
    Chain tube = dual_boundary(lat, line);
    EXPECT_EQ(tube.weight(), std::size_t(4 * d));
    // Every tube face contains a line edge and has normal other than x.
    tube.bits.for_each([&](std::size_t f) { EXPECT_NE(lat.coord(2, f)[0], 0); });
}

TEST(Cycle, Examples) {
    CubicLattice lat(4);
    Chain plaquette = boundary(lat, Chain::of(lat, 2, Side::Primal, {7}));
    EXPECT_TRUE(is_cycle(lat, plaquette));
    EXPECT_FALSE(is_cycle(lat, Chain::of(lat, 1, Side::Primal, {7})));
    EXPECT_TRUE(is_cycle(lat, wrapping_line(lat, 2, 0, 3)));
    EXPECT_TRUE(is_dual_cycle(lat, dual_wrapping_line(lat, 1, 2, 2)));
    EXPECT_TRUE(is_dual_cycle(lat, dual_boundary(lat, Chain::of(lat, 1, Side::Dual, {9}))));
}

TEST(HomologyClass, Examples) {
    CubicLattice lat(4);
    Chain plaquette = boundary(lat, Chain::of(lat, 2, Side::Primal, {11}));
    EXPECT_TRUE(homology_class(lat, plaquette).trivial());
    Chain lx = wrapping_line(lat, 0, 1, 1);
    EXPECT_EQ(homology_class(lat, lx), (HomologyClass{{1, 0, 0}}));
    EXPECT_EQ(homology_class(lat, wrapping_line(lat, 2, 0, 0)), (HomologyClass{{0, 0, 1}}));
    Chain pair = lx ^ wrapping_line(lat, 0, 3, 2);
    EXPECT_TRUE(homology_class(lat, pair).trivial());

    // Independently confirm the pair bounds a face chain.
    std::vector<BitVec> cols;
    for (std::size_t f = 0; f < lat.num_cells(2); ++f) cols.push_back(boundary(lat, Chain::of(lat, 2, Side::Primal, {f})).bits);
    Gf2Solver solver(cols, lat.num_cells(1));
    EXPECT_TRUE(solver.solve(pair.bits).has_value());
    EXPECT_FALSE(solver.solve(lx.bits).has_value());

    EXPECT_THROW(homology_class(lat, Chain::of(lat, 1, Side::Primal, {0})), std::invalid_argument);
}

TEST(HomologyClass, Homomorphism) {
    CubicLattice lat(3);
    auto basis = cycle_space_basis(lat, Side::Primal);
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        Chain a = Chain::zero(lat, 1), b = Chain::zero(lat, 1);
        for (const auto& v : basis) {
            if (rng.bernoulli(0.5)) a ^= v;
            if (rng.bernoulli(0.5)) b ^= v;
        }
        EXPECT_EQ(homology_class(lat, a ^ b), homology_class(lat, a) ^ homology_class(lat, b));
    }
}

TEST(Intersection, Examples) {
    CubicLattice lat(3);
    Chain a = Chain::of(lat, 2, Side::Primal, {0, 1}), b = Chain::of(lat, 2, Side::Primal, {2, 3});
    EXPECT_EQ(intersection_parity(a, b), 0);
    EXPECT_EQ(intersection_parity(a, Chain::of(lat, 2, Side::Primal, {1, 2})), 1);
    EXPECT_THROW(intersection_parity(a, Chain::zero(lat, 1)), std::invalid_argument);
}

TEST(Intersection, ClosedSurfaceMeetsDualCycleEvenly) {
    CubicLattice lat(3);
    auto dual_basis = cycle_space_basis(lat, Side::Dual);
    for (std::size_t c = 0; c < lat.num_cells(3); ++c) {
        Chain surf = boundary(lat, Chain::of(lat, 3, Side::Primal, {c}));
        for (const auto& z : dual_basis) EXPECT_EQ(intersection_parity(surf, z), 0);
    }
}

TEST(CycleSpace, RankMatchesIncidenceRank) {
    for (int d : {2, 3, 4}) {
        CubicLattice lat(d);
        std::size_t n = std::size_t(d) * d * d;
        auto primal = cycle_space_basis(lat, Side::Primal);
        auto dual = cycle_space_basis(lat, Side::Dual);
        EXPECT_EQ(primal.size(), 2 * n + 1);
        EXPECT_EQ(dual.size(), 2 * n + 1);
        EXPECT_EQ(3 * n - gf2_rank(vertex_edge_rows(d)), 2 * n + 1);
        for (const auto& c : primal) EXPECT_TRUE(is_cycle(lat, c));
        for (const auto& c : dual) EXPECT_TRUE(is_dual_cycle(lat, c));
        std::vector<BitVec> rows;
        for (const auto& c : primal) rows.push_back(c.bits);
        EXPECT_EQ(gf2_rank(rows), primal.size());
    }
}

TEST(CycleSpace, BruteForceCountAtD2) {
    // 2^24 edge subsets; a subset is a cycle iff every vertex has even degree.
    CubicLattice lat(2);
    std::vector<uint32_t> star(8, 0), cube(8, 0);
    for (std::size_t v = 0; v < 8; ++v)
        for (auto e : lat.up(0, v)) star[v] ^= 1u << e;
    for (std::size_t c = 0; c < 8; ++c)
        for (auto f : lat.down(3, c)) cube[c] ^= 1u << f;
    uint64_t primal = 0, dual = 0;
    for (uint32_t m = 0; m < (1u << 24); ++m) {
        bool ok_p = true, ok_d = true;
        for (int v = 0; v < 8 && (ok_p || ok_d); ++v) {
            ok_p = ok_p && !(std::popcount(m & star[v]) & 1);
            ok_d = ok_d && !(std::popcount(m & cube[v]) & 1);
        }
        primal += ok_p;
        dual += ok_d;
    }
    EXPECT_EQ(primal, 131072u);
    EXPECT_EQ(dual, 131072u);
}

TEST(Gf2, BasisReduceAndMembership) {
    Gf2Basis b(10);
    BitVec e(10);
    EXPECT_TRUE(b.contains(e));
    BitVec u(10), v(10);
    u.set(1), u.set(4);
    v.set(4), v.set(7);
    EXPECT_TRUE(b.insert(u));
    EXPECT_TRUE(b.insert(v));
    EXPECT_FALSE(b.insert(u ^ v));
    EXPECT_TRUE(b.contains(u ^ v));
    EXPECT_TRUE(b.contains(e));
    BitVec w(10);
    w.set(2);
    EXPECT_FALSE(b.contains(w));
    EXPECT_EQ(b.reduce(w ^ u), b.reduce(w));
}

TEST(Gf2, KernelOfRandomMatrices) {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        std::size_t r = 1 + rng.below(30), c = 1 + rng.below(40);
        std::vector<BitVec> rows(r, BitVec(c));
        for (auto& row : rows)
            for (std::size_t j = 0; j < c; ++j)
                if (rng.bernoulli(0.4)) row.set(j);
        auto ker = gf2_kernel(rows, c);
        EXPECT_EQ(ker.size(), c - gf2_rank(rows));
        for (const auto& k : ker)
            for (const auto& row : rows) EXPECT_EQ(row.dot(k), 0);
        EXPECT_EQ(gf2_rank(ker), ker.size());
    }
}

TEST(Gf2, SolverFindsPreimage) {
    Rng rng(6);
    std::vector<BitVec> cols(25, BitVec(20));
    for (auto& col : cols)
        for (std::size_t j = 0; j < 20; ++j)
            if (rng.bernoulli(0.3)) col.set(j);
    Gf2Solver s(cols, 20);
    for (int t = 0; t < 20; ++t) {
        BitVec x(25), rhs(20);
        for (std::size_t j = 0; j < 25; ++j)
            if (rng.bernoulli(0.5)) {
                x.set(j);
                rhs ^= cols[j];
            }
        auto sol = s.solve(rhs);
        ASSERT_TRUE(sol.has_value());
        BitVec back(20);
        sol->for_each([&](std::size_t j) { back ^= cols[j]; });
        EXPECT_EQ(back, rhs);
    }
}
