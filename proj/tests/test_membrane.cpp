#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "spt/membrane.hpp"
#include "spt/stats.hpp"

using namespace spt;

namespace {

LoopConfig sample_config(const CubicLattice& lat, double beta, Rng& rng, int sweeps = 3) {
    LoopSampler s(lat, beta, 0.1);
    LoopConfig cfg = LoopConfig::empty(lat);
    for (int k = 0; k < sweeps; ++k) s.sweep(cfg, rng);
    return cfg;
}

}  // namespace

TEST(Membranes, InvariantsAtD8) {
    CubicLattice lat(8);
    auto mp = build_membranes(lat, 0, 4, 2);
    EXPECT_TRUE(dual_boundary(lat, mp.gamma1).empty());
    EXPECT_EQ(boundary(lat, mp.gamma2), mp.s2l ^ mp.s2r);
    EXPECT_EQ(mp.s2l.weight(), 8u);
    EXPECT_EQ(mp.s2r.weight(), 8u);
    EXPECT_TRUE(is_cycle(lat, mp.s2l));
    EXPECT_EQ(homology_class(lat, mp.s2l), (HomologyClass{{0, 1, 0}}));
    EXPECT_EQ(mp.nbhd_left.overlap(mp.nbhd_right), 0u);
    EXPECT_EQ(slice_anticommutation(lat, mp), 1);
}

TEST(Membranes, RejectsBadPlacement) {
    CubicLattice lat(4);
    EXPECT_THROW(build_membranes(lat, 0, 0, 2), std::invalid_argument);
    CubicLattice big(8);
    EXPECT_THROW(build_membranes(big, 0, 4, 9), std::invalid_argument);
    EXPECT_THROW(build_membranes(big, 0, 4, -1), std::invalid_argument);
}

TEST(Membranes, DefaultAlphaClamp) {
    // Zero temperature uses the smallest admissible alpha; high T the largest.
    EXPECT_EQ(default_alpha(INFINITY, 8, 0, 4), 2);
    EXPECT_EQ(default_alpha(0.1, 8, 0, 4), max_alpha(8, 0, 4));
    int a = default_alpha(1.0, 16, 0, 8);
    EXPECT_EQ(a, std::clamp(int(std::ceil(3.0 / (2.0 - std::log(5.0)) * std::log(16.0))), 2, max_alpha(16, 0, 8)));
    EXPECT_EQ(default_alpha(1.0, 16, 0, 8, 1.0), std::max(2, int(std::ceil(std::log(16.0)))));
}

TEST(Eigenvalue, Examples) {
    CubicLattice lat(8);
    auto mp = build_membranes(lat, 0, 4, 4);
    LoopConfig cfg = LoopConfig::empty(lat);
    EXPECT_EQ(membrane_eigenvalue(mp, cfg), std::make_pair(1, 1));

    // The four faces around one edge of S2L form a small dual loop linking it.
    std::size_t e = mp.s2l.bits.first();
    cfg.gamma_prime = dual_boundary(lat, Chain::of(lat, 1, Side::Dual, {e}));
    EXPECT_EQ(membrane_eigenvalue(mp, cfg).second, -1);
    auto rep = local_correct(lat, mp, cfg);
    EXPECT_EQ(rep.flip_left, 1);
    EXPECT_EQ(rep.flip_right, 0);
    EXPECT_EQ(rep.m2_raw, -1);
    EXPECT_EQ(rep.m2, 1);

    // Contractible primal loops never flip m1.
    for (std::size_t f = 0; f < lat.num_cells(2); ++f) {
        LoopConfig c = LoopConfig::empty(lat);
        c.gamma = boundary(lat, Chain::of(lat, 2, Side::Primal, {f}));
        ASSERT_EQ(membrane_eigenvalue(mp, c).first, 1);
    }
}

TEST(Correction, NoExcitationsMeansNoFlips) {
    CubicLattice lat(8);
    auto mp = build_membranes(lat, 0, 4, 2);
    LoopConfig cfg = LoopConfig::empty(lat);
    // A dual loop far from both boundary curves.
    cfg.gamma_prime = dual_boundary(lat, Chain::of(lat, 1, Side::Dual, {lat.cell(1, 1, 5, 0, 2)}));
    auto rep = local_correct(lat, mp, cfg);
    EXPECT_EQ(rep.flip_left + rep.flip_right, 0);
    EXPECT_EQ(rep.m2, rep.m2_raw);
}

TEST(Correction, WrappingLoopIsNotCorrected) {
    CubicLattice lat(8);
    auto mp = build_membranes(lat, 0, 4, 2);
    LoopConfig cfg = LoopConfig::empty(lat);
    // x-directed dual line through y = 3, z = 2 crosses Gamma2 once, away from both curves.
    cfg.gamma_prime = dual_wrapping_line(lat, 0, 3, 2);
    auto rep = local_correct(lat, mp, cfg);
    EXPECT_EQ(rep.m2_raw, -1);
    EXPECT_EQ(rep.m2, -1);
    EXPECT_EQ(rep.m1, 1);
}

TEST(Correction, NeverLowersTheEstimate) {
    CubicLattice lat(6);
    auto mp = build_membranes(lat, 0, 3, default_alpha(0.8, 6, 0, 3));
    Rng rng(21);
    LoopSampler s(lat, 0.8, 0.1);
    LoopConfig cfg = LoopConfig::empty(lat);
    KahanSum raw, corr;
    for (int t = 0; t < 3000; ++t) {
        s.sweep(cfg, rng);
        auto rep = local_correct(lat, mp, cfg);
        EXPECT_EQ(rep.m1, membrane_eigenvalue(mp, cfg).first);
        raw.add(0.5 * (rep.m1 + rep.m2_raw));
        corr.add(0.5 * (rep.m1 + rep.m2));
    }
    EXPECT_GE(corr.mean(), raw.mean());
}

TEST(Deformation, EigenvaluesInvariant) {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        CubicLattice lat(4);
        auto mp = build_membranes(lat, 0, 2, 2);
        LoopConfig cfg = sample_config(lat, 0.6, rng);
        auto before = membrane_eigenvalue(mp, cfg);
        MembranePair moved = mp;
        moved.gamma2 ^= boundary(lat, Chain::of(lat, 3, Side::Primal, {std::size_t(rng.below(lat.sites()))}));
        moved.gamma1 ^= dual_boundary(lat, Chain::of(lat, 0, Side::Dual, {std::size_t(rng.below(lat.sites()))}));
        EXPECT_EQ(membrane_eigenvalue(moved, cfg), before);
    }
}

TEST(OrderParameter, Endpoints) {
    CubicLattice lat2(2);
    auto mp2 = build_membranes(lat2, 0, 1, default_alpha(INFINITY, 2, 0, 1));
    EXPECT_EQ(order_parameter_exact(lat2, mp2, INFINITY).o_corrected, 1.0);
    EXPECT_EQ(product_state_baseline(lat2, mp2), 0.5);
    CubicLattice lat(4);
    auto mp = build_membranes(lat, 0, 2, 2);
    OrderParameterOptions opt;
    opt.n_samples = 64;
    opt.n_chains = 2;
    opt.burn_in = 2;
    EXPECT_EQ(order_parameter(lat, mp, INFINITY, opt).o_corrected, 1.0);
    EXPECT_EQ(product_state_baseline(lat, mp), 0.5);
}

TEST(OrderParameter, ExactRawValueMatchesBruteForce) {
    // Independent oracle: enumerate all 2^24 edge and face subsets at d = 2.
    CubicLattice lat(2);
    const double beta = 0.9;
    auto mp = build_membranes(lat, 0, 1, default_alpha(beta, 2, 0, 1));
    std::vector<uint32_t> star(8, 0), cube(8, 0);
    for (std::size_t v = 0; v < 8; ++v)
        for (auto e : lat.up(0, v)) star[v] ^= 1u << e;
    for (std::size_t c = 0; c < 8; ++c)
        for (auto f : lat.down(3, c)) cube[c] ^= 1u << f;
    uint32_t g1 = uint32_t(mp.gamma1.bits.words()[0]), g2 = uint32_t(mp.gamma2.bits.words()[0]);
    KahanSum zp, zd, m1, m2;
    for (uint32_t m = 0; m < (1u << 24); ++m) {
        bool cyc = true, dcyc = true;
        for (int v = 0; v < 8; ++v) {
            cyc = cyc && !(std::popcount(m & star[v]) & 1);
            dcyc = dcyc && !(std::popcount(m & cube[v]) & 1);
        }
        double w = std::exp(-2.0 * beta * std::popcount(m));
        if (cyc) {
            zp.add(w);
            m1.add(std::popcount(m & g1) & 1 ? -w : w);
        }
        if (dcyc) {
            zd.add(w);
            m2.add(std::popcount(m & g2) & 1 ? -w : w);
        }
    }
    double expect = 0.5 * (m1.value() / zp.value() + m2.value() / zd.value());
    EXPECT_NEAR(order_parameter_exact(lat, mp, beta).o_raw, expect, 1e-12);
}

TEST(OrderParameter, ExactMatchesMonteCarloAtD2) {
    CubicLattice lat(2);
    const double beta = 1.0;
    auto mp = build_membranes(lat, 0, 1, default_alpha(beta, 2, 0, 1));
    auto ex = order_parameter_exact(lat, mp, beta);
    OrderParameterOptions opt;
    opt.n_samples = 64000;
    opt.n_chains = 16;
    opt.burn_in = 200;
    opt.seed = 5;
    auto mc = order_parameter(lat, mp, beta, opt);
    EXPECT_LE(std::abs(mc.o_corrected - ex.o_corrected), 3 * mc.stderr_ + 1e-3);
}

TEST(OrderParameter, NonIncreasingInTemperatureAtD2) {
    CubicLattice lat(2);
    double prev = INFINITY;
    for (double T : {0.4, 0.8, 1.2, 1.6, 2.0, 3.0}) {
        auto mp = build_membranes(lat, 0, 1, default_alpha(1.0 / T, 2, 0, 1));
        double o = order_parameter_exact(lat, mp, 1.0 / T).o_corrected;
        EXPECT_LE(o, prev + 1e-12);
        prev = o;
    }
}

TEST(Localize, BellCorrelationsAtZeroTemperature) {
    CubicLattice lat(4);
    auto mp = build_membranes(lat, 0, 2, 2);
    LoopConfig cfg = LoopConfig::empty(lat);
    for (uint64_t s = 0; s < 20; ++s) {
        Rng fr(s);
        auto c = localize_entanglement(lat, mp, cfg, fr);
        EXPECT_EQ(c.xx, 1);
        EXPECT_EQ(c.zz, 1);
    }
}

TEST(Localize, FrameAndDeformationIndependent) {
    CubicLattice lat(4);
    auto mp = build_membranes(lat, 0, 2, 2);
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        LoopConfig cfg = sample_config(lat, 0.7, rng);
        auto rep = local_correct(lat, mp, cfg);
        MembranePair moved = mp;
        moved.gamma2 ^= boundary(lat, Chain::of(lat, 3, Side::Primal, {lat.vertex(1, 2, 1)}));
        for (uint64_t s = 0; s < 4; ++s) {
            Rng f1(s), f2(s + 100);
            auto a = localize_entanglement(lat, mp, cfg, f1);
            auto b = localize_entanglement(lat, moved, cfg, f2);
            EXPECT_EQ(a.xx, rep.m1);
            EXPECT_EQ(a.zz, rep.m2);
            EXPECT_EQ(b.xx, a.xx);
            EXPECT_EQ(b.zz, a.zz);
        }
    }
}
