#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "spt/membrane.hpp"
#include "spt/restore.hpp"

using namespace spt;

namespace {

int taxicab_oracle(int d, std::array<int, 4> a, std::array<int, 4> b) {
    int s = 0;
    for (int k = 1; k <= 3; ++k) {
        int delta = std::abs(a[k] - b[k]);
        s += std::min(delta, d - delta);
    }
    return s;
}

// Minimum total weight over all perfect matchings, by exhaustive recursion.
int brute_force_matching(const CubicLattice& lat, std::vector<uint32_t> pts) {
    if (pts.empty()) return 0;
    int best = std::numeric_limits<int>::max();
    uint32_t a = pts[0];
    for (std::size_t j = 1; j < pts.size(); ++j) {
        std::vector<uint32_t> rest;
        for (std::size_t k = 1; k < pts.size(); ++k)
            if (k != j) rest.push_back(pts[k]);
        best = std::min(best, torus_taxicab(lat, a, pts[j]) + brute_force_matching(lat, rest));
    }
    return best;
}

int matching_weight(const CubicLattice& lat, const std::vector<uint32_t>& pts,
                    const std::vector<std::pair<int, int>>& pairs) {
    std::vector<int> used(pts.size(), 0);
    int w = 0;
    for (auto [i, j] : pairs) {
        ++used[i];
        ++used[j];
        w += torus_taxicab(lat, pts[i], pts[j]);
    }
    for (int u : used) EXPECT_EQ(u, 1);
    return w;
}

std::vector<uint32_t> random_points(const CubicLattice& lat, Rng& rng, std::size_t n) {
    std::vector<uint32_t> pts;
    while (pts.size() < n) {
        uint32_t v = uint32_t(rng.below(lat.sites()));
        if (std::find(pts.begin(), pts.end(), v) == pts.end()) pts.push_back(v);
    }
    return pts;
}

Chain closed_face_plane(const CubicLattice& lat, int normal, int at) {
    Chain c = Chain::zero(lat, 2);
    int d = lat.d();
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            int xyz[3];
            xyz[normal] = at;
            auto oth = other_axes(normal);
            xyz[oth[0]] = a;
            xyz[oth[1]] = b;
            c.bits.set(lat.cell(2, normal, xyz[0], xyz[1], xyz[2]));
        }
    return c;
}

}  // namespace

TEST(Nishimori, Conversion) {
    EXPECT_NEAR(nishimori_p(0.6), 1.0 / (1.0 + std::exp(2.0 / 0.6)), 1e-15);
    EXPECT_NEAR(nishimori_p(0.6), 0.0344, 5e-5);
    EXPECT_LT(nishimori_p(0.01), 1e-80);
    EXPECT_NEAR(nishimori_p(1e6), 0.5, 1e-6);
    EXPECT_THROW(nishimori_p(0.0), std::invalid_argument);
    for (double T : {0.3, 0.6, 1.0, 2.5}) EXPECT_NEAR(nishimori_T(nishimori_p(T)), T, 1e-10);
    // e^{-2 beta} = p / (1 - p)
    double p = nishimori_p(0.8);
    EXPECT_NEAR(std::exp(-2.0 / 0.8), p / (1 - p), 1e-14);
}

TEST(Noise, Statistics) {
    CubicLattice lat(4);
    Rng rng(31);
    auto zero = sample_noise(lat, 0.0, rng);
    EXPECT_TRUE(zero.c1.empty());
    EXPECT_TRUE(zero.c1p.empty());
    EXPECT_THROW(sample_noise(lat, 0.6, rng), std::invalid_argument);

    const int n = 10000;
    double sum = 0, sum2 = 0;
    for (int t = 0; t < n; ++t) {
        auto s = sample_noise(lat, 0.5, rng);
        double w = double(s.c1.weight());
        sum += w;
        sum2 += w * w;
        EXPECT_EQ(s.c1.dim, 1);
        EXPECT_EQ(s.c1p.dim, 2);
    }
    double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, 96.0, 3 * se);

    const double p = 0.1;
    double flips = 0;
    for (int t = 0; t < n; ++t) {
        auto s = sample_noise(lat, p, rng);
        flips += double(s.c1.weight() + s.c1p.weight());
    }
    double cells = double(n) * 2 * lat.num_cells(1);
    EXPECT_NEAR(flips / cells, p, 3 * std::sqrt(p * (1 - p) / cells));
}

TEST(Syndrome, Examples) {
    CubicLattice lat(4);
    NoiseSample n{Chain::of(lat, 1, Side::Primal, {lat.cell(1, 1, 2, 3, 0)}), Chain::zero(lat, 2, Side::Dual), 0.0};
    auto s = extract_syndrome(lat, n);
    std::vector<uint32_t> ends = {uint32_t(lat.vertex(2, 3, 0)), uint32_t(lat.vertex(2, 0, 0))};
    std::sort(ends.begin(), ends.end());
    auto got = s.vertex_defects;
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, ends);
    EXPECT_TRUE(s.cube_defects.empty());

    // L-shaped path (0,0,0) -> (1,0,0) -> (1,1,0).
    n.c1 = Chain::of(lat, 1, Side::Primal, {lat.cell(1, 0, 0, 0, 0), lat.cell(1, 1, 1, 0, 0)});
    got = extract_syndrome(lat, n).vertex_defects;
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, (std::vector<uint32_t>{uint32_t(lat.vertex(0, 0, 0)), uint32_t(lat.vertex(1, 1, 0))}));

    n.c1 = boundary(lat, Chain::of(lat, 2, Side::Primal, {9}));
    EXPECT_TRUE(extract_syndrome(lat, n).vertex_defects.empty());

    // One face error lights the two cubes sharing it.
    n.c1 = Chain::zero(lat, 1);
    n.c1p = Chain::of(lat, 2, Side::Dual, {lat.cell(2, 2, 1, 1, 1)});
    got = extract_syndrome(lat, n).cube_defects;
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, (std::vector<uint32_t>{uint32_t(lat.vertex(1, 1, 0)), uint32_t(lat.vertex(1, 1, 1))}));
}

TEST(Syndrome, EvenAndCycleInvisible) {
    CubicLattice lat(4);
    Rng rng(32);
    auto basis = cycle_space_basis(lat, Side::Primal);
    auto dbasis = cycle_space_basis(lat, Side::Dual);
    for (int t = 0; t < 100; ++t) {
        auto n = sample_noise(lat, 0.05, rng);
        auto s = extract_syndrome(lat, n);
        EXPECT_EQ(s.vertex_defects.size() % 2, 0u);
        EXPECT_EQ(s.cube_defects.size() % 2, 0u);
        NoiseSample m = n;
        m.c1 ^= basis[rng.below(basis.size())];
        m.c1p ^= dbasis[rng.below(dbasis.size())];
        auto s2 = extract_syndrome(lat, m);
        EXPECT_EQ(s2.vertex_defects, s.vertex_defects);
        EXPECT_EQ(s2.cube_defects, s.cube_defects);
    }
}

TEST(Taxicab, MatchesCoordinateFormula) {
    CubicLattice lat(5);
    Rng rng(33);
    for (int t = 0; t < 500; ++t) {
        uint32_t a = uint32_t(rng.below(lat.sites())), b = uint32_t(rng.below(lat.sites()));
        EXPECT_EQ(torus_taxicab(lat, a, b), taxicab_oracle(5, lat.coord(0, a), lat.coord(0, b)));
    }
}

TEST(Matching, ExactAgreesWithBruteForce) {
    CubicLattice lat(4);
    Rng rng(34);
    for (int t = 0; t < 300; ++t) {
        auto pts = random_points(lat, rng, 2 * (1 + rng.below(4)));
        EXPECT_EQ(matching_weight(lat, pts, match_exact(lat, pts)), brute_force_matching(lat, pts));
    }
}

TEST(Matching, ExactNeverWorseThanGreedy) {
    CubicLattice lat(4);
    Rng rng(35);
    for (int t = 0; t < 10000; ++t) {
        auto pts = random_points(lat, rng, 2 * (1 + rng.below(5)));
        int we = matching_weight(lat, pts, match_exact(lat, pts));
        int wg = matching_weight(lat, pts, match_greedy(lat, pts));
        ASSERT_LE(we, wg);
    }
    auto many = random_points(lat, rng, 16);
    EXPECT_THROW(match_exact(lat, many), std::invalid_argument);
    EXPECT_THROW(match_greedy(lat, random_points(lat, rng, 3)), std::logic_error);
}

TEST(Matching, GreedyTieBreakIsDeterministic) {
    CubicLattice lat(6);
    // Four collinear points at equal spacing: pairs (0,1) and (2,3) tie with (1,2).
    std::vector<uint32_t> pts = {uint32_t(lat.vertex(0, 0, 0)), uint32_t(lat.vertex(1, 0, 0)),
                                 uint32_t(lat.vertex(2, 0, 0)), uint32_t(lat.vertex(3, 0, 0))};
    auto a = match_greedy(lat, pts), b = match_greedy(lat, pts);
    EXPECT_EQ(a, b);
    EXPECT_EQ(matching_weight(lat, pts, a), 2);
}

TEST(Decode, EmptyAndSingleEdge) {
    CubicLattice lat(4);
    Syndrome empty;
    for (auto m : {DecodeMethod::Greedy, DecodeMethod::Exact}) {
        auto r = decode(lat, empty, m);
        EXPECT_TRUE(r.gamma1.empty());
        EXPECT_TRUE(r.gamma1p.empty());
        EXPECT_TRUE(r.success);
    }
    NoiseSample n{Chain::of(lat, 1, Side::Primal, {lat.cell(1, 2, 1, 1, 1)}),
                  Chain::of(lat, 2, Side::Dual, {lat.cell(2, 0, 3, 2, 1)}), 0.0};
    auto r = decode(lat, extract_syndrome(lat, n), DecodeMethod::Greedy);
    score(lat, n, r);
    EXPECT_EQ(r.gamma1, n.c1);
    EXPECT_EQ(r.gamma1p, n.c1p);
    EXPECT_TRUE(r.residual.trivial());
    EXPECT_TRUE(r.success);
}

TEST(Decode, ResidualIsCycleAndVerdictBasisIndependent) {
    CubicLattice lat(6);
    Rng rng(36);
    for (int t = 0; t < 400; ++t) {
        auto n = sample_noise(lat, 0.03, rng);
        auto syn = extract_syndrome(lat, n);
        for (auto m : {DecodeMethod::Greedy}) {
            auto r = decode(lat, syn, m);
            EXPECT_TRUE(is_cycle(lat, n.c1 ^ r.gamma1));
            EXPECT_TRUE(is_dual_cycle(lat, n.c1p ^ r.gamma1p));
            auto r0 = r, r2 = r;
            score(lat, n, r0, 0);
            score(lat, n, r2, 2);
            EXPECT_EQ(r0.success, r2.success);
            EXPECT_EQ(r0.residual, r2.residual);
            EXPECT_EQ(r0.success, r0.success_primal && r0.success_dual);
        }
    }
}

TEST(Decode, SuccessfulResidualsLeaveClosedMembranesAlone) {
    // A trivial residual meets every closed membrane evenly, so M1 and any
    // closed M2 read +1.
    CubicLattice lat(6);
    auto mp = build_membranes(lat, 0, 3, 2);
    Rng rng(37);
    int successes = 0;
    for (int t = 0; t < 300; ++t) {
        auto n = sample_noise(lat, 0.02, rng);
        auto r = decode(lat, extract_syndrome(lat, n), DecodeMethod::Greedy);
        score(lat, n, r);
        if (!r.success) continue;
        ++successes;
        LoopConfig cfg{n.c1 ^ r.gamma1, n.c1p ^ r.gamma1p};
        EXPECT_EQ(membrane_eigenvalue(mp, cfg).first, 1);
        for (int o = 0; o < 3; ++o) EXPECT_EQ(intersection_parity(closed_face_plane(lat, o, 1), cfg.gamma_prime), 0);
    }
    EXPECT_GT(successes, 100);
}

TEST(ErrorRate, ZeroNoiseAndDeterminism) {
    CubicLattice lat(4);
    auto z = logical_error_rate(lat, 0.0, 200, DecodeMethod::Greedy, 1);
    EXPECT_EQ(z.fail_rate, 0.0);
    EXPECT_EQ(z.n_trials, 200u);
    auto a = logical_error_rate(lat, 0.03, 300, DecodeMethod::Greedy, 9);
    auto b = logical_error_rate(lat, 0.03, 300, DecodeMethod::Greedy, 9);
    EXPECT_EQ(a.fail_rate, b.fail_rate);
    EXPECT_EQ(a.fail_primal, b.fail_primal);
    EXPECT_GE(a.fail_rate, std::max(a.fail_primal, a.fail_dual));
}

TEST(ErrorRate, ExactDecoderAtLowNoise) {
    CubicLattice lat(4);
    auto g = logical_error_rate(lat, 0.005, 2000, DecodeMethod::Greedy, 3);
    auto e = logical_error_rate(lat, 0.005, 2000, DecodeMethod::Exact, 3);
    EXPECT_LE(e.fail_rate, g.fail_rate + 3 * g.stderr_ + 1e-9);
}

TEST(Crossing, LinearInterpolation) {
    std::vector<double> ps = {0.01, 0.02, 0.03};
    EXPECT_NEAR(find_crossing(ps, {0.2, 0.3, 0.4}, {0.1, 0.3, 0.6}), 0.02, 1e-12);
    EXPECT_NEAR(find_crossing(ps, {0.2, 0.3, 0.4}, {0.1, 0.2, 0.6}), 0.02 + 0.01 / 3.0, 1e-12);
    EXPECT_TRUE(std::isnan(find_crossing(ps, {0.2, 0.3, 0.4}, {0.1, 0.2, 0.3})));
}
