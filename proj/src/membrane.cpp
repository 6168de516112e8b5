#include "spt/membrane.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spt/stats.hpp"

namespace spt {

namespace {

int torus_dist(int a, int period) {
    a %= period;
    if (a < 0) a += period;
    return std::min(a, period - a);
}

int z_separation(int d, int zl, int zr) {
    int D = ((zr - zl) % d + d) % d;
    return std::min(D, d - D);
}

BitVec neighbourhood(const CubicLattice& lat, int x0, int zline, int alpha) {
    const int d = lat.d();
    BitVec out(lat.num_cells(2));
    if (alpha < 1) return out;
    for (std::size_t f = 0; f < lat.num_cells(2); ++f) {
        auto [n, x, y, z] = lat.coord(2, f);
        (void)y;
        int cx = 2 * x + (n != 0);
        int cz = 2 * z + (n != 2);
        int dist = std::max(torus_dist(cx - 2 * x0, 2 * d), torus_dist(cz - 2 * zline, 2 * d));
        if (dist <= alpha - 1) out.set(f);
    }
    return out;
}

}  // namespace

int max_alpha(int d, int z_left, int z_right) {
    return z_separation(d, z_left, z_right);
}

int default_alpha(double beta, int d, int z_left, int z_right, double c_override) {
    const int amax = max_alpha(d, z_left, z_right);
    const double log5 = std::log(5.0);
    double c;
    if (c_override > 0.0)
        c = c_override;
    else if (2.0 * beta > log5)
        c = std::isinf(beta) ? 0.0 : 3.0 / (2.0 * beta - log5);
    else
        return amax;
    int a = int(std::ceil(c * std::log(double(d))));
    if (amax < 2) return amax;
    return std::clamp(a, 2, amax);
}

MembranePair build_membranes(const CubicLattice& lat, int z_left, int z_right, int alpha, int x0, int y0) {
    const int d = lat.d();
    if (alpha < 0) throw std::invalid_argument("build_membranes: alpha must be >= 0");
    int sep = z_separation(d, z_left, z_right);
    if (4 * sep < d || sep == 0)
        throw std::invalid_argument("build_membranes: separation of left and right slices is below d/4");

    MembranePair mp;
    mp.x0 = ((x0 % d) + d) % d;
    mp.y0 = ((y0 % d) + d) % d;
    mp.z_left = ((z_left % d) + d) % d;
    mp.z_right = ((z_right % d) + d) % d;
    mp.alpha = alpha;

    mp.gamma1 = Chain::zero(lat, 1, Side::Dual);
    for (int z = 0; z < d; ++z)
        for (int x = 0; x < d; ++x) mp.gamma1.bits.set(lat.cell(1, 1, x, mp.y0, z));

    mp.gamma2 = Chain::zero(lat, 2, Side::Primal);
    int span = ((mp.z_right - mp.z_left) % d + d) % d;
    for (int k = 0; k < span; ++k)
        for (int y = 0; y < d; ++y) mp.gamma2.bits.set(lat.cell(2, 0, mp.x0, y, mp.z_left + k));

    mp.s2l = Chain::zero(lat, 1, Side::Primal);
    mp.s2r = Chain::zero(lat, 1, Side::Primal);
    for (int y = 0; y < d; ++y) {
        mp.s2l.bits.set(lat.cell(1, 1, mp.x0, y, mp.z_left));
        mp.s2r.bits.set(lat.cell(1, 1, mp.x0, y, mp.z_right));
    }

    mp.nbhd_left = neighbourhood(lat, mp.x0, mp.z_left, alpha);
    mp.nbhd_right = neighbourhood(lat, mp.x0, mp.z_right, alpha);
    if ((mp.nbhd_left & mp.nbhd_right).any())
        throw std::invalid_argument("build_membranes: alpha/2 neighbourhoods of the boundary curves overlap");

    if (!(boundary(lat, mp.gamma2) == (mp.s2l ^ mp.s2r)))
        throw std::logic_error("build_membranes: boundary of Gamma2 is not S2L + S2R");
    if (!dual_boundary(lat, mp.gamma1).empty()) throw std::logic_error("build_membranes: Gamma1 is not closed");
    return mp;
}

SymbolicPauli membrane_operator_1(const CubicLattice& lat, const MembranePair& mp) {
    return SymbolicPauli::X(lat, mp.gamma1) * SymbolicPauli::Z(lat, dual_boundary(lat, mp.gamma1));
}

SymbolicPauli membrane_operator_2(const CubicLattice& lat, const MembranePair& mp) {
    return SymbolicPauli::X(lat, mp.gamma2) * SymbolicPauli::Z(lat, boundary(lat, mp.gamma2));
}

int slice_anticommutation(const CubicLattice& lat, const MembranePair& mp) {
    // Restrictions to the left slice: X on Gamma1's edges at z_left, Z on S2L.
    Chain g1_left = Chain::zero(lat, 1, Side::Primal);
    mp.gamma1.bits.for_each([&](std::size_t e) {
        auto c = lat.coord(1, e);
        if (c[3] == mp.z_left) g1_left.bits.set(e);
    });
    auto a = SymbolicPauli::X(lat, g1_left);
    auto b = SymbolicPauli::Z(lat, mp.s2l);
    return pauli_commutes(a, b) ? 0 : 1;
}

std::pair<int, int> membrane_eigenvalue(const MembranePair& mp, const LoopConfig& cfg) {
    int m1 = intersection_parity(mp.gamma1, cfg.gamma) ? -1 : 1;
    int m2 = intersection_parity(mp.gamma2, cfg.gamma_prime) ? -1 : 1;
    return {m1, m2};
}

CorrectionReport local_correct(const CubicLattice& lat, const MembranePair& mp, const LoopConfig& cfg) {
    CorrectionReport rep;
    auto [m1, m2] = membrane_eigenvalue(mp, cfg);
    rep.m1 = m1;
    rep.m2_raw = m2;

    const BitVec& gp = cfg.gamma_prime.bits;
    BitVec seen(gp.size());
    std::vector<uint32_t> stack;
    std::vector<uint32_t> comp;

    // Components of gamma' that lie entirely inside one neighbourhood are
    // removed by the correction; their crossing parity with Gamma2 is undone.
    auto scan = [&](const BitVec& nb, std::vector<std::size_t>& detected) {
        int flip = 0;
        BitVec hits = gp & nb;
        detected = hits.indices();
        for (auto f0 : detected) {
            if (seen.test(f0)) continue;
            comp.clear();
            stack.assign(1, uint32_t(f0));
            seen.set(f0);
            while (!stack.empty()) {
                uint32_t f = stack.back();
                stack.pop_back();
                comp.push_back(f);
                for (auto cube : lat.up(2, f))
                    for (auto g : lat.down(3, cube))
                        if (gp.test(g) && !seen.test(g)) {
                            seen.set(g);
                            stack.push_back(g);
                        }
            }
            bool inside = true;
            int parity = 0;
            for (auto f : comp) {
                if (!nb.test(f)) inside = false;
                parity ^= int(mp.gamma2.bits.test(f));
            }
            if (inside) flip ^= parity;
        }
        return flip;
    };
    rep.flip_left = scan(mp.nbhd_left, rep.detected_left);
    rep.flip_right = scan(mp.nbhd_right, rep.detected_right);
    rep.m2 = (rep.flip_left ^ rep.flip_right) ? -rep.m2_raw : rep.m2_raw;
    return rep;
}

OrderParameter order_parameter(const CubicLattice& lat, const MembranePair& mp, double beta,
                               const OrderParameterOptions& opt) {
    if (opt.n_chains == 0) throw std::invalid_argument("order_parameter: need at least one chain");
    const std::size_t per_chain = (opt.n_samples + opt.n_chains - 1) / opt.n_chains;
    std::vector<double> raw_means, corr_means;
    for (std::size_t ch = 0; ch < opt.n_chains; ++ch) {
        LoopSampler sampler(lat, beta, opt.winding_fraction);
        Rng rng(derive_seed(opt.seed, ch));
        LoopConfig cfg = LoopConfig::empty(lat);
        for (std::size_t s = 0; s < opt.burn_in; ++s) sampler.sweep(cfg, rng);
        KahanSum raw, corr;
        for (std::size_t s = 0; s < per_chain; ++s) {
            for (std::size_t k = 0; k < opt.sweeps_between; ++k) sampler.sweep(cfg, rng);
            auto rep = local_correct(lat, mp, cfg);
            raw.add(0.5 * (rep.m1 + rep.m2_raw));
            corr.add(0.5 * (rep.m1 + rep.m2));
        }
        raw_means.push_back(raw.mean());
        corr_means.push_back(corr.mean());
    }
    auto r = mean_stderr(raw_means);
    auto c = mean_stderr(corr_means);
    OrderParameter out;
    out.o_raw = r.mean;
    out.stderr_raw = r.stderr_;
    out.o_corrected = c.mean;
    out.stderr_ = c.stderr_;
    out.n_samples = per_chain * opt.n_chains;
    out.alpha = mp.alpha;
    return out;
}

OrderParameter order_parameter_exact(const CubicLattice& lat, const MembranePair& mp, double beta) {
    auto ens = exact_ensemble(lat, beta);
    KahanSum m1, m2raw, m2;
    LoopConfig cfg = LoopConfig::empty(lat);
    for (std::size_t i = 0; i < ens.primal.prob.size(); ++i) {
        if (ens.primal.prob[i] == 0.0) continue;
        Chain g = ens.primal.chain(lat, i);
        m1.add(ens.primal.prob[i] * (intersection_parity(mp.gamma1, g) ? -1.0 : 1.0));
    }
    for (std::size_t i = 0; i < ens.dual.prob.size(); ++i) {
        if (ens.dual.prob[i] == 0.0) continue;
        cfg.gamma_prime = ens.dual.chain(lat, i);
        auto rep = local_correct(lat, mp, cfg);
        m2raw.add(ens.dual.prob[i] * rep.m2_raw);
        m2.add(ens.dual.prob[i] * rep.m2);
    }
    OrderParameter out;
    out.o_raw = 0.5 * (m1.value() + m2raw.value());
    out.o_corrected = 0.5 * (m1.value() + m2.value());
    out.n_samples = 0;
    out.alpha = mp.alpha;
    return out;
}

double product_state_baseline(const CubicLattice& lat, const MembranePair& mp) {
    return 0.5 * (plus_state_expectation(membrane_operator_1(lat, mp)) +
                  plus_state_expectation(membrane_operator_2(lat, mp)));
}

Correlators localize_entanglement(const CubicLattice& lat, const MembranePair& mp, const LoopConfig& cfg,
                                  Rng& byproduct_rng) {
    auto rep = local_correct(lat, mp, cfg);
    auto in_slice = [&](std::size_t e) {
        int z = lat.coord(1, e)[3];
        return z == mp.z_left || z == mp.z_right;
    };
    // Every measured qubit gives a uniformly random outcome. The post-measurement
    // logical value absorbs the product of the outcomes on the membrane's bulk
    // support; multiplying the outcomes back in removes the frame.
    int frame1 = 1;
    mp.gamma1.bits.for_each([&](std::size_t e) {
        if (!in_slice(e) && byproduct_rng.below(2)) frame1 = -frame1;
    });
    int frame2 = 1;
    mp.gamma2.bits.for_each([&](std::size_t) {
        if (byproduct_rng.below(2)) frame2 = -frame2;
    });
    int logical_xx = rep.m1 * frame1;
    int logical_zz = rep.m2 * frame2;
    return {logical_xx * frame1, logical_zz * frame2};
}

}  // namespace spt
