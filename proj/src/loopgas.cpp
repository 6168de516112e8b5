#include "spt/loopgas.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spt/stats.hpp"

namespace spt {

LoopConfig LoopConfig::empty(const CubicLattice& lat) {
    return {Chain::zero(lat, 1, Side::Primal), Chain::zero(lat, 2, Side::Dual)};
}

int energy(const LoopConfig& cfg) {
    return 2 * int(cfg.gamma.weight() + cfg.gamma_prime.weight());
}

namespace {

// Graph view of a 1-cycle: nodes are vertices (primal) or cubes (dual).
struct CycleGraph {
    const CubicLattice& lat;
    bool primal;
    std::span<const uint32_t> ends(std::size_t cell) const {
        return primal ? lat.down(1, cell) : lat.up(2, cell);
    }
    std::span<const uint32_t> incident(std::size_t node) const {
        return primal ? lat.up(0, node) : lat.down(3, node);
    }
};

template <class OnLoop>
void walk_extract(const CubicLattice& lat, const Chain& c, OnLoop&& on_loop) {
    bool primal = c.side == Side::Primal;
    if ((primal && c.dim != 1) || (!primal && c.dim != 2))
        throw std::invalid_argument("decompose_loops: expected a primal or dual 1-chain");
    if (!is_cycle(lat, c)) throw std::invalid_argument("decompose_loops: chain is not a cycle");
    CycleGraph g{lat, primal};
    BitVec rem = c.bits;
    std::vector<int> pos(lat.sites(), -1);
    std::vector<uint32_t> path_nodes;
    std::vector<uint32_t> path_cells;

    while (rem.any()) {
        std::size_t e0 = rem.first();
        uint32_t cur = g.ends(e0)[0];
        path_nodes.assign(1, cur);
        path_cells.clear();
        pos[cur] = 0;
        while (true) {
            uint32_t best = std::numeric_limits<uint32_t>::max();
            for (auto e : g.incident(cur))
                if (rem.test(e) && e < best) best = e;
            if (best == std::numeric_limits<uint32_t>::max())
                throw std::logic_error("decompose_loops: walk stuck on an odd vertex");
            rem.reset(best);
            auto ends = g.ends(best);
            uint32_t nxt = ends[0] == cur ? ends[1] : ends[0];
            path_cells.push_back(best);
            if (pos[nxt] >= 0) {
                std::size_t k = std::size_t(pos[nxt]);
                on_loop(std::span<const uint32_t>(path_cells.data() + k, path_cells.size() - k));
                for (std::size_t j = k + 1; j < path_nodes.size(); ++j) pos[path_nodes[j]] = -1;
                path_nodes.resize(k + 1);
                path_cells.resize(k);
                cur = nxt;
                if (path_cells.empty()) {
                    pos[cur] = -1;
                    break;
                }
            } else {
                pos[nxt] = int(path_nodes.size());
                path_nodes.push_back(nxt);
                cur = nxt;
            }
        }
    }
}

}  // namespace

LoopDecomposition decompose_loops(const CubicLattice& lat, const Chain& c) {
    LoopDecomposition out;
    walk_extract(lat, c, [&](std::span<const uint32_t> cells) {
        Chain loop = Chain::zero(lat, c.dim, c.side);
        for (auto e : cells) loop.bits.set(e);
        out.loops.push_back(std::move(loop));
        out.lengths.push_back(int(cells.size()));
        out.largest = std::max(out.largest, int(cells.size()));
    });
    return out;
}

std::vector<int> loop_lengths(const CubicLattice& lat, const Chain& c) {
    std::vector<int> out;
    walk_extract(lat, c, [&](std::span<const uint32_t> cells) { out.push_back(int(cells.size())); });
    return out;
}

int largest_loop(const CubicLattice& lat, const Chain& c) {
    int best = 0;
    walk_extract(lat, c, [&](std::span<const uint32_t> cells) { best = std::max(best, int(cells.size())); });
    return best;
}

double ExactFactor::tail(int alpha) const {
    KahanSum s;
    for (std::size_t i = 0; i < prob.size(); ++i)
        if (largest[i] >= alpha) s.add(prob[i]);
    return s.value();
}

Chain ExactFactor::chain(const CubicLattice& lat, std::size_t i) const {
    int dim = side == Side::Primal ? 1 : 2;
    Chain c = Chain::zero(lat, dim, side);
    c.bits.words()[0] = cycles[i];
    return c;
}

namespace {

ExactFactor enumerate_factor(const CubicLattice& lat, Side side, double beta) {
    auto basis = cycle_space_basis(lat, side);
    std::vector<uint64_t> masks;
    for (auto& b : basis) masks.push_back(b.bits.words()[0]);
    const std::size_t r = masks.size();
    const std::size_t total = std::size_t(1) << r;

    ExactFactor f;
    f.side = side;
    f.cycles.resize(total);
    f.weight.resize(total);
    f.largest.resize(total);
    f.prob.resize(total);

    // Gray-code walk through the span.
    uint64_t cur = 0;
    Chain tmp = Chain::zero(lat, side == Side::Primal ? 1 : 2, side);
    for (std::size_t i = 0; i < total; ++i) {
        if (i > 0) cur ^= masks[std::countr_zero(i)];
        f.cycles[i] = cur;
        f.weight[i] = std::popcount(cur);
        tmp.bits.words()[0] = cur;
        f.largest[i] = largest_loop(lat, tmp);
    }
    KahanSum z;
    for (std::size_t i = 0; i < total; ++i) {
        double w;
        if (f.weight[i] == 0)
            w = 1.0;
        else if (std::isinf(beta))
            w = 0.0;
        else
            w = std::exp(-2.0 * beta * f.weight[i]);
        f.prob[i] = w;
        z.add(w);
    }
    double zv = z.value();
    for (auto& p : f.prob) p /= zv;
    return f;
}

}  // namespace

ExactEnsemble exact_ensemble(const CubicLattice& lat, double beta) {
    if (lat.d() != 2) throw std::invalid_argument("exact_ensemble: only d = 2 is enumerable");
    if (!(beta >= 0.0)) throw std::invalid_argument("exact_ensemble: beta must be >= 0");
    return {enumerate_factor(lat, Side::Primal, beta), enumerate_factor(lat, Side::Dual, beta)};
}

double peierls_tail(double alpha, double beta, int d) {
    const double log5 = std::log(5.0);
    if (!(beta > log5 / 2.0)) throw std::invalid_argument("peierls_tail: requires beta > log(5)/2");
    if (std::isinf(beta)) return 0.0;
    double cprime = (12.0 / 5.0) / (1.0 - std::exp(log5 - 2.0 * beta));
    return cprime * double(d) * d * d * std::exp(-alpha * (2.0 * beta - log5));
}

LoopSampler::LoopSampler(const CubicLattice& lat, double beta, double winding_fraction)
    : lat_(&lat), beta_(beta), wf_(winding_fraction) {
    if (!(beta >= 0.0)) throw std::invalid_argument("LoopSampler: beta must be >= 0");
    if (!(wf_ > 0.0 && wf_ < 1.0)) throw std::invalid_argument("LoopSampler: winding fraction must be in (0,1)");
    const int d = lat.d();
    for (int side = 0; side < 2; ++side) {
        for (int o = 0; o < 3; ++o)
            for (int b = 0; b < d; ++b)
                for (int a = 0; a < d; ++a) {
                    Chain l = side == 0 ? wrapping_line(lat, o, a, b) : dual_wrapping_line(lat, o, a, b);
                    l.bits.for_each([&](std::size_t i) { lines_[side].push_back(uint32_t(i)); });
                }
    }
    dw_offset_ = std::max(d, 4);
    accept_table_.resize(2 * dw_offset_ + 1);
    for (int dw = -dw_offset_; dw <= dw_offset_; ++dw) accept_table_[dw + dw_offset_] = accept_prob(dw);
}

std::size_t LoopSampler::num_moves(Side factor, MoveKind kind) const {
    std::size_t n = lat_->sites();
    if (kind == MoveKind::Plaquette) return 3 * n;
    (void)factor;
    return 3 * std::size_t(lat_->d()) * lat_->d();
}

std::span<const uint32_t> LoopSampler::move_cells(Side factor, MoveKind kind, std::size_t i) const {
    if (kind == MoveKind::Plaquette) return factor == Side::Primal ? lat_->down(2, i) : lat_->up(1, i);
    const auto& v = lines_[factor == Side::Primal ? 0 : 1];
    std::size_t d = std::size_t(lat_->d());
    return {v.data() + i * d, d};
}

double LoopSampler::proposal_prob(Side factor, MoveKind kind) const {
    double n = double(num_moves(factor, kind));
    return (kind == MoveKind::Plaquette ? 1.0 - wf_ : wf_) / n;
}

int LoopSampler::delta_weight(const Chain& c, std::span<const uint32_t> cells) const {
    int on = 0;
    for (auto i : cells) on += c.bits.test(i);
    return int(cells.size()) - 2 * on;
}

double LoopSampler::accept_prob(int dw) const {
    if (dw <= 0) return 1.0;
    if (std::isinf(beta_)) return 0.0;
    return std::min(1.0, std::exp(-beta_ * 2.0 * dw));
}

double LoopSampler::acceptance(const Chain& c, Side factor, MoveKind kind, std::size_t i) const {
    return accept_prob(delta_weight(c, move_cells(factor, kind, i)));
}

double LoopSampler::transition_prob(const Chain& c, Side factor, MoveKind kind, std::size_t i) const {
    return proposal_prob(factor, kind) * acceptance(c, factor, kind, i);
}

void LoopSampler::apply(Chain& c, Side factor, MoveKind kind, std::size_t i) const {
    for (auto j : move_cells(factor, kind, i)) c.bits.flip(j);
}

bool LoopSampler::propose(Chain& c, Side factor, Rng& rng) {
    MoveKind kind = rng.uniform() < wf_ ? MoveKind::Winding : MoveKind::Plaquette;
    std::size_t i = rng.below(num_moves(factor, kind));
    auto cells = move_cells(factor, kind, i);
    int dw = delta_weight(c, cells);
    ++counters_.proposed[int(kind)];
    double a = dw + dw_offset_ >= 0 && dw + dw_offset_ < int(accept_table_.size()) ? accept_table_[dw + dw_offset_]
                                                                                     : accept_prob(dw);
    if (a >= 1.0 || rng.uniform() < a) {
        for (auto j : cells) c.bits.flip(j);
        ++counters_.accepted[int(kind)];
        return true;
    }
    return false;
}

void LoopSampler::step(LoopConfig& cfg, Rng& rng) {
    if (rng.below(2) == 0)
        propose(cfg.gamma, Side::Primal, rng);
    else
        propose(cfg.gamma_prime, Side::Dual, rng);
}

void LoopSampler::sweep(LoopConfig& cfg, Rng& rng) {
    std::size_t n = 3 * lat_->sites();
    for (std::size_t k = 0; k < n; ++k) propose(cfg.gamma, Side::Primal, rng);
    for (std::size_t k = 0; k < n; ++k) propose(cfg.gamma_prime, Side::Dual, rng);
}

LoopConfig mcmc_step(LoopSampler& sampler, LoopConfig cfg, Rng& rng) {
    sampler.step(cfg, rng);
    return cfg;
}

ChainRecord run_chain(const CubicLattice& lat, const EnsembleParams& params, std::size_t chain, uint64_t seed) {
    LoopSampler sampler(lat, params.beta, params.winding_fraction);
    Rng rng(seed);
    LoopConfig cfg = LoopConfig::empty(lat);
    for (std::size_t s = 0; s < params.burn_in; ++s) sampler.sweep(cfg, rng);
    sampler.reset_counters();

    ChainRecord rec;
    rec.d = lat.d();
    rec.beta = params.beta;
    rec.seed = seed;
    rec.chain = chain;
    rec.sweeps = params.sweeps;
    KahanSum e;
    for (std::size_t s = 0; s < params.sweeps; ++s) {
        sampler.sweep(cfg, rng);
        e.add(double(energy(cfg)));
        ++rec.largest_hist[largest_loop(lat, cfg.gamma)];
        ++rec.largest_dual_hist[largest_loop(lat, cfg.gamma_prime)];
    }
    rec.mean_energy = e.mean();
    rec.accept_plaquette = sampler.counters().rate(MoveKind::Plaquette);
    rec.accept_winding = sampler.counters().rate(MoveKind::Winding);
    return rec;
}

}  // namespace spt
