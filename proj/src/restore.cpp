#include "spt/restore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace spt {

double nishimori_p(double T) {
    if (!(T > 0.0)) throw std::invalid_argument("nishimori_p: T must be positive");
    return 1.0 / (1.0 + std::exp(2.0 / T));
}

double nishimori_T(double p) {
    if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("nishimori_T: p must be in (0, 1/2)");
    return 2.0 / std::log((1.0 - p) / p);
}

NoiseSample sample_noise(const CubicLattice& lat, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 0.5)) throw std::invalid_argument("sample_noise: p must be in [0, 1/2]");
    NoiseSample s{Chain::zero(lat, 1, Side::Primal), Chain::zero(lat, 2, Side::Dual), p};
    for (std::size_t e = 0; e < lat.num_cells(1); ++e)
        if (rng.bernoulli(p)) s.c1.bits.set(e);
    for (std::size_t f = 0; f < lat.num_cells(2); ++f)
        if (rng.bernoulli(p)) s.c1p.bits.set(f);
    return s;
}

Syndrome extract_syndrome(const CubicLattice& lat, const NoiseSample& noise) {
    Syndrome s;
    for (auto v : boundary(lat, noise.c1).bits.indices()) s.vertex_defects.push_back(uint32_t(v));
    for (auto c : dual_boundary(lat, noise.c1p).bits.indices()) s.cube_defects.push_back(uint32_t(c));
    return s;
}

int torus_taxicab(const CubicLattice& lat, uint32_t a, uint32_t b) {
    const int d = lat.d();
    auto ca = lat.coord(0, a);
    auto cb = lat.coord(0, b);
    int s = 0;
    for (int i = 1; i <= 3; ++i) {
        int delta = ((cb[i] - ca[i]) % d + d) % d;
        s += std::min(delta, d - delta);
    }
    return s;
}

std::vector<std::pair<int, int>> match_greedy(const CubicLattice& lat, const std::vector<uint32_t>& pts) {
    const int n = int(pts.size());
    if (n % 2) throw std::logic_error("match_greedy: odd number of defects");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return pts[a] < pts[b]; });

    std::vector<std::tuple<int, uint32_t, uint32_t, int, int>> pairs;
    pairs.reserve(std::size_t(n) * (n - 1) / 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            int i = order[a], j = order[b];
            pairs.emplace_back(torus_taxicab(lat, pts[i], pts[j]), pts[i], pts[j], i, j);
        }
    std::sort(pairs.begin(), pairs.end());
    std::vector<char> used(n, 0);
    std::vector<std::pair<int, int>> out;
    for (auto& [dist, ci, cj, i, j] : pairs) {
        (void)dist;
        (void)ci;
        (void)cj;
        if (used[i] || used[j]) continue;
        used[i] = used[j] = 1;
        out.emplace_back(i, j);
        if (int(out.size()) * 2 == n) break;
    }
    return out;
}

std::vector<std::pair<int, int>> match_exact(const CubicLattice& lat, const std::vector<uint32_t>& pts) {
    const int n = int(pts.size());
    if (n % 2) throw std::logic_error("match_exact: odd number of defects");
    if (std::size_t(n) > kExactMatchLimit) throw std::invalid_argument("match_exact: too many defects");
    if (n == 0) return {};
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dist[i][j] = torus_taxicab(lat, pts[i], pts[j]);

    auto best_pairs = match_greedy(lat, pts);
    int best = 0;
    for (auto [i, j] : best_pairs) best += dist[i][j];

    std::vector<std::pair<int, int>> cur;
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int cost) -> void {
        int i = 0;
        while (i < n && used[i]) ++i;
        if (i == n) {
            if (cost < best) {
                best = cost;
                best_pairs = cur;
            }
            return;
        }
        used[i] = 1;
        for (int j = i + 1; j < n; ++j) {
            if (used[j]) continue;
            int c = cost + dist[i][j];
            if (c >= best) continue;
            used[j] = 1;
            cur.emplace_back(i, j);
            self(self, c);
            cur.pop_back();
            used[j] = 0;
        }
        used[i] = 0;
    };
    rec(rec, 0);
    return best_pairs;
}

namespace {

// Shortest path between two torus points, stepping x, then y, then z.
// Primal: vertex to vertex through edges. Dual: cube to cube through faces.
void add_path(const CubicLattice& lat, uint32_t a, uint32_t b, bool primal, BitVec& out) {
    const int d = lat.d();
    std::size_t v = a;
    auto cb = lat.coord(0, b);
    for (int axis = 0; axis < 3; ++axis) {
        auto cv = lat.coord(0, v);
        int delta = ((cb[axis + 1] - cv[axis + 1]) % d + d) % d;
        int step = delta <= d - delta ? 1 : -1;
        int count = step > 0 ? delta : d - delta;
        for (int k = 0; k < count; ++k) {
            std::size_t w = lat.shift(v, axis, step);
            if (primal)
                out.flip(lat.cell(1, axis, step > 0 ? v : w));
            else
                out.flip(lat.cell(2, axis, step > 0 ? w : v));
            v = w;
        }
    }
}

}  // namespace

DecodeResult decode(const CubicLattice& lat, const Syndrome& syn, DecodeMethod method) {
    if (syn.vertex_defects.size() % 2 || syn.cube_defects.size() % 2)
        throw std::logic_error("decode: odd defect count");
    DecodeResult res;
    res.gamma1 = Chain::zero(lat, 1, Side::Primal);
    res.gamma1p = Chain::zero(lat, 2, Side::Dual);
    auto match = [&](const std::vector<uint32_t>& pts) {
        return method == DecodeMethod::Exact ? match_exact(lat, pts) : match_greedy(lat, pts);
    };
    for (auto [i, j] : match(syn.vertex_defects)) {
        add_path(lat, syn.vertex_defects[i], syn.vertex_defects[j], true, res.gamma1.bits);
        res.weight += torus_taxicab(lat, syn.vertex_defects[i], syn.vertex_defects[j]);
    }
    for (auto [i, j] : match(syn.cube_defects)) {
        add_path(lat, syn.cube_defects[i], syn.cube_defects[j], false, res.gamma1p.bits);
        res.weight_dual += torus_taxicab(lat, syn.cube_defects[i], syn.cube_defects[j]);
    }
    return res;
}

void score(const CubicLattice& lat, const NoiseSample& noise, DecodeResult& res, int surface_offset) {
    Chain r = noise.c1 ^ res.gamma1;
    Chain rp = noise.c1p ^ res.gamma1p;
    if (!is_cycle(lat, r) || !is_dual_cycle(lat, rp)) throw std::logic_error("score: residual is not a cycle");
    res.residual = homology_class(lat, r, surface_offset);
    res.residual_dual = homology_class(lat, rp, surface_offset);
    res.success_primal = res.residual.trivial();
    res.success_dual = res.residual_dual.trivial();
    res.success = res.success_primal && res.success_dual;
}

ErrorRate logical_error_rate(const CubicLattice& lat, double p, std::size_t n_trials, DecodeMethod method,
                             uint64_t seed) {
    std::size_t fails = 0, fp = 0, fd = 0;
    for (std::size_t t = 0; t < n_trials; ++t) {
        Rng rng(derive_seed(seed, t));
        auto noise = sample_noise(lat, p, rng);
        auto res = decode(lat, extract_syndrome(lat, noise), method);
        score(lat, noise, res);
        fails += !res.success;
        fp += !res.success_primal;
        fd += !res.success_dual;
    }
    ErrorRate out;
    out.n_trials = n_trials;
    if (n_trials == 0) return out;
    double n = double(n_trials);
    out.fail_rate = double(fails) / n;
    out.fail_primal = double(fp) / n;
    out.fail_dual = double(fd) / n;
    out.stderr_ = std::sqrt(out.fail_rate * (1.0 - out.fail_rate) / n);
    return out;
}

double find_crossing(const std::vector<double>& ps, const std::vector<double>& rate_small,
                     const std::vector<double>& rate_large) {
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        double a = rate_large[i] - rate_small[i];
        double b = rate_large[i + 1] - rate_small[i + 1];
        if (a < 0.0 && b >= 0.0) {
            double t = a / (a - b);
            return ps[i] + t * (ps[i + 1] - ps[i]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace spt
