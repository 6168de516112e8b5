#include "spt/disentangle2d.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace spt {

namespace {

constexpr int kOffsets[6][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}};

}  // namespace

TriLattice::TriLattice(int L) : L_(L) {
    if (L < 3) throw std::invalid_argument("TriLattice: L must be at least 3");
    nbr_.resize(size());
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x)
            for (int k = 0; k < 6; ++k) nbr_[index(x, y)][k] = index(x + kOffsets[k][0], y + kOffsets[k][1]);

    colour_.assign(size(), -1);
    if (L % 3 == 0) {
        for (uint32_t v = 0; v < size(); ++v) colour_[v] = (x(v) + y(v)) % 3;
        ncolours_ = 3;
    } else {
        for (uint32_t v = 0; v < size(); ++v) {
            int c = 0;
            while (std::any_of(nbr_[v].begin(), nbr_[v].end(), [&](uint32_t u) { return colour_[u] == c; })) ++c;
            colour_[v] = c;
            ncolours_ = std::max(ncolours_, c + 1);
        }
    }
}

uint32_t TriLattice::index(int x, int y) const {
    x = ((x % L_) + L_) % L_;
    y = ((y % L_) + L_) % L_;
    return uint32_t(y * L_ + x);
}

bool TriLattice::adjacent(uint32_t a, uint32_t b) const {
    const auto& n = nbr_[a];
    return std::find(n.begin(), n.end(), b) != n.end();
}

std::array<std::pair<uint32_t, uint32_t>, 6> TriLattice::link1(uint32_t v) const {
    std::array<std::pair<uint32_t, uint32_t>, 6> out;
    for (int k = 0; k < 6; ++k) out[k] = {nbr_[v][k], nbr_[v][(k + 1) % 6]};
    return out;
}

double sink_probability(double beta) {
    if (!(beta >= 0.0)) throw std::invalid_argument("sink_probability: beta must be >= 0");
    if (std::isinf(beta)) return 0.0;
    return 2.0 / (std::exp(2.0 * beta) + 1.0);
}

std::size_t SinkConfig::weight() const { return std::size_t(std::count(k.begin(), k.end(), uint8_t(1))); }

SinkConfig sample_sinks(const TriLattice& lat, double beta, Rng& rng) {
    double p = sink_probability(beta);
    SinkConfig cfg;
    cfg.L = lat.L();
    cfg.k.resize(lat.size());
    for (auto& kv : cfg.k) kv = rng.bernoulli(p) ? 0 : 1;
    return cfg;
}

double config_probability(const SinkConfig& cfg, double p) {
    double w = double(cfg.weight());
    double n = double(cfg.k.size());
    return std::pow(1.0 - p, w) * std::pow(p, n - w);
}

GridPartition::GridPartition(int L, int l) : L_(L), l_(l) {
    if (l < 1 || l > L) throw std::invalid_argument("GridPartition: square side must be in [1, L]");
    nsq_ = std::max(1, L / l);
}

std::size_t GridPartition::square_of(int x, int y) const {
    int sx = std::min(x / l_, nsq_ - 1);
    int sy = std::min(y / l_, nsq_ - 1);
    return std::size_t(sy) * nsq_ + sx;
}

std::vector<uint32_t> GridPartition::members(const TriLattice& lat, std::size_t sq) const {
    int sx = int(sq % nsq_), sy = int(sq / nsq_);
    std::vector<uint32_t> out;
    for (int y = start(sy); y < end(sy); ++y)
        for (int x = start(sx); x < end(sx); ++x) out.push_back(lat.index(x, y));
    return out;
}

std::size_t GridPartition::square_size(std::size_t sq) const {
    int sx = int(sq % nsq_), sy = int(sq / nsq_);
    return std::size_t(end(sx) - start(sx)) * std::size_t(end(sy) - start(sy));
}

double default_sink_c(double beta) {
    double p = sink_probability(beta);
    if (p >= 1.0) return 0.0;
    if (p <= 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * (-2.0 / std::log(1.0 - p));
}

int grid_side(int L, double c) {
    if (!(c > 0.0)) return 1;
    if (std::isinf(c)) return L;
    int l = int(std::ceil(std::sqrt(c * std::log(double(L)))));
    return std::clamp(l, 1, L);
}

bool is_valid(const SinkConfig& cfg, const GridPartition& grid) {
    if (cfg.L != grid.L()) throw std::invalid_argument("is_valid: lattice size mismatch");
    std::vector<char> has_sink(grid.num_squares(), 0);
    for (std::size_t v = 0; v < cfg.k.size(); ++v)
        if (cfg.k[v] == 0) has_sink[grid.square_of(int(v % cfg.L), int(v / cfg.L))] = 1;
    return std::all_of(has_sink.begin(), has_sink.end(), [](char c) { return c != 0; });
}

double valid_probability(const GridPartition& grid, double p) {
    double out = 1.0;
    for (std::size_t s = 0; s < grid.num_squares(); ++s) out *= 1.0 - std::pow(1.0 - p, double(grid.square_size(s)));
    return out;
}

double valid_union_bound(const GridPartition& grid, double p) {
    double fail = 0.0;
    for (std::size_t s = 0; s < grid.num_squares(); ++s) fail += std::pow(1.0 - p, double(grid.square_size(s)));
    return 1.0 - fail;
}

int max_square_diameter(const TriLattice& lat, const GridPartition& grid) {
    int best = 0;
    std::vector<int> local(lat.size(), -1);
    for (std::size_t s = 0; s < grid.num_squares(); ++s) {
        auto mem = grid.members(lat, s);
        for (std::size_t i = 0; i < mem.size(); ++i) local[mem[i]] = int(i);
        std::vector<int> dist(mem.size());
        std::deque<uint32_t> q;
        for (auto src : mem) {
            std::fill(dist.begin(), dist.end(), -1);
            dist[local[src]] = 0;
            q.assign(1, src);
            while (!q.empty()) {
                uint32_t u = q.front();
                q.pop_front();
                for (auto n : lat.neighbours(u)) {
                    int ln = local[n];
                    if (ln < 0 || dist[ln] >= 0) continue;
                    dist[ln] = dist[local[u]] + 1;
                    best = std::max(best, dist[ln]);
                    q.push_back(n);
                }
            }
            if (std::find(dist.begin(), dist.end(), -1) != dist.end())
                throw std::logic_error("max_square_diameter: square is disconnected");
        }
        for (auto v : mem) local[v] = -1;
    }
    return best;
}

std::size_t Circuit::num_gates() const {
    std::size_t n = 0;
    for (auto& l : layers) n += l.size();
    return n;
}

Circuit build_circuit(const TriLattice& lat, const SinkConfig& cfg, const GridPartition& grid,
                      const CircuitOptions& opt) {
    if (cfg.L != lat.L() || grid.L() != lat.L()) throw std::invalid_argument("build_circuit: lattice size mismatch");
    if (!is_valid(cfg, grid)) throw std::invalid_argument("build_circuit: configuration is not valid");
    const std::size_t N = lat.size();
    Circuit c;
    for (std::size_t s = 0; s < grid.num_squares(); ++s) {
        auto mem = grid.members(lat, s);
        std::sort(mem.begin(), mem.end());
        for (auto v : mem)
            if (cfg.k[v] == 0) {
                c.sinks.push_back(v);
                break;
            }
    }
    std::sort(c.sinks.begin(), c.sinks.end());

    c.dist.assign(N, -1);
    std::deque<uint32_t> q;
    for (auto s : c.sinks) {
        c.dist[s] = 0;
        q.push_back(s);
    }
    while (!q.empty()) {
        uint32_t u = q.front();
        q.pop_front();
        for (auto n : lat.neighbours(u))
            if (c.dist[n] < 0) {
                c.dist[n] = c.dist[u] + 1;
                q.push_back(n);
            }
    }

    c.partner.assign(N, -1);
    std::vector<std::vector<uint32_t>> shells;
    for (uint32_t v = 0; v < N; ++v) {
        if (cfg.k[v] == 0) continue;
        int j = c.dist[v];
        uint32_t best = std::numeric_limits<uint32_t>::max();
        for (auto n : lat.neighbours(v))
            if (c.dist[n] == j - 1) best = std::min(best, n);
        c.partner[v] = int(best);
        c.max_shell = std::max(c.max_shell, j);
        if (int(shells.size()) <= j) shells.resize(j + 1);
        shells[j].push_back(v);
    }

    auto emit = [&](GateKind kind, int j) {
        auto vs = shells[j];
        std::stable_sort(vs.begin(), vs.end(), [&](uint32_t a, uint32_t b) { return lat.colour(a) < lat.colour(b); });
        std::size_t first = c.layers.size();
        int cur_colour = -1;
        std::vector<std::vector<char>> used;
        for (auto v : vs) {
            if (lat.colour(v) != cur_colour) {
                cur_colour = lat.colour(v);
                first = c.layers.size();
                used.clear();
            }
            uint32_t w = uint32_t(c.partner[v]);
            std::size_t slot = 0;
            while (slot < used.size() && (used[slot][v] || used[slot][w])) ++slot;
            if (slot == used.size()) {
                used.emplace_back(N, 0);
                c.layers.emplace_back();
                c.layer_shell.push_back(j);
            }
            used[slot][v] = used[slot][w] = 1;
            c.layers[first + slot].push_back({kind, v, w});
        }
    };
    for (int j = 1; j <= c.max_shell; ++j) emit(GateKind::U, j);
    if (opt.w_outer_first)
        for (int j = c.max_shell; j >= 1; --j) emit(GateKind::W, j);
    else
        for (int j = 1; j <= c.max_shell; ++j) emit(GateKind::W, j);
    return c;
}

std::vector<Term> imperfect_hamiltonian(const SinkConfig& cfg) {
    std::vector<Term> out;
    for (uint32_t v = 0; v < cfg.k.size(); ++v)
        if (cfg.k[v]) out.push_back({TermKind::H, v, v, -1});
    return out;
}

std::vector<Term> target_hamiltonian(const SinkConfig& cfg) {
    std::vector<Term> out;
    for (uint32_t v = 0; v < cfg.k.size(); ++v)
        if (cfg.k[v]) out.push_back({TermKind::X, v, v, 1});
    return out;
}

namespace {

enum class Rel { Commute, Anti, NonPauli };

struct Piece {
    TermKind kind;
    uint32_t a, b;
};

bool in_pair(uint32_t c, const Piece& zz) { return (c == zz.a) != (c == zz.b); }

Rel relate(const TriLattice& lat, const Piece& s, const Piece& t) {
    if (s.kind == t.kind) return Rel::Commute;
    if (s.kind == TermKind::ZZ) return relate(lat, t, s);
    if (t.kind == TermKind::ZZ) {
        // h_a and X_a each hold a single X on a; the CZs are diagonal.
        return in_pair(s.a, t) ? Rel::Anti : Rel::Commute;
    }
    // H vs X
    const Piece& h = s.kind == TermKind::H ? s : t;
    const Piece& x = s.kind == TermKind::H ? t : s;
    if (h.a == x.a) return Rel::Commute;
    return lat.adjacent(h.a, x.a) ? Rel::NonPauli : Rel::Commute;
}

Rel relate_gate(const TriLattice& lat, const Term& t, const Gate& g) {
    Piece tp{t.kind, t.a, t.b};
    Piece p1{g.kind == GateKind::U ? TermKind::H : TermKind::X, g.v, g.v};
    Piece p2{TermKind::ZZ, g.v, g.w};
    Rel r1 = relate(lat, tp, p1), r2 = relate(lat, tp, p2);
    if (r1 == Rel::NonPauli || r2 == Rel::NonPauli) return Rel::NonPauli;
    return (r1 == Rel::Anti) != (r2 == Rel::Anti) ? Rel::Anti : Rel::Commute;
}

std::string describe(const Gate& g) {
    return std::string(g.kind == GateKind::U ? "U" : "W") + "(" + std::to_string(g.v) + "," + std::to_string(g.w) + ")";
}

}  // namespace

std::vector<Term> conjugate_hamiltonian(const TriLattice& lat, const SinkConfig& cfg, const Circuit& circuit) {
    const std::size_t N = lat.size();
    if (cfg.k.size() != N) throw std::invalid_argument("conjugate_hamiltonian: lattice size mismatch");
    std::vector<Term> terms(N);
    std::vector<char> present(N, 0);
    for (auto& t : imperfect_hamiltonian(cfg)) {
        terms[t.a] = t;
        present[t.a] = 1;
    }

    std::vector<char> used(N, 0);
    std::vector<uint32_t> nearby;
    auto ball2 = [&](uint32_t c) {
        nearby.push_back(c);
        for (auto n : lat.neighbours(c)) {
            nearby.push_back(n);
            for (auto m : lat.neighbours(n)) nearby.push_back(m);
        }
    };

    for (const auto& layer : circuit.layers) {
        for (const auto& g : layer) {
            if (g.v >= N || g.w >= N || g.v == g.w) throw SideConditionError("gate " + describe(g) + " is malformed");
            if (used[g.v] || used[g.w])
                throw SideConditionError("gate " + describe(g) + " overlaps another gate in its layer");
            used[g.v] = used[g.w] = 1;
        }
        for (const auto& g : layer) used[g.v] = used[g.w] = 0;

        for (const auto& g : layer) {
            nearby.clear();
            ball2(g.v);
            ball2(g.w);
            std::sort(nearby.begin(), nearby.end());
            nearby.erase(std::unique(nearby.begin(), nearby.end()), nearby.end());
            for (auto o : nearby) {
                if (!present[o]) continue;
                Term& t = terms[o];
                Rel r = relate_gate(lat, t, g);
                if (r == Rel::Commute) continue;
                if (r == Rel::NonPauli)
                    throw SideConditionError("gate " + describe(g) + " maps the term at " + std::to_string(o) +
                                             " outside the Pauli rules");
                if (g.kind == GateKind::U && t.kind == TermKind::H && t.a == g.v) {
                    t = {TermKind::ZZ, g.v, g.w, -t.sign};
                } else if (g.kind == GateKind::W && t.kind == TermKind::ZZ && t.a == g.v && t.b == g.w) {
                    t = {TermKind::X, g.v, g.v, t.sign};
                } else {
                    throw SideConditionError("gate " + describe(g) + " anti-commutes with the term at " +
                                             std::to_string(o));
                }
            }
        }
    }
    std::vector<Term> out;
    for (uint32_t v = 0; v < N; ++v)
        if (present[v]) out.push_back(terms[v]);
    return out;
}

}  // namespace spt
