// Explicit-matrix checks for the 2D model. Only used on a handful of qubits.
#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

#include "spt/disentangle2d.hpp"

namespace spt {

namespace {

using Mat = Eigen::MatrixXd;

Mat z_string(int n, const std::vector<int>& sites) {
    const std::size_t dim = std::size_t(1) << n;
    Mat m = Mat::Zero(dim, dim);
    for (std::size_t s = 0; s < dim; ++s) {
        int par = 0;
        for (int q : sites) par ^= int((s >> q) & 1);
        m(s, s) = par ? -1.0 : 1.0;
    }
    return m;
}

Mat x_string(int n, const std::vector<int>& sites) {
    const std::size_t dim = std::size_t(1) << n;
    std::size_t mask = 0;
    for (int q : sites) mask ^= std::size_t(1) << q;
    Mat m = Mat::Zero(dim, dim);
    for (std::size_t s = 0; s < dim; ++s) m(s ^ mask, s) = 1.0;
    return m;
}

// h_v = X_v prod_{(a,b) in link} CZ_ab
Mat h_term(const Patch& p, int v) {
    const std::size_t dim = std::size_t(1) << p.n;
    Mat m = Mat::Zero(dim, dim);
    for (std::size_t s = 0; s < dim; ++s) {
        int par = 0;
        for (auto [a, b] : p.link[v]) par ^= int((s >> a) & (s >> b) & 1);
        m(s ^ (std::size_t(1) << v), s) = par ? -1.0 : 1.0;
    }
    return m;
}

double err(const Mat& a, const Mat& b) { return (a - b).norm(); }

struct Checker {
    double tol;
    DenseReport& rep;
    void operator()(double e, const std::string& what) {
        ++rep.checks;
        rep.max_error = std::max(rep.max_error, e);
        if (!(e <= tol)) {
            rep.ok = false;
            std::ostringstream os;
            os << what << " (error " << e << ")";
            rep.failures.push_back(os.str());
        }
    }
};

}  // namespace

Patch star_patch() {
    // Centre 0 with ring 1..6; truncated links keep only edges inside the patch.
    Patch p;
    p.name = "star";
    p.n = 7;
    p.nbrs.resize(7);
    p.link.resize(7);
    p.closed.assign(7, false);
    for (int i = 1; i <= 6; ++i) {
        int nx = i % 6 + 1, pv = (i + 4) % 6 + 1;
        p.nbrs[0].push_back(i);
        p.nbrs[i] = {0, pv, nx};
        p.link[0].emplace_back(i, nx);
        p.link[i] = {{0, pv}, {0, nx}};
    }
    p.closed[0] = true;
    for (int v = 0; v < 7; ++v)
        for (int w : p.nbrs[v]) p.rule_pairs.emplace_back(v, w);
    return p;
}

Patch torus_patch(int L, std::size_t max_pairs) {
    TriLattice lat(L);
    if (lat.size() > 12) throw std::invalid_argument("torus_patch: at most 12 qubits");
    Patch p;
    p.name = "torus" + std::to_string(L);
    p.n = int(lat.size());
    p.nbrs.resize(p.n);
    p.link.resize(p.n);
    p.closed.assign(p.n, true);
    for (int v = 0; v < p.n; ++v) {
        for (auto u : lat.neighbours(v)) p.nbrs[v].push_back(int(u));
        for (auto [a, b] : lat.link1(v)) p.link[v].emplace_back(int(a), int(b));
    }
    for (std::size_t k = 0; k < std::min<std::size_t>(max_pairs, 6); ++k) p.rule_pairs.emplace_back(0, p.nbrs[0][k]);
    return p;
}

DenseReport dense_oracle(const Patch& p, double tol) {
    if (p.n > 12) throw std::invalid_argument("dense_oracle: at most 12 qubits");
    DenseReport rep;
    Checker check{tol, rep};
    std::vector<Mat> h;
    for (int v = 0; v < p.n; ++v) h.push_back(h_term(p, v));
    const std::size_t dim = std::size_t(1) << p.n;
    const Mat I = Mat::Identity(dim, dim);
    std::vector<int> all(p.n);
    for (int q = 0; q < p.n; ++q) all[q] = q;
    const Mat S = x_string(p.n, all);

    for (int v = 0; v < p.n; ++v) {
        check(err(h[v] * h[v], I), p.name + ": h_" + std::to_string(v) + " squares to I");
        for (int u = v + 1; u < p.n; ++u)
            check(err(h[v] * h[u], h[u] * h[v]), p.name + ": [h_" + std::to_string(v) + ", h_" + std::to_string(u) + "]");
        if (p.closed[v]) check(err(S * h[v], h[v] * S), p.name + ": h_" + std::to_string(v) + " symmetric");
    }

    for (auto [v, w] : p.rule_pairs) {
        std::string tag = p.name + ": (" + std::to_string(v) + "," + std::to_string(w) + ") ";
        Mat zz = z_string(p.n, {v, w});
        Mat xv = x_string(p.n, {v});
        Mat U = (M_PI / 4.0 * (h[v] * zz)).exp();
        Mat W = (M_PI / 4.0 * (xv * zz)).exp();
        check(err(U * U.transpose(), I), tag + "U unitary");
        check(err(U * h[v] * U.transpose(), -zz), tag + "U h_v U^dag = -Z_v Z_w");
        check(err(W * zz * W.transpose(), xv), tag + "W Z_v Z_w W^dag = X_v");
        for (int l = 0; l < p.n; ++l) {
            if (l == v || l == w) continue;
            check(err(U * h[l], h[l] * U), tag + "U commutes with h_" + std::to_string(l));
        }
        for (int x = 0; x < p.n; ++x)
            for (int y = x + 1; y < p.n; ++y) {
                if (x == v || y == v) continue;
                Mat zxy = z_string(p.n, {x, y});
                check(err(U * zxy, zxy * U), tag + "U commutes with Z_" + std::to_string(x) + "Z_" + std::to_string(y));
                check(err(W * zxy, zxy * W), tag + "W commutes with Z_" + std::to_string(x) + "Z_" + std::to_string(y));
            }
        if (p.closed[v]) check(err(U * S, S * U), tag + "U symmetric");
        check(err(W * S, S * W), tag + "W symmetric");
    }
    return rep;
}

double lemma1_bound(int N, double beta) {
    double pr = std::pow(1.0 - sink_probability(beta), double(N));
    return 2.0 * pr / (1.0 + pr);
}

Lemma1Result lemma1_gap(int L, double beta) {
    if (L != 3) throw std::invalid_argument("lemma1_gap: only L = 3 is supported");
    Patch p = torus_patch(L, 0);
    const int N = p.n;
    const std::size_t dim = std::size_t(1) << N;
    const double prob = sink_probability(beta);
    const Mat I = Mat::Identity(dim, dim);
    std::vector<int> all(N);
    for (int q = 0; q < N; ++q) all[q] = q;
    const Mat P = 0.5 * (I + x_string(N, all));

    Mat rho_prime = I;
    Mat rho_k1 = I;
    for (int v = 0; v < N; ++v) {
        Mat hv = h_term(p, v);
        rho_prime = rho_prime * ((1.0 - prob) * 0.5 * (I + hv) + prob * 0.5 * I);
        rho_k1 = rho_k1 * (0.5 * (I + hv));
    }
    const double pr_k1 = std::pow(1.0 - prob, double(N));

    Mat sym = P * rho_prime * P;
    Mat rho = sym / sym.trace();
    Mat rho_f = pr_k1 * rho_k1 + 2.0 * sym - 2.0 * pr_k1 * (P * rho_k1 * P);

    Mat diff = rho - rho_f;
    diff = 0.5 * (diff + diff.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
    Lemma1Result r;
    r.distance = es.eigenvalues().cwiseAbs().sum();
    r.pr_k1 = pr_k1;
    r.bound = 2.0 * pr_k1 / (1.0 + pr_k1);
    return r;
}

}  // namespace spt
