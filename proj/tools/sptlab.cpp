// Command-line front end for the experiment sweeps.
//
//   sptlab <command> [--config run.yaml] [--seed N] [--workers N] [--out PATH] [--format csv|jsonl] [command flags]
//
// Flags override values from the config file. Every run writes its result file
// and then a manifest next to it (PATH.manifest.json).
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "spt/disentangle2d.hpp"
#include "spt/gauging.hpp"
#include "spt/homology.hpp"
#include "spt/io.hpp"
#include "spt/loopgas.hpp"
#include "spt/membrane.hpp"
#include "spt/parallel.hpp"
#include "spt/restore.hpp"
#include "spt/rng.hpp"

#ifndef SPTLAB_VERSION
#define SPTLAB_VERSION "unknown"
#endif

using namespace spt;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

using Flags = std::map<std::string, std::optional<std::string>>;

struct KeySpec {
    std::string name;
    std::string help;
};

const std::map<std::string, std::vector<KeySpec>>& command_keys() {
    static const std::map<std::string, std::vector<KeySpec>> keys = {
        {"run",
         {{"seed", "master seed (default 1)"},
          {"workers", "worker threads (default: hardware concurrency)"},
          {"out", "result file (default results/<command>.<format>)"},
          {"format", "csv or jsonl"}}},
        {"order-param",
         {{"d", "lattice sizes"},
          {"beta", "inverse temperatures"},
          {"samples", "samples per point (default 10000)"},
          {"chains", "independent chains per point (default 16)"},
          {"burn-in", "sweeps discarded per chain (default 1000)"},
          {"alpha-c", "constant c in alpha = ceil(c log d); 0 uses the default"},
          {"exact", "exact enumeration instead of sampling (d = 2 only)"}}},
        {"decode-threshold",
         {{"d-list", "lattice sizes"},
          {"p-list", "flip probabilities"},
          {"trials", "trials per point (default 10000)"},
          {"method", "greedy or exact"}}},
        {"loopgas-diag",
         {{"d", "lattice sizes"},
          {"beta", "inverse temperatures"},
          {"sweeps", "measured sweeps per chain (default 1000)"},
          {"burn-in", "discarded sweeps per chain (default 1000)"},
          {"chains", "chains per point (default 4)"},
          {"winding-fraction", "share of winding proposals (default 0.1)"}}},
        {"gauge-verify", {{"d", "lattice sizes (default 2,3,4)"}}},
        {"disentangle-verify",
         {{"L", "lattice sizes"},
          {"beta", "inverse temperature"},
          {"c", "grid constant; l = ceil(sqrt(c log L)) (default from beta)"},
          {"trials", "sampled configurations per L (default 100)"}}},
        {"lemma1-check", {{"beta", "inverse temperatures (default 0.5,1,2)"}}},
    };
    return keys;
}

// Resolves one section: flag, then config entry, then default. Every value
// read is recorded for the manifest.
class Params {
public:
    Params(const Config* cfg, std::string section, const Flags& flags)
        : cfg_(cfg), section_(std::move(section)), flags_(flags) {}

    const Json& resolved() const { return resolved_; }

    std::string where(const std::string& key) const {
        auto f = flags_.find(key);
        if (f != flags_.end() && f->second) return "--" + key;
        if (const ConfigEntry* e = entry(key)) return cfg_->where(e->line);
        return "default";
    }

    [[noreturn]] void invalid(const std::string& key, const std::string& msg) const {
        throw ConfigError(where(key) + ": key '" + key + "' in [" + section_ + "]: " + msg);
    }

    std::optional<std::vector<std::string>> raw(const std::string& key) const {
        auto f = flags_.find(key);
        if (f != flags_.end() && f->second) return split_list(*f->second);
        if (const ConfigEntry* e = entry(key)) return e->values;
        return std::nullopt;
    }

    std::vector<double> doubles(const std::string& key, std::optional<std::vector<double>> def = {}) {
        std::vector<double> out;
        if (auto r = raw(key)) {
            for (const auto& s : *r) out.push_back(parse_double(s, where(key), key));
        } else if (def) {
            out = *def;
        } else {
            missing(key);
        }
        if (out.empty()) invalid(key, "empty list");
        Json j = Json::array();
        for (double v : out) j.push_back(number(v));
        resolved_[key] = j;
        return out;
    }

    std::vector<long long> ints(const std::string& key, std::optional<std::vector<long long>> def = {}) {
        std::vector<long long> out;
        if (auto r = raw(key)) {
            for (const auto& s : *r) out.push_back(parse_int(s, where(key), key));
        } else if (def) {
            out = *def;
        } else {
            missing(key);
        }
        if (out.empty()) invalid(key, "empty list");
        resolved_[key] = out;
        return out;
    }

    double scalar_double(const std::string& key, std::optional<double> def = {}) {
        auto v = doubles(key, def ? std::optional<std::vector<double>>(std::vector<double>{*def}) : std::nullopt);
        if (v.size() != 1) invalid(key, "expected a single value");
        resolved_[key] = number(v[0]);
        return v[0];
    }

    long long scalar_int(const std::string& key, std::optional<long long> def = {}) {
        auto v = ints(key, def ? std::optional<std::vector<long long>>(std::vector<long long>{*def}) : std::nullopt);
        if (v.size() != 1) invalid(key, "expected a single value");
        resolved_[key] = v[0];
        return v[0];
    }

    bool boolean(const std::string& key, bool def) {
        bool v = def;
        if (auto r = raw(key)) {
            if (r->size() != 1) invalid(key, "expected a single value");
            v = parse_bool(r->front(), where(key), key);
        }
        resolved_[key] = v;
        return v;
    }

    std::string string(const std::string& key, std::optional<std::string> def = {}) {
        std::string v;
        if (auto r = raw(key)) {
            if (r->size() != 1) invalid(key, "expected a single value");
            v = r->front();
        } else if (def) {
            v = *def;
        } else {
            missing(key);
        }
        resolved_[key] = v;
        return v;
    }

private:
    const ConfigEntry* entry(const std::string& key) const {
        if (!cfg_) return nullptr;
        const ConfigSection* sec = cfg_->section(section_);
        if (!sec) return nullptr;
        auto it = sec->entries.find(key);
        return it == sec->entries.end() ? nullptr : &it->second;
    }

    [[noreturn]] void missing(const std::string& key) const {
        std::string msg = "missing required key '" + key + "' for " + section_ + " (pass --" + key;
        if (cfg_) msg = cfg_->origin() + ": " + msg + " or set it under '" + section_ + ":'";
        throw ConfigError(msg + ")");
    }

    const Config* cfg_;
    std::string section_;
    const Flags& flags_;
    Json resolved_ = Json::object();
};

struct RunContext {
    uint64_t seed = 1;
    unsigned workers = 1;
    std::vector<uint64_t> task_seeds;

    uint64_t task_seed(std::size_t i) {
        if (task_seeds.size() <= i) task_seeds.resize(i + 1);
        return task_seeds[i] = derive_seed(seed, i);
    }
};

struct CommandResult {
    Table table;
    std::string default_format = "csv";
    bool checks_ok = true;
    Json summary = Json::object();
    std::string report;  // printed to stdout
};

// A command parses its parameters (throwing ConfigError) and returns the work
// to run once everything has validated.
using Work = std::function<CommandResult(RunContext&)>;

std::vector<int> to_int(const std::vector<long long>& v) { return std::vector<int>(v.begin(), v.end()); }

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Work order_param(Params& p) {
    auto ds = to_int(p.ints("d"));
    auto betas = p.doubles("beta");
    long long samples = p.scalar_int("samples", 10000);
    long long chains = p.scalar_int("chains", 16);
    long long burn = p.scalar_int("burn-in", 1000);
    double alpha_c = p.scalar_double("alpha-c", 0.0);
    bool exact = p.boolean("exact", false);

    if (samples < 1) p.invalid("samples", "must be >= 1");
    if (chains < 1) p.invalid("chains", "must be >= 1");
    if (burn < 0) p.invalid("burn-in", "must be >= 0");
    if (!(alpha_c >= 0.0)) p.invalid("alpha-c", "must be >= 0");
    for (double b : betas)
        if (!(b >= 0.0)) p.invalid("beta", "must be >= 0");
    for (int d : ds) {
        if (d < 2) p.invalid("d", "must be >= 2");
        if (exact && d != 2) p.invalid("exact", "exact mode needs d = 2");
        for (double b : betas) try {
                CubicLattice lat(d);
                build_membranes(lat, 0, d / 2, default_alpha(b, d, 0, d / 2, alpha_c));
            } catch (const std::invalid_argument& e) {
                p.invalid("d", fmt("d=%d: %s", d, e.what()));
            }
    }

    return [=](RunContext& ctx) {
        const std::size_t n = ds.size() * betas.size();
        std::vector<uint64_t> seeds(n);
        for (std::size_t i = 0; i < n; ++i) seeds[i] = ctx.task_seed(i);
        std::vector<OrderParameter> res(n);
        parallel_for(n, ctx.workers, [&](std::size_t i) {
            int d = ds[i / betas.size()];
            double beta = betas[i % betas.size()];
            CubicLattice lat(d);
            auto mp = build_membranes(lat, 0, d / 2, default_alpha(beta, d, 0, d / 2, alpha_c));
            if (exact) {
                res[i] = order_parameter_exact(lat, mp, beta);
                return;
            }
            OrderParameterOptions opt;
            opt.n_samples = std::size_t(samples);
            opt.n_chains = std::size_t(chains);
            opt.burn_in = std::size_t(burn);
            opt.seed = seeds[i];
            res[i] = order_parameter(lat, mp, beta, opt);
        });
        CommandResult out;
        out.table.columns = {"d",     "T",    "n_samples", "O_raw", "O_corrected", "stderr",
                             "alpha", "seed", "beta",      "stderr_raw", "mode"};
        for (std::size_t i = 0; i < n; ++i) {
            double beta = betas[i % betas.size()];
            const auto& r = res[i];
            Record row;
            row["d"] = ds[i / betas.size()];
            row["T"] = number(beta == 0.0 ? INFINITY : 1.0 / beta);
            row["n_samples"] = r.n_samples;
            row["O_raw"] = number(r.o_raw);
            row["O_corrected"] = number(r.o_corrected);
            row["stderr"] = number(r.stderr_);
            row["alpha"] = r.alpha;
            row["seed"] = seeds[i];
            row["beta"] = number(beta);
            row["stderr_raw"] = number(r.stderr_raw);
            row["mode"] = exact ? "exact" : "mcmc";
            out.table.rows.push_back(row);
            out.report += fmt("d=%d beta=%g O_corrected=%.6f +- %.6f (alpha %d)\n", ds[i / betas.size()], beta,
                              r.o_corrected, r.stderr_, r.alpha);
        }
        return out;
    };
}

Work decode_threshold(Params& p) {
    auto ds = to_int(p.ints("d-list"));
    auto ps = p.doubles("p-list");
    long long trials = p.scalar_int("trials", 10000);
    std::string method_name = p.string("method", "greedy");

    DecodeMethod method;
    if (method_name == "greedy")
        method = DecodeMethod::Greedy;
    else if (method_name == "exact")
        method = DecodeMethod::Exact;
    else
        p.invalid("method", "expected greedy or exact, got '" + method_name + "'");
    if (trials < 1) p.invalid("trials", "must be >= 1");
    for (int d : ds)
        if (d < 2) p.invalid("d-list", "must be >= 2");
    for (double x : ps)
        if (!(x >= 0.0 && x <= 0.5)) p.invalid("p-list", "probabilities must lie in [0, 0.5]");

    return [=](RunContext& ctx) {
        const std::size_t n = ds.size() * ps.size();
        std::vector<uint64_t> seeds(n);
        for (std::size_t i = 0; i < n; ++i) seeds[i] = ctx.task_seed(i);
        std::vector<ErrorRate> res(n);
        parallel_for(n, ctx.workers, [&](std::size_t i) {
            CubicLattice lat(ds[i / ps.size()]);
            res[i] = logical_error_rate(lat, ps[i % ps.size()], std::size_t(trials), method, seeds[i]);
        });
        CommandResult out;
        out.table.columns = {"d",    "p",      "T_equiv", "n_trials", "fail_rate", "stderr",
                             "method", "seed", "fail_primal", "fail_dual"};
        for (std::size_t i = 0; i < n; ++i) {
            double pv = ps[i % ps.size()];
            Record row;
            row["d"] = ds[i / ps.size()];
            row["p"] = number(pv);
            row["T_equiv"] = number(pv > 0.0 && pv < 0.5 ? nishimori_T(pv) : NAN);
            row["n_trials"] = res[i].n_trials;
            row["fail_rate"] = number(res[i].fail_rate);
            row["stderr"] = number(res[i].stderr_);
            row["method"] = method_name;
            row["seed"] = seeds[i];
            row["fail_primal"] = number(res[i].fail_primal);
            row["fail_dual"] = number(res[i].fail_dual);
            out.table.rows.push_back(row);
        }
        // Crossing of the smallest and largest size, on ascending p.
        std::vector<std::size_t> order(ps.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ps[a] < ps[b]; });
        auto dmin = std::min_element(ds.begin(), ds.end()) - ds.begin();
        auto dmax = std::max_element(ds.begin(), ds.end()) - ds.begin();
        std::vector<double> sp, rs, rl;
        for (auto k : order) {
            sp.push_back(ps[k]);
            rs.push_back(res[std::size_t(dmin) * ps.size() + k].fail_rate);
            rl.push_back(res[std::size_t(dmax) * ps.size() + k].fail_rate);
        }
        double pstar = ds.size() > 1 ? find_crossing(sp, rs, rl) : NAN;
        double pref = nishimori_p(0.6);
        out.summary["p_star"] = number(pstar);
        out.summary["d_small"] = ds[std::size_t(dmin)];
        out.summary["d_large"] = ds[std::size_t(dmax)];
        out.summary["p_reference_T0_0.6"] = pref;
        out.report = "p* (d=" + std::to_string(ds[std::size_t(dmin)]) + " vs d=" +
                     std::to_string(ds[std::size_t(dmax)]) + ") = " + format_number(pstar) +
                     "; reference p(T0=0.6) = " + format_number(pref) + "\n";
        return out;
    };
}

Work loopgas_diag(Params& p) {
    auto ds = to_int(p.ints("d"));
    auto betas = p.doubles("beta");
    long long sweeps = p.scalar_int("sweeps", 1000);
    long long burn = p.scalar_int("burn-in", 1000);
    long long chains = p.scalar_int("chains", 4);
    double wf = p.scalar_double("winding-fraction", 0.1);
    if (sweeps < 1) p.invalid("sweeps", "must be >= 1");
    if (burn < 0) p.invalid("burn-in", "must be >= 0");
    if (chains < 1) p.invalid("chains", "must be >= 1");
    if (!(wf > 0.0 && wf < 1.0)) p.invalid("winding-fraction", "must lie in (0, 1)");
    for (int d : ds)
        if (d < 2) p.invalid("d", "must be >= 2");
    for (double b : betas)
        if (!(b >= 0.0)) p.invalid("beta", "must be >= 0");

    return [=](RunContext& ctx) {
        const std::size_t per = betas.size() * std::size_t(chains);
        const std::size_t n = ds.size() * per;
        std::vector<uint64_t> seeds(n);
        for (std::size_t i = 0; i < n; ++i) seeds[i] = ctx.task_seed(i);
        std::vector<ChainRecord> res(n);
        parallel_for(n, ctx.workers, [&](std::size_t i) {
            CubicLattice lat(ds[i / per]);
            EnsembleParams ep;
            ep.d = lat.d();
            ep.beta = betas[(i % per) / std::size_t(chains)];
            ep.sweeps = std::size_t(sweeps);
            ep.burn_in = std::size_t(burn);
            ep.winding_fraction = wf;
            ep.seed = seeds[i];
            res[i] = run_chain(lat, ep, i % std::size_t(chains), seeds[i]);
        });
        CommandResult out;
        out.default_format = "jsonl";
        out.table.columns = {"d",        "beta",           "seed",           "chain",       "sweeps",
                             "accept_plaquette", "accept_winding", "mean_energy", "largest_hist",
                             "largest_dual_hist"};
        auto hist = [](const std::map<int, uint64_t>& h) {
            Json j = Json::object();
            for (auto [k, v] : h) j[std::to_string(k)] = v;
            return j;
        };
        for (const auto& r : res) {
            Record row;
            row["d"] = r.d;
            row["beta"] = number(r.beta);
            row["seed"] = r.seed;
            row["chain"] = r.chain;
            row["sweeps"] = r.sweeps;
            row["accept_plaquette"] = number(r.accept_plaquette);
            row["accept_winding"] = number(r.accept_winding);
            row["mean_energy"] = number(r.mean_energy);
            row["largest_hist"] = hist(r.largest_hist);
            row["largest_dual_hist"] = hist(r.largest_dual_hist);
            out.table.rows.push_back(row);
        }
        return out;
    };
}

Work gauge_verify(Params& p) {
    auto ds = to_int(p.ints("d", std::vector<long long>{2, 3, 4}));
    for (int d : ds)
        if (d < 2 || d > 6) p.invalid("d", "must lie in [2, 6]");
    return [=](RunContext& ctx) {
        std::vector<DualityReport> res(ds.size());
        parallel_for(ds.size(), ctx.workers, [&](std::size_t i) {
            CubicLattice lat(ds[i]);
            res[i] = verify_dualities(lat);
        });
        CommandResult out;
        out.default_format = "jsonl";
        out.table.columns = {"d", "toric_code_ok", "hadamard_ok", "gauge_generators_ok", "terms_checked", "mismatches",
                             "first_mismatch"};
        for (const auto& r : res) {
            Record row;
            row["d"] = r.d;
            row["toric_code_ok"] = r.toric_code_ok;
            row["hadamard_ok"] = r.hadamard_ok;
            row["gauge_generators_ok"] = r.gauge_generators_ok;
            row["terms_checked"] = r.terms_checked;
            row["mismatches"] = r.mismatches.size();
            if (!r.mismatches.empty()) {
                const auto& m = r.mismatches.front();
                row["first_mismatch"] = {{"check", m.check}, {"dim", m.dim}, {"cell", m.cell}, {"coord", m.coord}};
            }
            out.checks_ok = out.checks_ok && r.ok();
            out.report += fmt("d=%d toric=%s hadamard=%s gauge-generators=%s (%zu terms)\n", r.d,
                              r.toric_code_ok ? "ok" : "FAIL", r.hadamard_ok ? "ok" : "FAIL",
                              r.gauge_generators_ok ? "ok" : "FAIL", r.terms_checked);
        }
        return out;
    };
}

Work disentangle_verify(Params& p) {
    auto Ls = to_int(p.ints("L"));
    double beta = p.scalar_double("beta");
    if (!(beta >= 0.0)) p.invalid("beta", "must be >= 0");
    double c = p.scalar_double("c", beta > 0.0 && std::isfinite(beta) ? default_sink_c(beta) : 1.0);
    long long trials = p.scalar_int("trials", 100);
    if (!(c > 0.0)) p.invalid("c", "must be > 0");
    if (trials < 1) p.invalid("trials", "must be >= 1");
    for (int L : Ls)
        if (L < 3) p.invalid("L", "must be >= 3");

    return [=](RunContext& ctx) {
        struct Stat {
            int l = 0, bound = 0, max_depth = 0, valid = 0, ok = 0;
            std::size_t max_gate_depth = 0;
            double exact_valid = 0.0;
        };
        // One task per (L, trial) so the work spreads over workers.
        const std::size_t T = std::size_t(trials);
        const std::size_t n = Ls.size() * T;
        std::vector<uint64_t> seeds(n);
        for (std::size_t i = 0; i < n; ++i) seeds[i] = ctx.task_seed(i);
        std::vector<TriLattice> lats;
        std::vector<GridPartition> grids;
        std::vector<Stat> stats(Ls.size());
        for (std::size_t j = 0; j < Ls.size(); ++j) {
            lats.emplace_back(Ls[j]);
            grids.emplace_back(Ls[j], grid_side(Ls[j], c));
            stats[j].l = grids[j].l();
            stats[j].bound = 2 * max_square_diameter(lats[j], grids[j]);
            stats[j].exact_valid = valid_probability(grids[j], sink_probability(beta));
        }
        struct Trial {
            bool valid = false, ok = false;
            int depth = 0;
            std::size_t gate_depth = 0;
        };
        std::vector<Trial> tr(n);
        parallel_for(n, ctx.workers, [&](std::size_t i) {
            std::size_t j = i / T;
            Rng rng(seeds[i]);
            auto cfg = sample_sinks(lats[j], beta, rng);
            if (!is_valid(cfg, grids[j])) return;
            tr[i].valid = true;
            auto circ = build_circuit(lats[j], cfg, grids[j]);
            tr[i].depth = circ.depth();
            tr[i].gate_depth = circ.gate_depth();
            try {
                tr[i].ok = conjugate_hamiltonian(lats[j], cfg, circ) == target_hamiltonian(cfg);
            } catch (const SideConditionError&) {
                tr[i].ok = false;
            }
        });
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = stats[i / T];
            if (!tr[i].valid) continue;
            ++s.valid;
            s.ok += tr[i].ok;
            s.max_depth = std::max(s.max_depth, tr[i].depth);
            s.max_gate_depth = std::max(s.max_gate_depth, tr[i].gate_depth);
        }
        CommandResult out;
        out.default_format = "jsonl";
        out.table.columns = {"L",          "beta",          "valid_fraction", "max_depth", "all_conjugations_ok",
                             "c",          "l",             "depth_bound",    "n_valid",   "n_trials",
                             "max_gate_depth", "valid_probability"};
        for (std::size_t j = 0; j < Ls.size(); ++j) {
            const auto& s = stats[j];
            bool all_ok = s.ok == s.valid;
            Record row;
            row["L"] = Ls[j];
            row["beta"] = number(beta);
            row["valid_fraction"] = number(double(s.valid) / double(T));
            row["max_depth"] = s.max_depth;
            row["all_conjugations_ok"] = all_ok;
            row["c"] = number(c);
            row["l"] = s.l;
            row["depth_bound"] = s.bound;
            row["n_valid"] = s.valid;
            row["n_trials"] = T;
            row["max_gate_depth"] = s.max_gate_depth;
            row["valid_probability"] = number(s.exact_valid);
            out.table.rows.push_back(row);
            out.checks_ok = out.checks_ok && all_ok && s.max_depth <= s.bound;
            out.report += fmt("L=%d l=%d valid %d/%zu conjugations ok %d/%d max depth %d (bound %d)\n", Ls[j], s.l,
                              s.valid, T, s.ok, s.valid, s.max_depth, s.bound);
        }
        return out;
    };
}

Work lemma1_check(Params& p) {
    auto betas = p.doubles("beta", std::vector<double>{0.5, 1.0, 2.0});
    for (double b : betas)
        if (!(b >= 0.0)) p.invalid("beta", "must be >= 0");
    return [=](RunContext& ctx) {
        std::vector<Lemma1Result> res(betas.size());
        parallel_for(betas.size(), ctx.workers, [&](std::size_t i) { res[i] = lemma1_gap(3, betas[i]); });
        CommandResult out;
        out.table.columns = {"L", "N", "beta", "p_sink", "distance", "bound", "pr_k1", "ok"};
        for (std::size_t i = 0; i < betas.size(); ++i) {
            bool ok = res[i].distance <= res[i].bound + 1e-12;
            Record row;
            row["L"] = 3;
            row["N"] = 9;
            row["beta"] = number(betas[i]);
            row["p_sink"] = number(sink_probability(betas[i]));
            row["distance"] = number(res[i].distance);
            row["bound"] = number(res[i].bound);
            row["pr_k1"] = number(res[i].pr_k1);
            row["ok"] = ok;
            out.table.rows.push_back(row);
            out.checks_ok = out.checks_ok && ok;
            out.report += fmt("beta=%g distance=%.6g bound=%.6g %s\n", betas[i], res[i].distance, res[i].bound,
                              ok ? "ok" : "FAIL");
        }
        return out;
    };
}

const std::map<std::string, std::pair<std::string, std::function<Work(Params&)>>>& commands() {
    static const std::map<std::string, std::pair<std::string, std::function<Work(Params&)>>> cmds = {
        {"order-param", {"membrane order parameter over (d, beta)", order_param}},
        {"decode-threshold", {"logical error rates of the restoration decoder", decode_threshold}},
        {"loopgas-diag", {"per-chain Metropolis diagnostics", loopgas_diag}},
        {"gauge-verify", {"check the gauging dualities", gauge_verify}},
        {"disentangle-verify", {"verify the 2D disentangling circuit on sampled configurations", disentangle_verify}},
        {"lemma1-check", {"dense trace-distance check on the 3x3 torus", lemma1_check}},
    };
    return cmds;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& name, const Flags& run_flags, const Flags& cmd_flags, const std::optional<std::string>& config,
        const std::vector<std::string>& argv) {
    std::optional<Config> cfg;
    Json run_snapshot, cmd_snapshot;
    RunContext ctx;
    std::string out_path, format;
    Work work;
    try {
        if (config) {
            cfg = Config::load(*config);
            std::set<std::string> sections;
            for (const auto& [sec, keys] : command_keys()) {
                sections.insert(sec);
                std::set<std::string> allowed;
                for (const auto& k : keys) allowed.insert(k.name);
                cfg->check_keys(sec, allowed);
            }
            cfg->check_sections(sections);
        }
        const Config* cp = cfg ? &*cfg : nullptr;
        Params rp(cp, "run", run_flags);
        long long seed = rp.scalar_int("seed", 1);
        if (seed < 0) rp.invalid("seed", "must be >= 0");
        long long workers = rp.scalar_int("workers", default_workers());
        if (workers < 1) rp.invalid("workers", "must be >= 1");
        format = rp.string("format", "");
        if (!format.empty() && format != "csv" && format != "jsonl")
            rp.invalid("format", "expected csv or jsonl, got '" + format + "'");
        out_path = rp.string("out", "");
        ctx.seed = uint64_t(seed);
        ctx.workers = unsigned(workers);

        Params cmdp(cp, name, cmd_flags);
        work = commands().at(name).second(cmdp);
        run_snapshot = rp.resolved();
        cmd_snapshot = cmdp.resolved();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    Json manifest;
    manifest["command"] = name;
    manifest["argv"] = argv;
    manifest["version"] = SPTLAB_VERSION;
    manifest["seed"] = ctx.seed;
    manifest["workers"] = ctx.workers;
    manifest["config"] = cmd_snapshot;
    manifest["run"] = run_snapshot;
    manifest["config_file"] = config ? Json(*config) : Json();
    manifest["config_text"] = config ? Json(read_file(*config)) : Json();
    manifest["start"] = utc_timestamp();

    int status = 0;
    std::string manifest_path;
    try {
        CommandResult res = work(ctx);
        if (format.empty()) format = res.default_format;
        if (out_path.empty()) out_path = "results/" + name + "." + format;
        manifest_path = out_path + ".manifest.json";
        manifest["format"] = format;
        manifest["run"]["format"] = format;
        manifest["run"]["out"] = out_path;
        manifest["task_seeds"] = ctx.task_seeds;
        manifest["summary"] = res.summary;
        atomic_write(out_path, format == "csv" ? to_csv(res.table) : to_jsonl(res.table));
        manifest["outputs"] = Json::array({{{"path", out_path}, {"format", format}, {"rows", res.table.rows.size()}}});
        manifest["status"] = res.checks_ok ? "ok" : "check_failed";
        std::cout << res.report;
        std::cout << "wrote " << out_path << "\n";
        if (!res.checks_ok) {
            std::cerr << name << ": verification failed\n";
            status = kExitRuntime;
        }
    } catch (const std::exception& e) {
        std::cerr << name << ": " << e.what() << "\n";
        if (out_path.empty()) out_path = "results/" + name + "." + (format.empty() ? "out" : format);
        manifest_path = out_path + ".manifest.json";
        manifest["task_seeds"] = ctx.task_seeds;
        manifest["outputs"] = Json::array();
        manifest["status"] = "error";
        manifest["error"] = e.what();
        status = kExitRuntime;
    }
    manifest["end"] = utc_timestamp();
    try {
        atomic_write(manifest_path, manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return kExitRuntime;
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sptlab: loop-gas sampling, membrane order parameter, decoding, gauging and 2D disentangler checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SPTLAB_VERSION);

    std::optional<std::string> config;
    Flags run_flags;
    std::map<std::string, Flags> cmd_flags;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands()) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        subs[name] = sub;
        sub->add_option("--config", config, "YAML config file");
        for (const auto& k : command_keys().at("run")) sub->add_option("--" + k.name, run_flags[k.name], k.help);
        auto& flags = cmd_flags[name];
        for (const auto& k : command_keys().at(name)) {
            if (k.name == "exact")
                sub->add_flag("--exact{true}", flags[k.name], k.help)->expected(0, 1);
            else
                sub->add_option("--" + k.name, flags[k.name], k.help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    std::vector<std::string> args(argv, argv + argc);
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) return run(name, run_flags, cmd_flags[name], config, args);
    return kExitConfig;
}
