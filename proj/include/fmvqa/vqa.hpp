#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fmvqa/ansatz.hpp"
#include "fmvqa/circuit.hpp"
#include "fmvqa/cobyla.hpp"
#include "fmvqa/ising.hpp"
#include "fmvqa/mitigation.hpp"
#include "fmvqa/rng.hpp"
#include "fmvqa/statevector.hpp"

namespace fmvqa {

struct OptimizerConfig {
    int max_iter = 1000;
    double rho_begin = 0.5;
    double rho_end = 1e-4;
    int restarts = 5;
    std::uint64_t seed = 0;
};

struct ShotConfig {
    std::size_t shots = 8192;
    NoiseModel noise{};
    bool mitigate = false;
    std::size_t calibration_shots = 10000;
    int mitigation_iterations = 1500;
};

// Empty shots ==> exact expectation values from the statevector.
struct RunMode {
    std::optional<ShotConfig> shots;
    bool exact() const { return !shots.has_value(); }
};

inline RunMode exact_mode() { return {}; }
inline RunMode shots_mode(const ShotConfig& cfg) {
    RunMode m;
    m.shots = cfg;
    return m;
}

struct TopEntry {
    std::uint64_t index = 0;
    std::string bitstring;
    double probability = 0.0;
};

struct VqaResult {
    std::string method;  // "vqe" | "qaoa"
    int n = 0;
    int depth = 0;  // vqe only
    int p = 0;      // qaoa only
    int param_count = 0;
    int cnot_count = 0;
    std::vector<double> best_params;
    double best_energy = 0.0;
    int best_restart = -1;
    std::vector<double> restart_energies;
    std::vector<std::pair<int, double>> energy_trace;  // best restart, per evaluation
    std::vector<double> final_distribution;            // length 2^n
    std::vector<TopEntry> top_k;                       // descending prob, lexicographic ties
    bool shots_mode = false;
    bool mitigated = false;
    std::size_t total_evaluations = 0;
};

inline std::vector<TopEntry> top_k_from(const std::vector<double>& probs, int n, std::size_t k) {
    std::vector<std::uint64_t> idx(probs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&probs](std::uint64_t a, std::uint64_t b) {
        if (probs[a] != probs[b]) return probs[a] > probs[b];
        return a < b;
    });
    k = std::min(k, idx.size());
    std::vector<TopEntry> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        out.push_back({idx[i], bits_to_string(index_to_bits(idx[i], n)), probs[idx[i]]});
    return out;
}

namespace detail {

// Shot-estimated distribution at one parameter point. With gate noise the
// shots are split across Pauli trajectories (roughly 512 shots each, capped
// at 64 trajectories); each trajectory re-runs the circuit with its own
// stochastic CNOT faults. Readout flips happen during sampling, mitigation
// afterwards on the pooled counts.
inline std::vector<double> shot_distribution(const Circuit& circ, const std::vector<double>& params,
                                             const ShotConfig& cfg, const Mitigator* mit,
                                             std::uint64_t eval_seed) {
    if (cfg.shots < 1) throw std::invalid_argument("shot_distribution: shots must be >= 1");
    std::size_t trajectories = 1;
    if (cfg.noise.has_gate_noise())
        trajectories = std::clamp<std::size_t>(cfg.shots / 512, 1, 64);
    Rng seeder(eval_seed);
    std::vector<std::uint64_t> counts(std::size_t{1} << circ.n, 0);
    const std::size_t base = cfg.shots / trajectories;
    const std::size_t rem = cfg.shots % trajectories;
    for (std::size_t t = 0; t < trajectories; ++t) {
        const std::uint64_t run_seed = seeder.bits();
        const std::uint64_t sample_seed = seeder.bits();
        const std::size_t s = base + (t < rem ? 1 : 0);
        if (s == 0) continue;
        const Statevector sv = run_circuit(circ, params, &cfg.noise, run_seed);
        const auto c = sample_counts(sv, s, &cfg.noise, sample_seed);
        for (std::size_t i = 0; i < c.size(); ++i) counts[i] += c[i];
    }
    auto probs = normalize_counts(counts);
    if (mit != nullptr) probs = mit->apply(probs, cfg.mitigation_iterations);
    return probs;
}

// Shared restart driver. Seed layout (all derived from opt.seed): stream
// 0x1717+r seeds restart r's initial parameters, 0xCA11B the mitigation
// calibration, 0x5A5A0000+e the e-th shot-mode objective evaluation, and
// 0xF1AA1 the final reported distribution.
inline VqaResult drive(const IsingModel& H, VqaResult res, const Circuit& circ,
                       const std::function<void(Statevector&, const std::vector<double>&)>& apply_exact,
                       const std::function<std::vector<double>(int, Rng&)>& init_params,
                       const OptimizerConfig& opt, const RunMode& mode) {
    if (opt.restarts < 1) throw std::invalid_argument("vqa: restarts must be >= 1");
    const std::vector<double> energies = enumerate_ising(H);

    std::optional<Mitigator> mit;
    if (!mode.exact() && mode.shots->mitigate)
        mit.emplace(build_confusion_matrix(H.n, mode.shots->noise, mode.shots->calibration_shots,
                                           derive_seed(opt.seed, 0xCA11Bu)));
    const Mitigator* mitp = mit ? &*mit : nullptr;

    std::uint64_t eval_counter = 0;
    auto objective = [&](const std::vector<double>& x) {
        if (mode.exact()) {
            Statevector sv(H.n);
            apply_exact(sv, x);
            return expectation_from_table(sv, energies);
        }
        const std::uint64_t es = derive_seed(opt.seed, 0x5A5A0000u + eval_counter);
        ++eval_counter;
        const auto probs = shot_distribution(circ, x, *mode.shots, mitp, es);
        double e = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) e += probs[i] * energies[i];
        return e;
    };

    CobylaOptions copt;
    copt.max_iter = opt.max_iter;
    copt.rho_begin = opt.rho_begin;
    copt.rho_end = opt.rho_end;

    CobylaResult best;
    best.f = std::numeric_limits<double>::infinity();
    for (int r = 0; r < opt.restarts; ++r) {
        Rng init_rng(derive_seed(opt.seed, 0x1717u + static_cast<std::uint64_t>(r)));
        const std::vector<double> x0 = init_params(r, init_rng);
        if (static_cast<int>(x0.size()) != res.param_count)
            throw std::logic_error("vqa: initializer produced wrong parameter count");
        CobylaResult run = cobyla_minimize(objective, x0, copt);
        res.total_evaluations += static_cast<std::size_t>(run.evaluations);
        res.restart_energies.push_back(run.f);
        if (run.f < best.f) {
            best = std::move(run);
            res.best_restart = r;
        }
    }

    res.best_params = best.x;
    res.best_energy = best.f;
    res.energy_trace.reserve(best.trace.size());
    for (std::size_t i = 0; i < best.trace.size(); ++i)
        res.energy_trace.emplace_back(static_cast<int>(i), best.trace[i].f);

    if (mode.exact()) {
        Statevector sv(H.n);
        apply_exact(sv, res.best_params);
        res.final_distribution = sv.probabilities();
    } else {
        res.final_distribution = shot_distribution(circ, res.best_params, *mode.shots, mitp,
                                                   derive_seed(opt.seed, 0xF1AA1u));
        res.mitigated = mode.shots->mitigate;
    }
    res.top_k = top_k_from(res.final_distribution, H.n,
                           std::min<std::size_t>(10, res.final_distribution.size()));
    return res;
}

}  // namespace detail

inline VqaResult vqe_run(const IsingModel& H, int depth, const OptimizerConfig& opt = {},
                         const RunMode& mode = {}) {
    if (depth < 1) throw std::invalid_argument("vqe_run: depth must be >= 1");
    auto [circ, spec] = build_ry_ansatz(H.n, depth);
    VqaResult res;
    res.method = "vqe";
    res.n = H.n;
    res.depth = depth;
    res.param_count = spec.param_count;
    res.cnot_count = spec.cnot_count;
    res.shots_mode = !mode.exact();
    auto apply = [depth](Statevector& sv, const std::vector<double>& x) {
        apply_ry_ansatz(sv, x, depth);
    };
    auto init = [&spec](int, Rng& rng) {
        std::vector<double> x(static_cast<std::size_t>(spec.param_count));
        for (double& v : x) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
        return x;
    };
    return detail::drive(H, std::move(res), circ, apply, init, opt, mode);
}

// Restart 0 is a linear ramp (gamma_l = (l/p) gamma_max, beta_l = (1-l/p)
// beta_max for l = 1..p); the remaining restarts draw gamma ~ U[gamma_min,
// gamma_max], beta ~ U[0, beta_max]. Parameters interleave as (gamma_1,
// beta_1, ...).
struct QaoaInit {
    double gamma_min = 0.0;
    double gamma_max = 0.75;
    double beta_max = std::numbers::pi / 2.0;
};

// Cardinality-penalty Hamiltonians phase-cancel the penalty couplings at
// gamma = 2*pi/beta0 (the penalty contributes J = beta0/2 per pair and no
// field), so restarts concentrate on that window; plain models keep the
// generic window.
inline QaoaInit qaoa_init_for(const IsingModel& H) {
    QaoaInit qi;
    if (H.beta0 > 0.0) {
        const double res = 2.0 * std::numbers::pi / H.beta0;
        qi.gamma_min = 0.7 * res;
        qi.gamma_max = 1.2 * res;
        qi.beta_max = 0.8;
    }
    return qi;
}

inline VqaResult qaoa_run(const IsingModel& H, int p, const OptimizerConfig& opt = {},
                          const RunMode& mode = {},
                          const std::optional<QaoaInit>& init = std::nullopt) {
    if (p < 1) throw std::invalid_argument("qaoa_run: p must be >= 1");
    const QaoaInit init_cfg = init ? *init : qaoa_init_for(H);
    auto [circ, spec] = build_qaoa_ansatz(H, p);
    VqaResult res;
    res.method = "qaoa";
    res.n = H.n;
    res.p = p;
    res.param_count = spec.param_count;
    res.cnot_count = spec.cnot_count;
    res.shots_mode = !mode.exact();
    auto apply = [&H](Statevector& sv, const std::vector<double>& x) {
        apply_qaoa_ansatz(sv, H, x);
    };
    auto draw = [p, init_cfg](int r, Rng& rng) {
        std::vector<double> x(2 * static_cast<std::size_t>(p));
        if (r == 0) {
            for (int l = 1; l <= p; ++l) {
                const double frac = static_cast<double>(l) / static_cast<double>(p);
                x[2 * static_cast<std::size_t>(l - 1)] = frac * init_cfg.gamma_max;
                x[2 * static_cast<std::size_t>(l - 1) + 1] = (1.0 - frac) * init_cfg.beta_max;
            }
        } else {
            for (int l = 0; l < p; ++l) {
                x[2 * static_cast<std::size_t>(l)] = rng.uniform(init_cfg.gamma_min, init_cfg.gamma_max);
                x[2 * static_cast<std::size_t>(l) + 1] = rng.uniform(0.0, init_cfg.beta_max);
            }
        }
        return x;
    };
    return detail::drive(H, std::move(res), circ, apply, draw, opt, mode);
}

}  // namespace fmvqa
