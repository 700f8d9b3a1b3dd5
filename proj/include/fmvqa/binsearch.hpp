#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fmvqa/bits.hpp"
#include "fmvqa/ising.hpp"
#include "fmvqa/rng.hpp"
#include "fmvqa/vqa.hpp"

namespace fmvqa {

// Per remaining qubit: probability of reading 0 / 1, aligned with `sites`.
struct Marginals {
    std::vector<int> sites;  // original site ids
    std::vector<double> p0;
    std::vector<double> p1;
};

inline Marginals marginals(const std::vector<double>& dist, const std::vector<int>& remaining) {
    const std::size_t k = remaining.size();
    if (dist.size() != (std::size_t{1} << k))
        throw std::invalid_argument("marginals: distribution size does not match remaining sites");
    double total = 0.0;
    for (double v : dist) total += v;
    if (std::fabs(total - 1.0) > 1e-6)
        throw std::invalid_argument("marginals: distribution not normalized");
    Marginals m;
    m.sites = remaining;
    m.p0.assign(k, 0.0);
    m.p1.assign(k, 0.0);
    for (std::size_t idx = 0; idx < dist.size(); ++idx) {
        for (std::size_t i = 0; i < k; ++i) {
            const bool one = (idx >> (k - 1 - i)) & 1u;
            (one ? m.p1[i] : m.p0[i]) += dist[idx];
        }
    }
    return m;
}

// Reduced Hamiltonian plus the dense reindexing: site_map[new index] = old site.
struct ReducedIsing {
    IsingModel H;
    std::vector<int> site_map;
};

// Substitutes s_i = 2 b_i - 1 for every fixed site: couplings with one fixed
// endpoint fold into the other endpoint's field, fully fixed terms fold into
// the offset.
inline ReducedIsing fix_qubits(const IsingModel& H, const std::map<int, int>& fixes) {
    for (const auto& [site, bit] : fixes) {
        if (site < 0 || site >= H.n) throw std::invalid_argument("fix_qubits: site out of range");
        if (bit != 0 && bit != 1) throw std::invalid_argument("fix_qubits: bit must be 0 or 1");
    }
    auto spin = [&fixes](int site) { return fixes.at(site) == 1 ? 1.0 : -1.0; };

    ReducedIsing out;
    for (int i = 0; i < H.n; ++i)
        if (!fixes.count(i)) out.site_map.push_back(i);
    const int m = static_cast<int>(out.site_map.size());

    out.H.n = m;
    out.H.scale = H.scale;
    out.H.beta0 = H.beta0;
    out.H.n0 = H.n0;
    out.H.h.assign(static_cast<std::size_t>(m), 0.0);
    out.H.J.assign(static_cast<std::size_t>(m) * (m - 1) / 2, 0.0);

    double offset = H.offset;
    for (const auto& [site, bit] : fixes)
        offset += H.h[static_cast<std::size_t>(site)] * (bit == 1 ? 1.0 : -1.0);

    std::vector<int> new_index(static_cast<std::size_t>(H.n), -1);
    for (int a = 0; a < m; ++a) new_index[static_cast<std::size_t>(out.site_map[a])] = a;
    for (int a = 0; a < m; ++a)
        out.H.h[static_cast<std::size_t>(a)] = H.h[static_cast<std::size_t>(out.site_map[a])];

    for (int i = 0; i < H.n; ++i)
        for (int j = i + 1; j < H.n; ++j) {
            const double Jij = H.J[pair_index(i, j, H.n)];
            if (Jij == 0.0) continue;
            const bool fi = fixes.count(i) != 0, fj = fixes.count(j) != 0;
            if (fi && fj)
                offset += Jij * spin(i) * spin(j);
            else if (fi)
                out.H.h[static_cast<std::size_t>(new_index[static_cast<std::size_t>(j)])] += Jij * spin(i);
            else if (fj)
                out.H.h[static_cast<std::size_t>(new_index[static_cast<std::size_t>(i)])] += Jij * spin(j);
            else
                out.H.J[pair_index(new_index[static_cast<std::size_t>(i)],
                                   new_index[static_cast<std::size_t>(j)], m)] = Jij;
        }
    out.H.offset = offset;
    return out;
}

struct BinSearchSolver {
    std::string method = "vqe";  // "vqe" | "qaoa"
    int depth = 1;               // vqe entangling layers
    int p = 3;                   // qaoa levels
    std::optional<QaoaInit> qaoa_init;  // nullopt -> qaoa_init_for(reduced H)
};

inline OptimizerConfig loose_optimizer() {
    OptimizerConfig opt;
    opt.max_iter = 50;
    opt.rho_end = 1e-2;
    return opt;
}

struct BinSearchRound {
    Marginals marg;
    std::vector<std::pair<int, int>> fixed;  // (original site, bit) fixed this round
    int reduced_n = 0;                       // qubits solved this round
    double solver_energy = 0.0;
    double top_probability = 0.0;
    std::size_t evaluations = 0;
};

struct BinSearchTrace {
    std::vector<BinSearchRound> rounds;
};

inline std::pair<Bits, BinSearchTrace> binary_search_solve(const IsingModel& H,
                                                           const BinSearchSolver& solver,
                                                           double delta,
                                                           const OptimizerConfig& loose_opt,
                                                           const RunMode& mode,
                                                           std::uint64_t seed) {
    if (!(delta > 0.5) || !(delta <= 1.0))
        throw std::invalid_argument("binary_search_solve: delta must lie in (0.5, 1]");
    if (solver.method != "vqe" && solver.method != "qaoa")
        throw std::invalid_argument("binary_search_solve: unknown solver method " + solver.method);

    Bits full(static_cast<std::size_t>(H.n), 0);
    IsingModel cur = H;
    std::vector<int> site_map(static_cast<std::size_t>(H.n));
    for (int i = 0; i < H.n; ++i) site_map[static_cast<std::size_t>(i)] = i;

    BinSearchTrace trace;
    int round = 0;
    while (!site_map.empty()) {
        OptimizerConfig opt = loose_opt;
        opt.seed = derive_seed(seed, 0xB15Bu + static_cast<std::uint64_t>(round));
        const VqaResult r = solver.method == "vqe"
                                ? vqe_run(cur, solver.depth, opt, mode)
                                : qaoa_run(cur, solver.p, opt, mode, solver.qaoa_init);

        BinSearchRound rec;
        rec.marg = marginals(r.final_distribution, site_map);
        rec.reduced_n = cur.n;
        rec.solver_energy = r.best_energy;
        rec.top_probability = r.top_k.empty() ? 0.0 : r.top_k.front().probability;
        rec.evaluations = r.total_evaluations;

        std::map<int, int> fixes;  // reduced index -> bit
        for (std::size_t i = 0; i < site_map.size(); ++i) {
            const double hi = std::max(rec.marg.p0[i], rec.marg.p1[i]);
            if (hi > delta) fixes[static_cast<int>(i)] = rec.marg.p1[i] > rec.marg.p0[i] ? 1 : 0;
        }
        if (fixes.empty()) {
            std::size_t best = 0;
            double conf = -1.0;
            for (std::size_t i = 0; i < site_map.size(); ++i) {
                const double hi = std::max(rec.marg.p0[i], rec.marg.p1[i]);
                if (hi > conf) {
                    conf = hi;
                    best = i;
                }
            }
            fixes[static_cast<int>(best)] = rec.marg.p1[best] > rec.marg.p0[best] ? 1 : 0;
        }

        for (const auto& [idx, bit] : fixes) {
            const int site = site_map[static_cast<std::size_t>(idx)];
            full[static_cast<std::size_t>(site)] = static_cast<std::uint8_t>(bit);
            rec.fixed.emplace_back(site, bit);
        }
        trace.rounds.push_back(std::move(rec));

        ReducedIsing red = fix_qubits(cur, fixes);
        std::vector<int> next_map;
        next_map.reserve(red.site_map.size());
        for (int local : red.site_map)
            next_map.push_back(site_map[static_cast<std::size_t>(local)]);
        cur = std::move(red.H);
        site_map = std::move(next_map);
        ++round;
    }
    return {full, trace};
}

}  // namespace fmvqa
