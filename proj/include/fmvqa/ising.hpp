#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fmvqa/qubo.hpp"

namespace fmvqa {

// E(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j over s in {-1,+1}^n,
// with s = 2q - 1 relating spins to QUBO bits.
struct IsingModel {
    int n = 0;
    std::vector<double> h;
    std::vector<double> J;  // strict upper triangle, same layout as QuboModel::upper
    double offset = 0.0;
    double scale = 1.0;
    double beta0 = 0.0;
    int n0 = -1;

    static IsingModel zeros(int n) {
        IsingModel m;
        m.n = n;
        m.h.assign(static_cast<std::size_t>(n), 0.0);
        m.J.assign(pair_count(n), 0.0);
        return m;
    }

    double coupling(int i, int j) const {
        if (i > j) std::swap(i, j);
        return J[pair_index(i, j, n)];
    }

    double energy_spins(const std::vector<int>& s) const {
        if (static_cast<int>(s.size()) != n)
            throw std::invalid_argument("spin vector length does not match model size");
        double e = offset;
        for (int i = 0; i < n; ++i) {
            e += h[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n; ++j)
                e += J[pair_index(i, j, n)] * s[static_cast<std::size_t>(i)] *
                     s[static_cast<std::size_t>(j)];
        }
        return e;
    }

    double evaluate(const Bits& q) const {
        std::vector<int> s(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) s[i] = spin_of(q[i]);
        return energy_spins(s);
    }

    double evaluate_index(std::uint64_t idx) const { return evaluate(index_to_bits(idx, n)); }
};

// Substituting q = (s+1)/2 into the QUBO form:
//   h_i = Q_ii/2 + sum_{j != i} Q_ij/4
//   J_ij = Q_ij/4
//   offset += sum_i Q_ii/2 + sum_{i<j} Q_ij/4
inline IsingModel qubo_to_ising(const QuboModel& q) {
    IsingModel m = IsingModel::zeros(q.n);
    m.offset = q.offset;
    m.scale = q.scale;
    m.beta0 = q.beta0;
    m.n0 = q.n0;
    for (int i = 0; i < q.n; ++i) {
        m.h[static_cast<std::size_t>(i)] = q.diag[static_cast<std::size_t>(i)] / 2.0;
        m.offset += q.diag[static_cast<std::size_t>(i)] / 2.0;
    }
    for (int i = 0; i < q.n; ++i) {
        for (int j = i + 1; j < q.n; ++j) {
            const double v = q.upper[pair_index(i, j, q.n)];
            if (v == 0.0) continue;
            m.J[pair_index(i, j, q.n)] = v / 4.0;
            m.h[static_cast<std::size_t>(i)] += v / 4.0;
            m.h[static_cast<std::size_t>(j)] += v / 4.0;
            m.offset += v / 4.0;
        }
    }
    return m;
}

// Exact inverse of qubo_to_ising.
inline QuboModel ising_to_qubo(const IsingModel& m) {
    QuboModel q = QuboModel::zeros(m.n);
    q.offset = m.offset;
    for (int i = 0; i < m.n; ++i) {
        for (int j = i + 1; j < m.n; ++j) {
            const double v = m.J[pair_index(i, j, m.n)];
            q.upper[pair_index(i, j, m.n)] = 4.0 * v;
            q.offset += v;
        }
    }
    for (int i = 0; i < m.n; ++i) {
        double hi = m.h[static_cast<std::size_t>(i)];
        double row = 0.0;
        for (int j = 0; j < m.n; ++j) {
            if (j == i) continue;
            row += m.coupling(i, j);
        }
        q.diag[static_cast<std::size_t>(i)] = 2.0 * hi - 2.0 * row;
        q.offset += -hi + row;
    }
    return q;
}

// Energies of all 2^n basis assignments, indexed by basis-state index with
// site 0 as the most significant bit. Incremental spin flips keep this
// O(2^n * n) instead of O(2^n * n^2).
inline std::vector<double> enumerate_ising(const IsingModel& m) {
    if (m.n < 1 || m.n > 26) throw std::invalid_argument("enumeration supports 1..26 variables");
    const int n = m.n;
    const std::uint64_t size = 1ULL << n;
    std::vector<double> e(size);
    std::vector<int> s(static_cast<std::size_t>(n), -1);

    double cur = m.offset;
    for (int i = 0; i < n; ++i) {
        cur -= m.h[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) cur += m.J[pair_index(i, j, n)];
    }
    e[0] = cur;

    // Gray-code walk: each step flips exactly one site.
    std::uint64_t gray_prev = 0;
    for (std::uint64_t k = 1; k < size; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t diff = gray ^ gray_prev;
        int bitpos = 0;
        while (!((diff >> bitpos) & 1ULL)) ++bitpos;
        const int site = n - 1 - bitpos;

        double field = m.h[static_cast<std::size_t>(site)];
        for (int j = 0; j < n; ++j) {
            if (j == site) continue;
            field += m.coupling(site, j) * s[static_cast<std::size_t>(j)];
        }
        const int old = s[static_cast<std::size_t>(site)];
        cur += -2.0 * old * field;
        s[static_cast<std::size_t>(site)] = -old;
        e[gray] = cur;
        gray_prev = gray;
    }
    return e;
}

inline ExactSolution solve_ising_exact(const IsingModel& m) {
    return argmin_energies(enumerate_ising(m));
}

struct SpectrumLevel {
    double energy = 0.0;
    std::vector<std::uint64_t> states;
};

struct Spectrum {
    std::vector<SpectrumLevel> levels;  // ascending, within `window` of the ground level
    bool has_gap = false;
    double gap = 0.0;  // E1 - E0 over the full spectrum, absent when fully degenerate
};

inline Spectrum spectrum(const IsingModel& m, double window, double level_tol = 1e-9) {
    if (window <= 0.0) throw std::invalid_argument("spectrum: window must be positive");
    const std::vector<double> e = enumerate_ising(m);
    std::vector<std::uint64_t> order(e.size());
    for (std::uint64_t i = 0; i < e.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
        if (e[a] != e[b]) return e[a] < e[b];
        return a < b;
    });

    std::vector<SpectrumLevel> all;
    for (std::uint64_t idx : order) {
        if (all.empty() || e[idx] - all.back().energy > level_tol) all.push_back({e[idx], {}});
        all.back().states.push_back(idx);
    }
    Spectrum out;
    if (all.size() >= 2) {
        out.has_gap = true;
        out.gap = all[1].energy - all[0].energy;
    }
    const double e0 = all[0].energy;
    for (auto& level : all) {
        if (level.energy - e0 > window) break;
        out.levels.push_back(std::move(level));
    }
    return out;
}

}  // namespace fmvqa
