#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fmvqa/bits.hpp"

namespace fmvqa {

// Flattened index of the (i, j) pair, i < j, row-major over the strict upper
// triangle of an n x n matrix.
inline std::size_t pair_index(int i, int j, int n) {
    if (i >= j) throw std::invalid_argument("pair_index requires i < j");
    return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
           static_cast<std::size_t>(j - i - 1);
}

inline std::size_t pair_count(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

// E(q) = offset + sum_i diag_i q_i + sum_{i<j} upper_ij q_i q_j over q in {0,1}^n.
// scale/beta0/n0 are provenance: the divisor applied by scale_qubo, and the
// penalty weight/cardinality target applied by combine_qubo.
struct QuboModel {
    int n = 0;
    std::vector<double> diag;
    std::vector<double> upper;
    double offset = 0.0;
    double scale = 1.0;
    double beta0 = 0.0;
    int n0 = -1;

    static QuboModel zeros(int n) {
        QuboModel m;
        m.n = n;
        m.diag.assign(static_cast<std::size_t>(n), 0.0);
        m.upper.assign(pair_count(n), 0.0);
        return m;
    }

    double& at(int i, int j) {
        if (i == j) return diag[static_cast<std::size_t>(i)];
        if (i > j) std::swap(i, j);
        return upper[pair_index(i, j, n)];
    }

    double at(int i, int j) const {
        if (i == j) return diag[static_cast<std::size_t>(i)];
        if (i > j) std::swap(i, j);
        return upper[pair_index(i, j, n)];
    }

    double evaluate(const Bits& q) const {
        if (static_cast<int>(q.size()) != n)
            throw std::invalid_argument("bit vector length does not match model size");
        double e = offset;
        for (int i = 0; i < n; ++i) {
            if (!q[static_cast<std::size_t>(i)]) continue;
            e += diag[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n; ++j)
                if (q[static_cast<std::size_t>(j)]) e += upper[pair_index(i, j, n)];
        }
        return e;
    }

    double evaluate_index(std::uint64_t idx) const { return evaluate(index_to_bits(idx, n)); }
};

struct ExactSolution {
    std::uint64_t argmin_index = 0;
    double min_energy = 0.0;
    std::vector<std::uint64_t> ties;  // all indices within tie_tol of the minimum
};

inline std::vector<double> enumerate_qubo(const QuboModel& m) {
    if (m.n < 1 || m.n > 26) throw std::invalid_argument("enumeration supports 1..26 variables");
    const std::uint64_t size = 1ULL << m.n;
    std::vector<double> e(size);
    for (std::uint64_t idx = 0; idx < size; ++idx) e[idx] = m.evaluate_index(idx);
    return e;
}

inline ExactSolution argmin_energies(const std::vector<double>& e, double tie_tol = 1e-12) {
    ExactSolution s;
    s.min_energy = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < e.size(); ++i) {
        if (e[i] < s.min_energy) {
            s.min_energy = e[i];
            s.argmin_index = i;
        }
    }
    for (std::uint64_t i = 0; i < e.size(); ++i)
        if (e[i] <= s.min_energy + tie_tol) s.ties.push_back(i);
    return s;
}

inline ExactSolution solve_qubo_exact(const QuboModel& m) { return argmin_energies(enumerate_qubo(m)); }

// Divides all coefficients (and the offset) by the smallest nonzero
// |coefficient| so that the smallest surviving magnitude becomes 1. The
// offset is excluded from the minimum search but is divided too, keeping the
// energy landscape an exact rescaling of the original.
inline QuboModel scale_qubo(const QuboModel& m) {
    double smallest = std::numeric_limits<double>::infinity();
    for (double v : m.diag)
        if (v != 0.0) smallest = std::min(smallest, std::fabs(v));
    for (double v : m.upper)
        if (v != 0.0) smallest = std::min(smallest, std::fabs(v));
    if (!std::isfinite(smallest))
        throw std::invalid_argument("scale_qubo: model has no nonzero coefficient");
    QuboModel out = m;
    for (double& v : out.diag) v /= smallest;
    for (double& v : out.upper) v /= smallest;
    out.offset /= smallest;
    out.scale = smallest;
    return out;
}

// (sum_i q_i - (n - n0))^2 expanded over binary q: penalizes any assignment
// whose number of zero bits differs from n0. Using q_i^2 = q_i:
//   offset (n-n0)^2, diagonal 1 - 2(n-n0), off-diagonal 2.
inline QuboModel penalty_qubo_exact(int n, int n0) {
    if (n0 < 0 || n0 > n) throw std::invalid_argument("n0 must be in [0, n]");
    QuboModel p = QuboModel::zeros(n);
    const double target_ones = n - n0;
    p.offset = target_ones * target_ones;
    for (int i = 0; i < n; ++i) p.diag[static_cast<std::size_t>(i)] = 1.0 - 2.0 * target_ones;
    for (double& v : p.upper) v = 2.0;
    p.n0 = n0;
    return p;
}

// combined = base + beta0 * penalty.
inline QuboModel combine_qubo(const QuboModel& base, const QuboModel& penalty, double beta0 = 10.0) {
    if (base.n != penalty.n) throw std::invalid_argument("combine_qubo: size mismatch");
    QuboModel out = base;
    for (std::size_t i = 0; i < out.diag.size(); ++i) out.diag[i] += beta0 * penalty.diag[i];
    for (std::size_t i = 0; i < out.upper.size(); ++i) out.upper[i] += beta0 * penalty.upper[i];
    out.offset += beta0 * penalty.offset;
    out.beta0 = beta0;
    out.n0 = penalty.n0;
    return out;
}

}  // namespace fmvqa
