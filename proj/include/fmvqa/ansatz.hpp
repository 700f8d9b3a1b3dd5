#pragma once

#include <stdexcept>
#include <vector>

#include "fmvqa/circuit.hpp"
#include "fmvqa/ising.hpp"
#include "fmvqa/statevector.hpp"

namespace fmvqa {

enum class AnsatzKind { RY, QAOA };

struct AnsatzSpec {
    AnsatzKind kind = AnsatzKind::RY;
    int n = 0;
    int depth = 0;  // RY entangling layers
    int p = 0;      // QAOA levels
    int param_count = 0;
    int cnot_count = 0;
};

// An RY layer on every qubit, then `depth` blocks of [linear CNOT chain
// 0->1->..->n-1, RY layer]. param_count = n(depth+1), cnot_count = (n-1)depth.
inline std::pair<Circuit, AnsatzSpec> build_ry_ansatz(int n, int depth) {
    if (n < 1 || depth < 0) throw std::invalid_argument("build_ry_ansatz: bad shape");
    Circuit c;
    c.n = n;
    c.param_slots = n * (depth + 1);
    int slot = 0;
    for (int q = 0; q < n; ++q) c.ops.push_back({GateKind::RY, q, -1, 1.0, slot++});
    for (int d = 0; d < depth; ++d) {
        for (int q = 0; q + 1 < n; ++q) c.ops.push_back({GateKind::CNOT, q, q + 1, 0.0, -1});
        for (int q = 0; q < n; ++q) c.ops.push_back({GateKind::RY, q, -1, 1.0, slot++});
    }
    AnsatzSpec spec;
    spec.kind = AnsatzKind::RY;
    spec.n = n;
    spec.depth = depth;
    spec.param_count = c.param_slots;
    spec.cnot_count = c.cnot_count();
    return {c, spec};
}

inline int ising_coupling_terms(const IsingModel& m) {
    int c = 0;
    for (double v : m.J) c += (v != 0.0);
    return c;
}

// H on every qubit, then per level l: the cost phase exp(-i gamma_l H) and the
// transverse mixer RX(2 beta_l). Parameters ordered (gamma_1, beta_1, ...).
//
// The measured spin observable is the negated Pauli-Z (bit 1 <-> s = +1), so
// RZ(site, t) contributes phase exp(+i t s/2) while the CNOT-conjugated RZ
// pair contributes exp(-i t s_i s_j / 2) (the two sign flips cancel).
// Realizing exp(-i gamma H) therefore takes ZZ(i, j, 2 gamma J_ij) and
// RZ(i, -2 gamma h_i).
inline std::pair<Circuit, AnsatzSpec> build_qaoa_ansatz(const IsingModel& m, int p) {
    if (p < 1) throw std::invalid_argument("build_qaoa_ansatz: p must be >= 1");
    Circuit c;
    c.n = m.n;
    c.param_slots = 2 * p;
    for (int q = 0; q < m.n; ++q) c.ops.push_back({GateKind::H, q, -1, 0.0, -1});
    for (int l = 0; l < p; ++l) {
        const int gslot = 2 * l;
        const int bslot = 2 * l + 1;
        for (int i = 0; i < m.n; ++i)
            for (int j = i + 1; j < m.n; ++j) {
                const double Jij = m.J[pair_index(i, j, m.n)];
                if (Jij == 0.0) continue;
                c.ops.push_back({GateKind::CNOT, i, j, 0.0, -1});
                c.ops.push_back({GateKind::RZ, j, -1, 2.0 * Jij, gslot});
                c.ops.push_back({GateKind::CNOT, i, j, 0.0, -1});
            }
        for (int i = 0; i < m.n; ++i) {
            const double hi = m.h[static_cast<std::size_t>(i)];
            if (hi != 0.0) c.ops.push_back({GateKind::RZ, i, -1, -2.0 * hi, gslot});
        }
        for (int q = 0; q < m.n; ++q) c.ops.push_back({GateKind::RX, q, -1, 2.0, bslot});
    }
    AnsatzSpec spec;
    spec.kind = AnsatzKind::QAOA;
    spec.n = m.n;
    spec.p = p;
    spec.param_count = c.param_slots;
    spec.cnot_count = c.cnot_count();
    return {c, spec};
}

// Direct statevector application of the same circuits; used in optimizer hot
// loops to skip gate-list interpretation. Must stay in lockstep with the
// builders above (checked by tests).
inline void apply_ry_ansatz(Statevector& sv, const std::vector<double>& params, int depth) {
    const int n = sv.num_qubits();
    if (static_cast<int>(params.size()) != n * (depth + 1))
        throw std::invalid_argument("ry ansatz: wrong parameter count");
    std::size_t kparam = 0;
    for (int q = 0; q < n; ++q) sv.apply_ry(q, params[kparam++]);
    for (int d = 0; d < depth; ++d) {
        for (int q = 0; q + 1 < n; ++q) sv.apply_cnot(q, q + 1);
        for (int q = 0; q < n; ++q) sv.apply_ry(q, params[kparam++]);
    }
}

inline void apply_qaoa_ansatz(Statevector& sv, const IsingModel& m,
                              const std::vector<double>& params) {
    if (params.size() % 2 != 0 || params.empty())
        throw std::invalid_argument("qaoa ansatz: parameters must be (gamma, beta) pairs");
    const int n = sv.num_qubits();
    if (n != m.n) throw std::invalid_argument("qaoa ansatz: qubit count mismatch");
    for (int q = 0; q < n; ++q) sv.apply_h(q);
    for (std::size_t l = 0; l + 1 < params.size(); l += 2) {
        const double gamma = params[l];
        const double beta = params[l + 1];
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double Jij = m.J[pair_index(i, j, n)];
                if (Jij != 0.0) sv.apply_zz(i, j, 2.0 * gamma * Jij);
            }
        for (int i = 0; i < n; ++i)
            if (m.h[static_cast<std::size_t>(i)] != 0.0)
                sv.apply_rz(i, -2.0 * gamma * m.h[static_cast<std::size_t>(i)]);
        for (int q = 0; q < n; ++q) sv.apply_rx(q, 2.0 * beta);
    }
}

}  // namespace fmvqa
