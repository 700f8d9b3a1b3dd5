#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fmvqa/ising.hpp"
#include "fmvqa/rng.hpp"
#include "fmvqa/statevector.hpp"

namespace fmvqa {

// Per-qubit readout flip probabilities plus a per-CNOT two-qubit
// depolarizing rate, realized as stochastic Pauli trajectories.
struct NoiseModel {
    double p01 = 0.0;               // P(read 1 | true 0)
    double p10 = 0.0;               // P(read 0 | true 1)
    double cnot_depolarizing = 0.0; // lambda per CNOT

    bool has_readout() const { return p01 > 0.0 || p10 > 0.0; }
    bool has_gate_noise() const { return cnot_depolarizing > 0.0; }
};

enum class GateKind { RY, RX, RZ, H, CNOT };

// angle = coeff * params[slot] when slot >= 0, else coeff.
struct GateOp {
    GateKind kind = GateKind::H;
    int q0 = 0;
    int q1 = -1;
    double coeff = 0.0;
    int slot = -1;
};

struct Circuit {
    int n = 0;
    int param_slots = 0;
    std::vector<GateOp> ops;

    int cnot_count() const {
        int c = 0;
        for (const auto& op : ops) c += (op.kind == GateKind::CNOT);
        return c;
    }
};

namespace detail {

// One of the 15 non-identity two-qubit Paulis, index in [0, 15) decoded as
// 4*a + b - 1 over single-qubit Paulis (I, X, Y, Z).
inline void apply_two_qubit_pauli(Statevector& sv, int qa, int qb, std::uint64_t which) {
    const int code = static_cast<int>(which) + 1;
    const int pa = code / 4;
    const int pb = code % 4;
    auto apply_single = [&](int q, int p) {
        switch (p) {
            case 1: sv.apply_x(q); break;
            case 2: sv.apply_y(q); break;
            case 3: sv.apply_z(q); break;
            default: break;
        }
    };
    apply_single(qa, pa);
    apply_single(qb, pb);
}

}  // namespace detail

// Executes the circuit on |0..0>. With a NoiseModel carrying a nonzero CNOT
// depolarizing rate, each CNOT is followed, with probability lambda, by a
// uniformly random non-identity two-qubit Pauli on its qubits (one stochastic
// trajectory; deterministic for a given seed).
inline Statevector run_circuit(const Circuit& c, const std::vector<double>& params,
                               const NoiseModel* noise = nullptr, std::uint64_t seed = 0) {
    if (static_cast<int>(params.size()) != c.param_slots)
        throw std::invalid_argument("run_circuit: parameter count mismatch");
    Statevector sv(c.n);
    Rng rng(seed);
    const bool noisy = noise != nullptr && noise->has_gate_noise();
    for (const auto& op : c.ops) {
        if (op.q0 < 0 || op.q0 >= c.n || (op.kind == GateKind::CNOT && (op.q1 < 0 || op.q1 >= c.n)))
            throw std::invalid_argument("run_circuit: qubit index out of range");
        const double angle = op.slot >= 0 ? op.coeff * params[static_cast<std::size_t>(op.slot)]
                                          : op.coeff;
        switch (op.kind) {
            case GateKind::RY: sv.apply_ry(op.q0, angle); break;
            case GateKind::RX: sv.apply_rx(op.q0, angle); break;
            case GateKind::RZ: sv.apply_rz(op.q0, angle); break;
            case GateKind::H: sv.apply_h(op.q0); break;
            case GateKind::CNOT:
                sv.apply_cnot(op.q0, op.q1);
                if (noisy && rng.uniform() < noise->cnot_depolarizing)
                    detail::apply_two_qubit_pauli(sv, op.q0, op.q1, rng.integer(15));
                break;
        }
    }
    return sv;
}

// Diagonal expectation: sum_b |amp_b|^2 E(b).
inline double expectation_from_table(const Statevector& sv, const std::vector<double>& energies) {
    if (sv.size() != energies.size())
        throw std::invalid_argument("expectation: dimension mismatch");
    double e = 0.0;
    const auto& amp = sv.amplitudes();
    for (std::size_t i = 0; i < amp.size(); ++i) e += std::norm(amp[i]) * energies[i];
    return e;
}

inline double expectation_ising(const Statevector& sv, const IsingModel& H) {
    if (sv.num_qubits() != H.n) throw std::invalid_argument("expectation_ising: dimension mismatch");
    return expectation_from_table(sv, enumerate_ising(H));
}

// Multinomial draw from |amp|^2, then independent per-qubit readout flips.
// Returned as dense per-index counts (2^n entries).
inline std::vector<std::uint64_t> sample_counts(const Statevector& sv, std::size_t shots,
                                                const NoiseModel* noise, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
    Rng rng(seed);
    std::vector<std::uint64_t> counts(sv.size(), 0);
    const auto raw = sv.sample(rng, shots);
    const int n = sv.num_qubits();
    const bool flips = noise != nullptr && noise->has_readout();
    for (std::uint64_t idx : raw) {
        std::uint64_t out = idx;
        if (flips) {
            for (int q = 0; q < n; ++q) {
                const std::uint64_t mask = std::uint64_t{1} << (n - 1 - q);
                const bool bit = (out & mask) != 0;
                const double pflip = bit ? noise->p10 : noise->p01;
                if (pflip > 0.0 && rng.uniform() < pflip) out ^= mask;
            }
        }
        ++counts[out];
    }
    return counts;
}

inline std::vector<double> normalize_counts(const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    if (total == 0) throw std::invalid_argument("normalize_counts: empty counts");
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return p;
}

}  // namespace fmvqa
