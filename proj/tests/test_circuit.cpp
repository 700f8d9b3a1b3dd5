#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fmvqa/circuit.hpp"

using namespace fmvqa;

namespace {

Circuit bell_circuit() {
    Circuit c;
    c.n = 2;
    c.param_slots = 0;
    c.ops.push_back({GateKind::H, 0, -1, 0.0, -1});
    c.ops.push_back({GateKind::CNOT, 0, 1, 0.0, -1});
    return c;
}

}  // namespace

TEST_CASE("run_circuit matches direct gate application", "[circuit]") {
    Circuit c;
    c.n = 3;
    c.param_slots = 2;
    c.ops.push_back({GateKind::RY, 0, -1, 1.0, 0});
    c.ops.push_back({GateKind::H, 1, -1, 0.0, -1});
    c.ops.push_back({GateKind::CNOT, 1, 2, 0.0, -1});
    c.ops.push_back({GateKind::RZ, 2, -1, -2.0, 1});   // angle = -2 * params[1]
    c.ops.push_back({GateKind::RX, 1, -1, 0.55, -1});  // fixed angle

    const std::vector<double> params = {0.8, 0.3};
    const Statevector got = run_circuit(c, params);

    Statevector want(3);
    want.apply_ry(0, 0.8);
    want.apply_h(1);
    want.apply_cnot(1, 2);
    want.apply_rz(2, -0.6);
    want.apply_rx(1, 0.55);

    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got.amplitudes()[i].real() ==
              Catch::Approx(want.amplitudes()[i].real()).margin(1e-14));
        CHECK(got.amplitudes()[i].imag() ==
              Catch::Approx(want.amplitudes()[i].imag()).margin(1e-14));
    }
}

TEST_CASE("run_circuit validates parameters and qubit indices", "[circuit]") {
    Circuit c = bell_circuit();
    CHECK_THROWS_AS(run_circuit(c, {0.1}), std::invalid_argument);
    c.ops.push_back({GateKind::RY, 5, -1, 0.0, -1});
    CHECK_THROWS_AS(run_circuit(c, {}), std::invalid_argument);
    Circuit bad = bell_circuit();
    bad.ops[1].q1 = 7;
    CHECK_THROWS_AS(run_circuit(bad, {}), std::invalid_argument);
}

TEST_CASE("cnot_count counts only CNOTs", "[circuit]") {
    Circuit c = bell_circuit();
    CHECK(c.cnot_count() == 1);
    c.ops.push_back({GateKind::CNOT, 1, 0, 0.0, -1});
    c.ops.push_back({GateKind::RZ, 0, -1, 0.2, -1});
    CHECK(c.cnot_count() == 2);
}

TEST_CASE("gate-noise trajectories are seeded and stay normalized", "[circuit]") {
    Circuit c = bell_circuit();
    for (int r = 0; r < 6; ++r) c.ops.push_back({GateKind::CNOT, 0, 1, 0.0, -1});
    NoiseModel nm;
    nm.cnot_depolarizing = 0.5;

    const Statevector a = run_circuit(c, {}, &nm, 42);
    const Statevector b = run_circuit(c, {}, &nm, 42);
    CHECK(a.amplitudes() == b.amplitudes());

    // a strong rate across many seeds must produce at least one perturbed trajectory
    const Statevector clean = run_circuit(c, {});
    bool any_differs = false;
    double norm = 0.0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Statevector t = run_circuit(c, {}, &nm, seed);
        if (t.amplitudes() != clean.amplitudes()) any_differs = true;
        norm = 0.0;
        for (const auto& amp : t.amplitudes()) norm += std::norm(amp);
        CHECK(norm == Catch::Approx(1.0).margin(1e-12));
    }
    CHECK(any_differs);

    // lambda = 0 (or no noise model) leaves the state untouched
    NoiseModel off;
    off.p01 = 0.2;  // readout noise must not affect the statevector
    const Statevector untouched = run_circuit(c, {}, &off, 9);
    CHECK(untouched.amplitudes() == clean.amplitudes());
}

TEST_CASE("two-qubit pauli decoding covers all 15 non-identity cases", "[circuit]") {
    // each code must change the Bell state except pure-Z combinations, which
    // only flip signs; all must preserve the norm
    Statevector base(2);
    base.apply_h(0);
    base.apply_cnot(0, 1);
    for (std::uint64_t which = 0; which < 15; ++which) {
        Statevector sv = base;
        detail::apply_two_qubit_pauli(sv, 0, 1, which);
        double norm = 0.0;
        for (const auto& amp : sv.amplitudes()) norm += std::norm(amp);
        CHECK(norm == Catch::Approx(1.0).margin(1e-12));
    }
    // spot checks: which=0 -> I X, which=3 -> X I, which=14 -> Z Z
    Statevector sv(2);
    detail::apply_two_qubit_pauli(sv, 0, 1, 0);
    CHECK(std::norm(sv.amplitudes()[1]) == Catch::Approx(1.0));
    sv.reset();
    detail::apply_two_qubit_pauli(sv, 0, 1, 3);
    CHECK(std::norm(sv.amplitudes()[2]) == Catch::Approx(1.0));
    sv.reset();
    detail::apply_two_qubit_pauli(sv, 0, 1, 14);
    CHECK(sv.amplitudes()[0].real() == Catch::Approx(1.0));
}

TEST_CASE("diagonal expectations", "[circuit]") {
    Statevector sv(2);
    sv.apply_h(0);  // half |00>, half |10>
    const std::vector<double> table = {1.0, 2.0, 5.0, 9.0};
    CHECK(expectation_from_table(sv, table) == Catch::Approx(3.0));
    CHECK_THROWS_AS(expectation_from_table(sv, {1.0}), std::invalid_argument);

    IsingModel H = IsingModel::zeros(2);
    H.h = {1.0, 0.0};
    H.offset = 0.5;
    // site 0 observable is -Z: |00> -> s0 = -1 gives h0*s0 = -1; |10> -> +1
    CHECK(expectation_ising(sv, H) == Catch::Approx(0.5));
    Statevector sv3(3);
    CHECK_THROWS_AS(expectation_ising(sv3, H), std::invalid_argument);
}

TEST_CASE("sample_counts applies seeded readout flips", "[circuit]") {
    Statevector sv(2);
    sv.apply_x(0);  // deterministic |10>

    const auto clean = sample_counts(sv, 1000, nullptr, 3);
    CHECK(clean[2] == 1000);

    NoiseModel nm;
    nm.p01 = 0.1;
    nm.p10 = 0.2;
    const auto noisy1 = sample_counts(sv, 20000, &nm, 3);
    const auto noisy2 = sample_counts(sv, 20000, &nm, 3);
    CHECK(noisy1 == noisy2);
    std::uint64_t total = 0;
    for (auto c : noisy1) total += c;
    CHECK(total == 20000);
    // site 0 reads 1 unless flipped by p10; site 1 reads 0 unless flipped by p01
    const double p_site0_one = static_cast<double>(noisy1[2] + noisy1[3]) / 20000.0;
    const double p_site1_one = static_cast<double>(noisy1[1] + noisy1[3]) / 20000.0;
    CHECK(p_site0_one == Catch::Approx(0.8).margin(0.02));
    CHECK(p_site1_one == Catch::Approx(0.1).margin(0.02));

    CHECK_THROWS_AS(sample_counts(sv, 0, nullptr, 1), std::invalid_argument);
}

TEST_CASE("normalize_counts", "[circuit]") {
    const std::vector<std::uint64_t> counts = {1, 3, 0, 4};
    const auto p = normalize_counts(counts);
    CHECK(p == std::vector<double>{0.125, 0.375, 0.0, 0.5});
    CHECK_THROWS_AS(normalize_counts({0, 0}), std::invalid_argument);
}
