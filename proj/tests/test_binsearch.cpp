#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "fmvqa/binsearch.hpp"

using namespace fmvqa;

namespace {

IsingModel five_site() {
    QuboModel q = QuboModel::zeros(5);
    Rng rng(29);
    for (auto& v : q.diag) v = rng.uniform(-1.0, 1.0);
    for (auto& v : q.upper) v = rng.uniform(-1.0, 1.0);
    return qubo_to_ising(q);
}

}  // namespace

TEST_CASE("marginals accumulate per-site probabilities", "[binsearch]") {
    const std::vector<double> dist = {0.5, 0.25, 0.125, 0.125};
    const auto m = marginals(dist, {3, 7});
    CHECK(m.sites == std::vector<int>{3, 7});
    CHECK(m.p1[0] == Catch::Approx(0.25));   // mass on indices 2, 3
    CHECK(m.p0[0] == Catch::Approx(0.75));
    CHECK(m.p1[1] == Catch::Approx(0.375));  // mass on indices 1, 3
    CHECK(m.p0[1] == Catch::Approx(0.625));

    CHECK_THROWS_AS(marginals(dist, {1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(marginals({0.5, 0.4}, {1}), std::invalid_argument);  // not normalized
}

TEST_CASE("fix_qubits preserves energies over every completion", "[binsearch]") {
    const IsingModel H = five_site();
    const std::map<int, int> fixes = {{1, 1}, {3, 0}};
    const ReducedIsing red = fix_qubits(H, fixes);

    REQUIRE(red.site_map == std::vector<int>{0, 2, 4});
    REQUIRE(red.H.n == 3);
    CHECK(red.H.scale == H.scale);
    CHECK(red.H.beta0 == H.beta0);
    CHECK(red.H.n0 == H.n0);

    for (std::uint64_t idx = 0; idx < 8; ++idx) {
        const Bits part = index_to_bits(idx, 3);
        Bits full(5, 0);
        full[1] = 1;
        full[3] = 0;
        for (std::size_t a = 0; a < 3; ++a)
            full[static_cast<std::size_t>(red.site_map[a])] = part[a];
        CHECK(red.H.evaluate(part) == Catch::Approx(H.evaluate(full)).margin(1e-12));
    }
}

TEST_CASE("fixing no qubits is the identity", "[binsearch]") {
    const IsingModel H = five_site();
    const ReducedIsing red = fix_qubits(H, {});
    CHECK(red.site_map == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(red.H.n == H.n);
    CHECK(red.H.h == H.h);
    CHECK(red.H.J == H.J);
    CHECK(red.H.offset == H.offset);
}

TEST_CASE("fixing everything folds the model into the offset", "[binsearch]") {
    const IsingModel H = five_site();
    const std::map<int, int> all = {{0, 1}, {1, 0}, {2, 1}, {3, 1}, {4, 0}};
    const ReducedIsing red = fix_qubits(H, all);
    CHECK(red.site_map.empty());
    CHECK(red.H.n == 0);
    CHECK(red.H.offset == Catch::Approx(H.evaluate({1, 0, 1, 1, 0})).margin(1e-12));
}

TEST_CASE("fix_qubits validates sites and bits", "[binsearch]") {
    const IsingModel H = five_site();
    CHECK_THROWS_AS(fix_qubits(H, {{5, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(fix_qubits(H, {{-1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(fix_qubits(H, {{2, 2}}), std::invalid_argument);
}

TEST_CASE("binary search with a converged vqe solver finds the ground state", "[binsearch]") {
    const IsingModel H = five_site();
    const auto sol = solve_ising_exact(H);
    const Bits want = index_to_bits(sol.argmin_index, 5);

    BinSearchSolver solver;  // vqe, depth 1
    OptimizerConfig loose = loose_optimizer();
    loose.max_iter = 300;
    loose.rho_end = 1e-3;
    const auto [bits, trace] = binary_search_solve(H, solver, 0.7, loose, exact_mode(), 1);

    CHECK(bits == want);
    REQUIRE(!trace.rounds.empty());
    std::size_t fixed_total = 0;
    int prev_n = H.n + 1;
    for (const auto& r : trace.rounds) {
        CHECK(!r.fixed.empty());
        CHECK(r.reduced_n < prev_n);
        prev_n = r.reduced_n;
        CHECK(r.evaluations > 0);
        CHECK(r.top_probability > 0.0);
        fixed_total += r.fixed.size();
    }
    CHECK(fixed_total == 5);
}

TEST_CASE("binary search with the qaoa solver", "[binsearch]") {
    const IsingModel H = five_site();
    const auto sol = solve_ising_exact(H);

    BinSearchSolver solver;
    solver.method = "qaoa";
    solver.p = 2;
    OptimizerConfig loose = loose_optimizer();
    loose.max_iter = 250;
    loose.rho_end = 1e-3;
    const auto [bits, trace] = binary_search_solve(H, solver, 0.7, loose, exact_mode(), 1);
    CHECK(bits == index_to_bits(sol.argmin_index, 5));
    CHECK(trace.rounds.size() >= 2);  // loose qaoa cannot fix everything at once
}

TEST_CASE("delta = 1 degrades to one forced fix per round", "[binsearch]") {
    const IsingModel H = five_site();
    const auto sol = solve_ising_exact(H);

    BinSearchSolver solver;
    OptimizerConfig loose = loose_optimizer();
    loose.max_iter = 120;
    const auto [bits, trace] = binary_search_solve(H, solver, 1.0, loose, exact_mode(), 4);
    CHECK(bits == index_to_bits(sol.argmin_index, 5));
    REQUIRE(trace.rounds.size() == 5);
    for (const auto& r : trace.rounds) CHECK(r.fixed.size() == 1);
}

TEST_CASE("binary search validates delta and method", "[binsearch]") {
    const IsingModel H = five_site();
    const BinSearchSolver solver;
    const OptimizerConfig loose = loose_optimizer();
    CHECK_THROWS_AS(binary_search_solve(H, solver, 0.5, loose, exact_mode(), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(binary_search_solve(H, solver, 1.01, loose, exact_mode(), 1),
                    std::invalid_argument);
    BinSearchSolver bad;
    bad.method = "annealing";
    CHECK_THROWS_AS(binary_search_solve(H, bad, 0.7, loose, exact_mode(), 1),
                    std::invalid_argument);
}
