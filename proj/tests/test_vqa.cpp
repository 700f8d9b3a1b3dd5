#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fmvqa/vqa.hpp"

using namespace fmvqa;

namespace {

// ground state |10> (index 2) at energy -3
IsingModel two_site() {
    QuboModel q = QuboModel::zeros(2);
    q.at(0, 0) = -3.0;
    q.at(1, 1) = 2.0;
    q.at(0, 1) = 1.0;
    return qubo_to_ising(q);
}

}  // namespace

TEST_CASE("top_k_from sorts by probability with lexicographic ties", "[vqa]") {
    const std::vector<double> probs = {0.1, 0.4, 0.1, 0.4};
    const auto top = top_k_from(probs, 2, 10);
    REQUIRE(top.size() == 4);
    CHECK(top[0].index == 1);  // ties at 0.4 -> lower index first
    CHECK(top[1].index == 3);
    CHECK(top[2].index == 0);
    CHECK(top[3].index == 2);
    CHECK(top[0].bitstring == "01");
    CHECK(top[0].probability == 0.4);

    const auto two = top_k_from(probs, 2, 2);
    CHECK(two.size() == 2);
}

TEST_CASE("qaoa_init_for widens to the resonance window only with a penalty", "[vqa]") {
    IsingModel plain = IsingModel::zeros(3);
    const QaoaInit d = qaoa_init_for(plain);
    CHECK(d.gamma_min == 0.0);
    CHECK(d.gamma_max == 0.75);
    CHECK(d.beta_max == Catch::Approx(std::numbers::pi / 2.0));

    IsingModel pen = IsingModel::zeros(3);
    pen.beta0 = 10.0;
    const QaoaInit r = qaoa_init_for(pen);
    const double res = 2.0 * std::numbers::pi / 10.0;
    CHECK(r.gamma_min == Catch::Approx(0.7 * res));
    CHECK(r.gamma_max == Catch::Approx(1.2 * res));
    CHECK(r.beta_max == 0.8);
}

TEST_CASE("vqe finds the two-site ground state in exact mode", "[vqa]") {
    const IsingModel H = two_site();
    const auto sol = solve_ising_exact(H);
    REQUIRE(sol.argmin_index == 2);

    OptimizerConfig opt;
    opt.max_iter = 800;
    opt.rho_begin = 0.3;
    opt.rho_end = 1e-8;
    opt.restarts = 4;
    opt.seed = 5;
    const auto r = vqe_run(H, 1, opt);

    CHECK(r.method == "vqe");
    CHECK(r.n == 2);
    CHECK(r.depth == 1);
    CHECK(r.param_count == 4);
    CHECK(r.cnot_count == 1);
    CHECK_FALSE(r.shots_mode);
    CHECK(r.top_k[0].index == 2);
    CHECK(r.top_k[0].probability > 0.999);
    CHECK(r.best_energy == Catch::Approx(sol.min_energy).margin(1e-9));

    // bookkeeping
    REQUIRE(r.restart_energies.size() == 4);
    CHECK(r.best_restart >= 0);
    CHECK(r.best_restart < 4);
    CHECK(r.restart_energies[static_cast<std::size_t>(r.best_restart)] == r.best_energy);
    CHECK(r.total_evaluations <= 4 * 800);
    REQUIRE(!r.energy_trace.empty());
    double trace_min = r.energy_trace[0].second;
    for (const auto& [i, e] : r.energy_trace) trace_min = std::min(trace_min, e);
    CHECK(trace_min == r.best_energy);
    CHECK(r.final_distribution.size() == 4);
}

TEST_CASE("every restart respects the variational bound in exact mode", "[vqa]") {
    const IsingModel H = two_site();
    const auto sol = solve_ising_exact(H);
    OptimizerConfig opt;
    opt.max_iter = 150;
    opt.restarts = 6;
    opt.seed = 2;
    const auto rv = vqe_run(H, 1, opt);
    for (double e : rv.restart_energies) CHECK(e >= sol.min_energy - 1e-9);
    const auto rq = qaoa_run(H, 1, opt);
    for (double e : rq.restart_energies) CHECK(e >= sol.min_energy - 1e-9);
}

TEST_CASE("qaoa finds the two-site ground state in exact mode", "[vqa]") {
    const IsingModel H = two_site();
    OptimizerConfig opt;
    opt.max_iter = 600;
    opt.rho_end = 1e-6;
    opt.restarts = 4;
    opt.seed = 3;
    const auto r = qaoa_run(H, 2, opt);
    CHECK(r.method == "qaoa");
    CHECK(r.p == 2);
    CHECK(r.param_count == 4);
    CHECK(r.cnot_count == 4);  // one coupling, two cnots per level
    CHECK(r.top_k[0].index == 2);
    CHECK(r.top_k[0].probability > 0.999);
    CHECK(r.best_energy == Catch::Approx(-3.0).margin(1e-9));
}

TEST_CASE("runs are bitwise deterministic for a fixed seed", "[vqa]") {
    const IsingModel H = two_site();
    OptimizerConfig opt;
    opt.max_iter = 200;
    opt.restarts = 2;
    opt.seed = 17;
    const auto a = vqe_run(H, 1, opt);
    const auto b = vqe_run(H, 1, opt);
    CHECK(a.best_params == b.best_params);
    CHECK(a.best_energy == b.best_energy);
    CHECK(a.final_distribution == b.final_distribution);

    opt.seed = 18;
    const auto c = vqe_run(H, 1, opt);
    CHECK(a.final_distribution != c.final_distribution);

    ShotConfig sc;
    sc.shots = 512;
    sc.noise.p01 = 0.02;
    sc.noise.p10 = 0.03;
    sc.noise.cnot_depolarizing = 0.05;
    OptimizerConfig sopt;
    sopt.max_iter = 40;
    sopt.rho_end = 1e-2;
    sopt.restarts = 2;
    sopt.seed = 4;
    const auto sa = qaoa_run(H, 1, sopt, shots_mode(sc));
    const auto sb = qaoa_run(H, 1, sopt, shots_mode(sc));
    CHECK(sa.final_distribution == sb.final_distribution);
    CHECK(sa.best_energy == sb.best_energy);
}

TEST_CASE("shot mode estimates and flags, with and without mitigation", "[vqa]") {
    const IsingModel H = two_site();
    OptimizerConfig opt;
    opt.max_iter = 60;
    opt.rho_end = 1e-2;
    opt.restarts = 2;
    opt.seed = 7;

    ShotConfig plain;
    plain.shots = 1024;
    const auto r = vqe_run(H, 1, opt, shots_mode(plain));
    CHECK(r.shots_mode);
    CHECK_FALSE(r.mitigated);
    CHECK(r.top_k[0].index == 2);
    double sum = 0.0;
    for (double p : r.final_distribution) {
        CHECK(p >= 0.0);
        sum += p;
    }
    CHECK(sum == Catch::Approx(1.0).margin(1e-9));

    ShotConfig noisy;
    noisy.shots = 2048;
    noisy.noise.p01 = 0.05;
    noisy.noise.p10 = 0.05;
    noisy.mitigate = true;
    noisy.calibration_shots = 4000;
    const auto m = vqe_run(H, 1, opt, shots_mode(noisy));
    CHECK(m.mitigated);
    CHECK(m.top_k[0].index == 2);
    sum = 0.0;
    for (double p : m.final_distribution) sum += p;
    CHECK(sum == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("vqa argument validation", "[vqa]") {
    const IsingModel H = two_site();
    CHECK_THROWS_AS(vqe_run(H, 0), std::invalid_argument);
    CHECK_THROWS_AS(qaoa_run(H, 0), std::invalid_argument);
    OptimizerConfig opt;
    opt.restarts = 0;
    CHECK_THROWS_AS(vqe_run(H, 1, opt), std::invalid_argument);
}
