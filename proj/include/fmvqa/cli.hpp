#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fmvqa/binsearch.hpp"
#include "fmvqa/dataset.hpp"
#include "fmvqa/fm.hpp"
#include "fmvqa/ising.hpp"
#include "fmvqa/qubo.hpp"
#include "fmvqa/serialize.hpp"
#include "fmvqa/vqa.hpp"

namespace fmvqa {

namespace cli_detail {

inline int infer_n(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset " + path);
    std::string header, line;
    if (!std::getline(in, header)) throw std::runtime_error("empty dataset " + path);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        const std::string field = line.substr(0, comma == std::string::npos ? line.size() : comma);
        return static_cast<int>(parse_feature_vector(field).size());
    }
    throw std::runtime_error("dataset has no records: " + path);
}

inline Dataset load_dataset_file(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset " + path);
    return load_dataset(in, n);
}

// Atomic CSV writer matching save_json's temp+rename discipline.
inline void save_text(const std::string& path, const std::string& body) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << body;
        if (!out) throw std::runtime_error("write failed on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed for " + path);
    }
}

inline std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct SolveArgs {
    std::string hamiltonian, out, method = "exact", mode = "exact", noise_path;
    int depth = 1, p = 1;
    std::size_t shots = 8192;
    bool mitigate = false, binary_search = false;
    double delta = 0.7;
    std::uint64_t seed = 0;
    int max_iter = -1, restarts = -1;
    double rho_begin = -1.0, rho_end = -1.0;
    double gamma_min = -1.0, gamma_max = -1.0, beta_max = -1.0;
};

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv) {
    CLI::App app{"factorization-machine surrogate + variational Ising solver pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; command-line flags win");

    // ---- train ----------------------------------------------------------
    std::string tr_data, tr_out, tr_report;
    int tr_n = 0;
    TrainConfig tr_cfg;
    double tr_threshold = 0.95;
    std::uint64_t tr_seed = 0;
    auto* train = app.add_subcommand("train", "train the FM surrogate over staged training sets");
    train->add_option("--data", tr_data, "dataset CSV (bitstring,value)")->required();
    train->add_option("--out", tr_out, "output model JSON")->required();
    train->add_option("--report", tr_report, "per-stage R^2 CSV (default <out>.stages.csv)");
    train->add_option("--n", tr_n, "variable count (default: inferred from the CSV)");
    train->add_option("--k", tr_cfg.k, "FM factor rank");
    train->add_option("--epochs", tr_cfg.epochs, "SGD epochs");
    train->add_option("--lr", tr_cfg.learning_rate, "SGD learning rate");
    train->add_option("--l2", tr_cfg.l2, "L2 regularization");
    train->add_option("--init-scale", tr_cfg.init_scale, "factor init stddev");
    train->add_option("--threshold", tr_threshold, "stop once test R^2 reaches this");
    train->add_option("--seed", tr_seed, "master seed");

    // ---- build ----------------------------------------------------------
    std::string bd_model, bd_out, bd_penalty = "none";
    double bd_beta0 = 10.0;
    auto* build = app.add_subcommand("build", "compile the surrogate into a scaled Ising Hamiltonian");
    build->add_option("--model", bd_model, "FM model JSON")->required();
    build->add_option("--out", bd_out, "output Hamiltonian JSON")->required();
    build->add_option("--penalty", bd_penalty, "'none' or 'n0=K' cardinality penalty");
    build->add_option("--beta0", bd_beta0, "penalty weight");

    // ---- solve ----------------------------------------------------------
    cli_detail::SolveArgs sv;
    auto* solve = app.add_subcommand("solve", "minimize a Hamiltonian exactly or variationally");
    solve->add_option("--hamiltonian", sv.hamiltonian, "Hamiltonian JSON")->required();
    solve->add_option("--out", sv.out, "output result JSON")->required();
    solve->add_option("--method", sv.method, "exact | vqe | qaoa");
    solve->add_option("--depth", sv.depth, "VQE ansatz entangling layers");
    solve->add_option("--p", sv.p, "QAOA levels");
    solve->add_option("--mode", sv.mode, "exact | shots");
    solve->add_option("--shots", sv.shots, "shots per objective evaluation");
    solve->add_option("--noise", sv.noise_path, "noise model JSON (shot mode)");
    solve->add_flag("--mitigate", sv.mitigate, "apply readout mitigation (shot mode)");
    solve->add_flag("--binary-search", sv.binary_search, "qubit-fixing binary-search refinement");
    solve->add_option("--delta", sv.delta, "binary-search marginal threshold");
    solve->add_option("--seed", sv.seed, "master seed");
    auto* sv_max_iter = solve->add_option("--max-iter", sv.max_iter, "optimizer evaluation budget");
    auto* sv_restarts = solve->add_option("--restarts", sv.restarts, "optimizer restarts");
    auto* sv_rho_begin = solve->add_option("--rho-begin", sv.rho_begin, "initial simplex scale");
    auto* sv_rho_end = solve->add_option("--rho-end", sv.rho_end, "terminal simplex diameter");
    auto* sv_gamma_lo = solve->add_option("--gamma-min", sv.gamma_min, "QAOA gamma init lower bound");
    auto* sv_gamma = solve->add_option("--gamma-max", sv.gamma_max, "QAOA gamma init upper bound");
    auto* sv_beta = solve->add_option("--beta-max", sv.beta_max, "QAOA beta init range");

    // ---- report ---------------------------------------------------------
    std::vector<std::string> rp_results;
    std::string rp_prefix = "report";
    std::size_t rp_top = 10;
    auto* report = app.add_subcommand("report", "render result tables and plot CSVs");
    report->add_option("--result", rp_results, "result JSON (repeat for side-by-side)")
        ->required()
        ->expected(1, 2);
    report->add_option("--out-prefix", rp_prefix, "prefix for emitted CSVs");
    report->add_option("--top", rp_top, "rows in the bitstring table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (train->parsed()) {
            const int n = tr_n > 0 ? tr_n : cli_detail::infer_n(tr_data);
            const Dataset ds = cli_detail::load_dataset_file(tr_data, n);
            if (tr_report.empty()) tr_report = tr_out + ".stages.csv";

            json stages = json::array();
            std::ostringstream csv;
            csv << "stage,train_size,test_size,r2\n";
            FmModel model;
            double r2 = 0.0;
            int stage = 0;
            bool reached = false;
            for (stage = 0; stage < n; ++stage) {
                const auto [train_ds, test_ds] = select_training_set(ds, stage, tr_seed);
                TrainConfig cfg = tr_cfg;
                cfg.seed = derive_seed(tr_seed, 100 + static_cast<std::uint64_t>(stage));
                auto [m, trace] = fm_train(train_ds, cfg);
                model = std::move(m);
                if (test_ds.records.empty()) {
                    r2 = 1.0;  // nothing held out to validate against
                } else {
                    std::vector<double> pred, target;
                    for (const auto& rec : test_ds.records) {
                        pred.push_back(fm_predict(model, rec.x));
                        target.push_back(rec.y);
                    }
                    r2 = r_squared(pred, target);
                }
                stages.push_back(json{{"stage", stage},
                                      {"train_size", train_ds.records.size()},
                                      {"test_size", test_ds.records.size()},
                                      {"r2", r2}});
                csv << stage << ',' << train_ds.records.size() << ',' << test_ds.records.size()
                    << ',' << cli_detail::format_g(r2) << '\n';
                if (r2 >= tr_threshold) {
                    reached = true;
                    break;
                }
            }
            if (!reached) {
                std::cerr << "warning: test R^2 " << r2 << " below threshold " << tr_threshold
                          << " at final stage; writing the last model anyway\n";
                stage = n - 1;
            }
            json doc = to_json(model);
            doc["stages"] = stages;
            doc["final_stage"] = stage;
            doc["r2"] = r2;
            doc["config"] = json{{"command", "train"}, {"data", tr_data},     {"n", n},
                                 {"k", tr_cfg.k},      {"epochs", tr_cfg.epochs},
                                 {"lr", tr_cfg.learning_rate}, {"l2", tr_cfg.l2},
                                 {"init_scale", tr_cfg.init_scale}, {"threshold", tr_threshold},
                                 {"seed", tr_seed}};
            save_json(tr_out, doc);
            cli_detail::save_text(tr_report, csv.str());
            std::cout << "stage " << stage << " test R^2 " << r2 << "; model -> " << tr_out << "\n";
            return 0;
        }

        if (build->parsed()) {
            const FmModel model = fm_from_json(load_json(bd_model));
            QuboModel q = scale_qubo(fm_to_qubo(model));
            int n0 = -1;
            if (bd_penalty != "none") {
                if (bd_penalty.rfind("n0=", 0) != 0)
                    throw std::runtime_error("--penalty must be 'none' or 'n0=K'");
                std::size_t used = 0;
                n0 = std::stoi(bd_penalty.substr(3), &used);
                if (used != bd_penalty.size() - 3)
                    throw std::runtime_error("--penalty must be 'none' or 'n0=K'");
                q = combine_qubo(q, penalty_qubo_exact(model.n, n0), bd_beta0);
            }
            const IsingModel H = qubo_to_ising(q);
            json doc = to_json(H);
            doc["config"] = json{{"command", "build"},
                                 {"model", bd_model},
                                 {"penalty", bd_penalty},
                                 {"beta0", bd_beta0},
                                 {"n0", n0}};
            save_json(bd_out, doc);
            std::cout << "ising n=" << H.n << (n0 >= 0 ? " constrained" : " unconstrained")
                      << " -> " << bd_out << "\n";
            return 0;
        }

        if (solve->parsed()) {
            const IsingModel H = ising_from_json(load_json(sv.hamiltonian));

            RunMode mode;
            NoiseModel noise;
            if (sv.mode == "shots") {
                if (!sv.noise_path.empty()) noise = noise_from_json(load_json(sv.noise_path));
                ShotConfig sc;
                sc.shots = sv.shots;
                sc.noise = noise;
                sc.mitigate = sv.mitigate;
                mode = shots_mode(sc);
            } else if (sv.mode == "exact") {
                if (!sv.noise_path.empty())
                    throw std::runtime_error("--noise requires --mode shots");
                if (sv.mitigate) throw std::runtime_error("--mitigate requires --mode shots");
            } else {
                throw std::runtime_error("unknown --mode " + sv.mode);
            }

            json config{{"command", "solve"},   {"hamiltonian", sv.hamiltonian},
                        {"method", sv.method},  {"mode", sv.mode},
                        {"depth", sv.depth},    {"p", sv.p},
                        {"shots", sv.shots},    {"noise", sv.noise_path},
                        {"mitigate", sv.mitigate}, {"binary_search", sv.binary_search},
                        {"delta", sv.delta},    {"seed", sv.seed}};

            if (sv.method == "exact") {
                if (sv.binary_search)
                    throw std::runtime_error("--binary-search needs --method vqe or qaoa");
                const ExactSolution sol = solve_ising_exact(H);
                json doc = to_json(sol, H.n);
                doc["render"] = render_hd(index_to_bits(sol.argmin_index, H.n));
                doc["config"] = config;
                save_json(sv.out, doc);
                std::cout << "ground " << bits_to_string(index_to_bits(sol.argmin_index, H.n))
                          << " energy " << sol.min_energy << " -> " << sv.out << "\n";
                return 0;
            }
            if (sv.method != "vqe" && sv.method != "qaoa")
                throw std::runtime_error("unknown --method " + sv.method);

            OptimizerConfig opt;
            if (sv.binary_search) opt = loose_optimizer();
            if (*sv_max_iter) opt.max_iter = sv.max_iter;
            if (*sv_restarts) opt.restarts = sv.restarts;
            if (*sv_rho_begin) opt.rho_begin = sv.rho_begin;
            if (*sv_rho_end) opt.rho_end = sv.rho_end;
            opt.seed = sv.seed;
            config["max_iter"] = opt.max_iter;
            config["restarts"] = opt.restarts;
            config["rho_begin"] = opt.rho_begin;
            config["rho_end"] = opt.rho_end;

            QaoaInit qinit = qaoa_init_for(H);
            if (*sv_gamma_lo) qinit.gamma_min = sv.gamma_min;
            if (*sv_gamma) qinit.gamma_max = sv.gamma_max;
            if (*sv_beta) qinit.beta_max = sv.beta_max;
            if (sv.method == "qaoa") {
                config["gamma_min"] = qinit.gamma_min;
                config["gamma_max"] = qinit.gamma_max;
                config["beta_max"] = qinit.beta_max;
            }

            if (sv.binary_search) {
                BinSearchSolver solver;
                solver.method = sv.method;
                solver.depth = sv.depth;
                solver.p = sv.p;
                solver.qaoa_init = qinit;
                auto [bits, trace] = binary_search_solve(H, solver, sv.delta, opt, mode, sv.seed);
                json doc{{"type", "binsearch_result"},
                         {"n", H.n},
                         {"bitstring", bits_to_string(bits)},
                         {"render", render_hd(bits)},
                         {"energy", H.evaluate(bits)},
                         {"trace", to_json(trace)}};
                doc["config"] = config;
                save_json(sv.out, doc);
                std::cout << "binary search " << bits_to_string(bits) << " ("
                          << render_hd(bits) << ") energy " << H.evaluate(bits) << " in "
                          << trace.rounds.size() << " rounds -> " << sv.out << "\n";
                return 0;
            }

            const VqaResult r = sv.method == "vqe" ? vqe_run(H, sv.depth, opt, mode)
                                                   : qaoa_run(H, sv.p, opt, mode, qinit);
            json doc = to_json(r);
            doc["config"] = config;
            save_json(sv.out, doc);
            std::cout << sv.method << " best energy " << r.best_energy << ", top "
                      << (r.top_k.empty() ? std::string("-") : r.top_k.front().bitstring)
                      << " -> " << sv.out << "\n";
            return 0;
        }

        if (report->parsed()) {
            std::vector<json> docs;
            for (const auto& path : rp_results) docs.push_back(load_json(path));

            auto emit_vqa = [&](const json& doc, const std::string& suffix) {
                const VqaResult r = vqa_result_from_json(doc);
                if (r.top_k.empty()) throw std::runtime_error("result has an empty top-k table");
                std::ostringstream tr;
                tr << "iteration,energy\n";
                for (const auto& [it, e] : r.energy_trace)
                    tr << it << ',' << cli_detail::format_g(e) << '\n';
                cli_detail::save_text(rp_prefix + suffix + "_trace.csv", tr.str());
                std::ostringstream ds;
                ds << "bitstring,probability\n";
                for (std::size_t i = 0; i < r.final_distribution.size(); ++i)
                    ds << bits_to_string(index_to_bits(i, r.n)) << ','
                       << cli_detail::format_g(r.final_distribution[i]) << '\n';
                cli_detail::save_text(rp_prefix + suffix + "_distribution.csv", ds.str());
            };

            if (docs.size() == 2 && docs[0].value("type", "") == "vqa_result" &&
                docs[1].value("type", "") == "vqa_result") {
                const VqaResult a = vqa_result_from_json(docs[0]);
                const VqaResult b = vqa_result_from_json(docs[1]);
                if (a.top_k.empty() || b.top_k.empty())
                    throw std::runtime_error("result has an empty top-k table");
                emit_vqa(docs[0], "_1");
                emit_vqa(docs[1], "_2");
                std::cout << "rank  " << rp_results[0] << "  vs  " << rp_results[1] << "\n";
                const std::size_t rows = std::min({a.top_k.size(), b.top_k.size(), rp_top});
                for (std::size_t i = 0; i < rows; ++i) {
                    const auto& ta = a.top_k[i];
                    const auto& tb = b.top_k[i];
                    std::printf("%4zu  %s (%s) %.6f  |  %s (%s) %.6f\n", i + 1,
                                ta.bitstring.c_str(),
                                render_hd(string_to_bits(ta.bitstring)).c_str(), ta.probability,
                                tb.bitstring.c_str(),
                                render_hd(string_to_bits(tb.bitstring)).c_str(), tb.probability);
                }
                return 0;
            }

            for (std::size_t d = 0; d < docs.size(); ++d) {
                const std::string suffix = docs.size() > 1 ? "_" + std::to_string(d + 1) : "";
                const std::string type = docs[d].value("type", "");
                if (type == "vqa_result") {
                    const VqaResult r = vqa_result_from_json(docs[d]);
                    if (r.top_k.empty()) throw std::runtime_error("result has an empty top-k table");
                    emit_vqa(docs[d], suffix);
                    std::cout << r.method << " result " << rp_results[d] << "\nrank  bitstring  labels  probability\n";
                    for (std::size_t i = 0; i < std::min(rp_top, r.top_k.size()); ++i)
                        std::printf("%4zu  %s  %s  %.6f\n", i + 1, r.top_k[i].bitstring.c_str(),
                                    render_hd(string_to_bits(r.top_k[i].bitstring)).c_str(),
                                    r.top_k[i].probability);
                } else if (type == "exact_solution") {
                    const int n = docs[d].at("n").get<int>();
                    const auto strings = docs[d].at("ground_bitstrings").get<std::vector<std::string>>();
                    if (strings.empty()) throw std::runtime_error("result has an empty ground set");
                    std::cout << "exact solution " << rp_results[d] << " energy "
                              << docs[d].at("ground_energy").get<double>() << "\n";
                    std::ostringstream ds;
                    ds << "bitstring,probability\n";
                    for (const auto& s : strings) {
                        std::cout << "  " << s << "  " << render_hd(string_to_bits(s)) << "\n";
                        ds << s << ',' << cli_detail::format_g(1.0 / static_cast<double>(strings.size()))
                           << '\n';
                    }
                    (void)n;
                    cli_detail::save_text(rp_prefix + suffix + "_distribution.csv", ds.str());
                } else if (type == "binsearch_result") {
                    const std::string bs = docs[d].at("bitstring").get<std::string>();
                    std::cout << "binary search " << rp_results[d] << ": " << bs << " ("
                              << docs[d].at("render").get<std::string>() << ") energy "
                              << docs[d].at("energy").get<double>() << "\n";
                    std::ostringstream ms;
                    ms << "round,site,p0,p1\n";
                    const auto& rounds = docs[d].at("trace").at("rounds");
                    for (std::size_t rr = 0; rr < rounds.size(); ++rr) {
                        const auto& marg = rounds[rr].at("marginals");
                        const auto sites = marg.at("sites").get<std::vector<int>>();
                        const auto p0 = marg.at("p0").get<std::vector<double>>();
                        const auto p1 = marg.at("p1").get<std::vector<double>>();
                        for (std::size_t i = 0; i < sites.size(); ++i)
                            ms << rr << ',' << sites[i] << ',' << cli_detail::format_g(p0[i])
                               << ',' << cli_detail::format_g(p1[i]) << '\n';
                    }
                    cli_detail::save_text(rp_prefix + suffix + "_marginals.csv", ms.str());
                } else {
                    throw std::runtime_error("unrecognized result type in " + rp_results[d]);
                }
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace fmvqa
