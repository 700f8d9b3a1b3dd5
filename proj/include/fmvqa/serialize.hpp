#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fmvqa/binsearch.hpp"
#include "fmvqa/bits.hpp"
#include "fmvqa/dataset.hpp"
#include "fmvqa/fm.hpp"
#include "fmvqa/ising.hpp"
#include "fmvqa/qubo.hpp"
#include "fmvqa/vqa.hpp"

namespace fmvqa {

using json = nlohmann::json;

namespace detail {

inline json upper_to_json(const std::vector<double>& upper, int n) {
    json out = json::object();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = upper[pair_index(i, j, n)];
            if (v != 0.0) out[std::to_string(i) + "," + std::to_string(j)] = v;
        }
    return out;
}

inline std::vector<double> upper_from_json(const json& j, int n) {
    std::vector<double> upper(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
    for (const auto& [key, value] : j.items()) {
        const auto comma = key.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("serialize: malformed pair key '" + key + "'");
        const int i = std::stoi(key.substr(0, comma));
        const int jj = std::stoi(key.substr(comma + 1));
        if (i < 0 || jj <= i || jj >= n)
            throw std::runtime_error("serialize: pair key out of range '" + key + "'");
        upper[pair_index(i, jj, n)] = value.get<double>();
    }
    return upper;
}

}  // namespace detail

inline json to_json(const QuboModel& q) {
    return json{{"type", "qubo"},
                {"n", q.n},
                {"diag", q.diag},
                {"upper", detail::upper_to_json(q.upper, q.n)},
                {"offset", q.offset},
                {"scale", q.scale},
                {"beta0", q.beta0},
                {"n0", q.n0}};
}

inline QuboModel qubo_from_json(const json& j) {
    if (j.value("type", "") != "qubo") throw std::runtime_error("serialize: not a qubo document");
    QuboModel q;
    q.n = j.at("n").get<int>();
    q.diag = j.at("diag").get<std::vector<double>>();
    q.upper = detail::upper_from_json(j.at("upper"), q.n);
    q.offset = j.at("offset").get<double>();
    q.scale = j.value("scale", 1.0);
    q.beta0 = j.value("beta0", 0.0);
    q.n0 = j.value("n0", -1);
    if (static_cast<int>(q.diag.size()) != q.n) throw std::runtime_error("serialize: diag size mismatch");
    return q;
}

inline json to_json(const IsingModel& m) {
    return json{{"type", "ising"},
                {"n", m.n},
                {"h", m.h},
                {"J", detail::upper_to_json(m.J, m.n)},
                {"offset", m.offset},
                {"scale", m.scale},
                {"beta0", m.beta0},
                {"n0", m.n0}};
}

inline IsingModel ising_from_json(const json& j) {
    if (j.value("type", "") != "ising") throw std::runtime_error("serialize: not an ising document");
    IsingModel m;
    m.n = j.at("n").get<int>();
    m.h = j.at("h").get<std::vector<double>>();
    m.J = detail::upper_from_json(j.at("J"), m.n);
    m.offset = j.at("offset").get<double>();
    m.scale = j.value("scale", 1.0);
    m.beta0 = j.value("beta0", 0.0);
    m.n0 = j.value("n0", -1);
    if (static_cast<int>(m.h.size()) != m.n) throw std::runtime_error("serialize: h size mismatch");
    return m;
}

inline json to_json(const FmModel& m) {
    json V = json::array();
    for (int i = 0; i < m.n; ++i) {
        json row = json::array();
        for (int f = 0; f < m.k; ++f) row.push_back(m.v(i, f));
        V.push_back(std::move(row));
    }
    return json{{"type", "fm"}, {"n", m.n}, {"k", m.k}, {"bias", m.bias}, {"w", m.w}, {"V", V}};
}

inline FmModel fm_from_json(const json& j) {
    if (j.value("type", "") != "fm") throw std::runtime_error("serialize: not an fm document");
    FmModel m;
    m.n = j.at("n").get<int>();
    m.k = j.at("k").get<int>();
    m.bias = j.at("bias").get<double>();
    m.w = j.at("w").get<std::vector<double>>();
    const auto& V = j.at("V");
    if (static_cast<int>(V.size()) != m.n) throw std::runtime_error("serialize: V row count mismatch");
    m.V.resize(static_cast<std::size_t>(m.n) * m.k);
    for (int i = 0; i < m.n; ++i) {
        if (static_cast<int>(V[i].size()) != m.k)
            throw std::runtime_error("serialize: V column count mismatch");
        for (int f = 0; f < m.k; ++f) m.v(i, f) = V[i][f].get<double>();
    }
    if (static_cast<int>(m.w.size()) != m.n) throw std::runtime_error("serialize: w size mismatch");
    return m;
}

inline json to_json(const NoiseModel& nm) {
    return json{{"p01", nm.p01}, {"p10", nm.p10}, {"cnot_depolarizing", nm.cnot_depolarizing}};
}

inline NoiseModel noise_from_json(const json& j) {
    NoiseModel nm;
    nm.p01 = j.value("p01", 0.0);
    nm.p10 = j.value("p10", 0.0);
    nm.cnot_depolarizing = j.value("cnot_depolarizing", 0.0);
    if (nm.p01 < 0.0 || nm.p01 > 1.0 || nm.p10 < 0.0 || nm.p10 > 1.0 ||
        nm.cnot_depolarizing < 0.0 || nm.cnot_depolarizing > 1.0)
        throw std::runtime_error("serialize: noise probabilities must lie in [0,1]");
    return nm;
}

inline json to_json(const VqaResult& r) {
    json trace = json::array();
    for (const auto& [it, e] : r.energy_trace) trace.push_back(json::array({it, e}));
    json topk = json::array();
    for (const auto& t : r.top_k)
        topk.push_back(json{{"index", t.index}, {"bitstring", t.bitstring}, {"probability", t.probability}});
    return json{{"type", "vqa_result"},
                {"method", r.method},
                {"n", r.n},
                {"depth", r.depth},
                {"p", r.p},
                {"param_count", r.param_count},
                {"cnot_count", r.cnot_count},
                {"best_params", r.best_params},
                {"best_energy", r.best_energy},
                {"best_restart", r.best_restart},
                {"restart_energies", r.restart_energies},
                {"energy_trace", trace},
                {"final_distribution", r.final_distribution},
                {"top_k", topk},
                {"shots_mode", r.shots_mode},
                {"mitigated", r.mitigated},
                {"total_evaluations", r.total_evaluations}};
}

inline VqaResult vqa_result_from_json(const json& j) {
    if (j.value("type", "") != "vqa_result")
        throw std::runtime_error("serialize: not a vqa_result document");
    VqaResult r;
    r.method = j.at("method").get<std::string>();
    r.n = j.at("n").get<int>();
    r.depth = j.value("depth", 0);
    r.p = j.value("p", 0);
    r.param_count = j.value("param_count", 0);
    r.cnot_count = j.value("cnot_count", 0);
    r.best_params = j.at("best_params").get<std::vector<double>>();
    r.best_energy = j.at("best_energy").get<double>();
    r.best_restart = j.value("best_restart", -1);
    r.restart_energies = j.value("restart_energies", std::vector<double>{});
    for (const auto& e : j.at("energy_trace"))
        r.energy_trace.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
    r.final_distribution = j.at("final_distribution").get<std::vector<double>>();
    for (const auto& t : j.at("top_k"))
        r.top_k.push_back({t.at("index").get<std::uint64_t>(),
                           t.at("bitstring").get<std::string>(),
                           t.at("probability").get<double>()});
    r.shots_mode = j.value("shots_mode", false);
    r.mitigated = j.value("mitigated", false);
    r.total_evaluations = j.value("total_evaluations", std::uint64_t{0});
    return r;
}

inline json to_json(const Marginals& m) {
    return json{{"sites", m.sites}, {"p0", m.p0}, {"p1", m.p1}};
}

inline json to_json(const BinSearchTrace& t) {
    json rounds = json::array();
    for (const auto& r : t.rounds) {
        json fixed = json::array();
        for (const auto& [site, bit] : r.fixed) fixed.push_back(json::array({site, bit}));
        rounds.push_back(json{{"marginals", to_json(r.marg)},
                              {"fixed", fixed},
                              {"reduced_n", r.reduced_n},
                              {"solver_energy", r.solver_energy},
                              {"top_probability", r.top_probability},
                              {"evaluations", r.evaluations}});
    }
    return json{{"type", "binsearch_trace"}, {"rounds", rounds}};
}

inline json to_json(const ExactSolution& s, int n) {
    json strings = json::array();
    for (std::uint64_t idx : s.ties) strings.push_back(bits_to_string(index_to_bits(idx, n)));
    return json{{"type", "exact_solution"},
                {"n", n},
                {"ground_energy", s.min_energy},
                {"ground_index", s.argmin_index},
                {"ground_bitstring", bits_to_string(index_to_bits(s.argmin_index, n))},
                {"ground_bitstrings", strings}};
}

// Write-to-temp then atomic rename; partial artifacts are never left at `path`.
inline void save_json(const std::string& path, const json& j) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("save_json: cannot open " + tmp);
        out << j.dump(2) << '\n';
        if (!out) throw std::runtime_error("save_json: write failed on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("save_json: rename failed for " + path);
    }
}

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_json: cannot open " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace fmvqa
