#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmvqa/bits.hpp"
#include "fmvqa/qubo.hpp"
#include "fmvqa/rng.hpp"

namespace fmvqa {

struct Record {
    Bits x;
    double y = 0.0;
};

struct Dataset {
    int n = 0;
    std::vector<Record> records;

    bool contains(const Bits& x) const {
        for (const auto& r : records)
            if (r.x == x) return true;
        return false;
    }
};

// Accepts "100110" or "[100110]".
inline Bits parse_feature_vector(const std::string& text) {
    std::string body = text;
    if (!body.empty() && body.front() == '[') {
        if (body.back() != ']') throw std::invalid_argument("unbalanced bracket in: " + text);
        body = body.substr(1, body.size() - 2);
    }
    return string_to_bits(body);
}

// CSV with required header `bitstring,value`, one record per line.
inline Dataset load_dataset(std::istream& in, int n) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("dataset: no records (empty input)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "bitstring,value")
        throw std::runtime_error("dataset: expected header 'bitstring,value', got '" + line + "'");

    Dataset ds;
    ds.n = n;
    std::set<std::string> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("dataset: malformed row at line " + std::to_string(lineno));
        const std::string bitpart = line.substr(0, comma);
        const std::string valpart = line.substr(comma + 1);
        Bits x = parse_feature_vector(bitpart);
        if (static_cast<int>(x.size()) != n)
            throw std::runtime_error("dataset: bitstring length mismatch at line " +
                                     std::to_string(lineno));
        if (!seen.insert(bits_to_string(x)).second)
            throw std::runtime_error("dataset: duplicate bitstring '" + bitpart + "' at line " +
                                     std::to_string(lineno));
        std::size_t used = 0;
        double y = 0.0;
        try {
            y = std::stod(valpart, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("dataset: bad value at line " + std::to_string(lineno));
        }
        while (used < valpart.size() && std::isspace(static_cast<unsigned char>(valpart[used])))
            ++used;
        if (used != valpart.size() || !std::isfinite(y))
            throw std::runtime_error("dataset: bad value at line " + std::to_string(lineno));
        ds.records.push_back({std::move(x), y});
    }
    if (ds.records.empty()) throw std::runtime_error("dataset: no records");
    return ds;
}

inline void save_dataset(std::ostream& out, const Dataset& ds) {
    out << "bitstring,value\n";
    char buf[64];
    for (const auto& r : ds.records) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.y);
        out << bits_to_string(r.x) << ',' << buf << '\n';
    }
}

// The structured pool of the incremental scheme: the all-ones vector plus the
// n (one-cold, one-hot) complement pairs, keyed by the position of the
// distinguished bit.
inline Bits one_cold(int n, int pos) {
    Bits b(static_cast<std::size_t>(n), 1);
    b[static_cast<std::size_t>(pos)] = 0;
    return b;
}

inline Bits one_hot(int n, int pos) {
    Bits b(static_cast<std::size_t>(n), 0);
    b[static_cast<std::size_t>(pos)] = 1;
    return b;
}

// Stage 0 trains on {all-ones, a seeded-random one-cold vector, its
// complement}; each later stage adds one more (one-cold, one-hot) pair in a
// seeded order, so stage n-1 trains on all 2n+1 structured vectors. The test
// set is everything else, in dataset order.
inline std::pair<Dataset, Dataset> select_training_set(const Dataset& ds, int stage,
                                                       std::uint64_t seed) {
    const int n = ds.n;
    if (stage < 0 || stage > n - 1)
        throw std::invalid_argument("select_training_set: stage must be in [0, n-1]");
    if (!ds.contains(Bits(static_cast<std::size_t>(n), 1)))
        throw std::invalid_argument("select_training_set: dataset lacks the all-ones vector");
    for (int i = 0; i < n; ++i) {
        if (!ds.contains(one_cold(n, i)) || !ds.contains(one_hot(n, i)))
            throw std::invalid_argument(
                "select_training_set: dataset lacks a one-cold/one-hot pair");
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    Rng rng(seed);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.integer(i)]);

    std::set<std::string> train_keys;
    train_keys.insert(bits_to_string(Bits(static_cast<std::size_t>(n), 1)));
    for (int s = 0; s <= stage; ++s) {
        const int pos = order[static_cast<std::size_t>(s)];
        train_keys.insert(bits_to_string(one_cold(n, pos)));
        train_keys.insert(bits_to_string(one_hot(n, pos)));
    }

    Dataset train, test;
    train.n = test.n = n;
    for (const auto& r : ds.records) {
        if (train_keys.count(bits_to_string(r.x)))
            train.records.push_back(r);
        else
            test.records.push_back(r);
    }
    return {train, test};
}

// Squared sample Pearson correlation.
inline double r_squared(const std::vector<double>& pred, const std::vector<double>& target) {
    if (pred.size() != target.size()) throw std::invalid_argument("r_squared: length mismatch");
    const std::size_t m = pred.size();
    if (m == 0) throw std::invalid_argument("r_squared: empty input");
    double mp = 0.0, mt = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mp += pred[i];
        mt += target[i];
    }
    mp /= static_cast<double>(m);
    mt /= static_cast<double>(m);
    double spt = 0.0, spp = 0.0, stt = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dp = pred[i] - mp;
        const double dt = target[i] - mt;
        spt += dp * dt;
        spp += dp * dp;
        stt += dt * dt;
    }
    if (spp == 0.0 || stt == 0.0)
        throw std::invalid_argument("r_squared: zero variance input");
    const double r = spt / std::sqrt(spp * stt);
    return r * r;
}

// All 2^n assignments of `truth` with optional Gaussian noise; the oracle
// dataset used throughout the tests.
inline Dataset synth_dataset(const QuboModel& truth, double noise_sigma, std::uint64_t seed) {
    if (truth.n > 16) throw std::invalid_argument("synth_dataset: n > 16");
    if (noise_sigma < 0.0) throw std::invalid_argument("synth_dataset: negative sigma");
    Dataset ds;
    ds.n = truth.n;
    Rng rng(seed);
    const std::uint64_t size = 1ULL << truth.n;
    ds.records.reserve(size);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        Bits x = index_to_bits(idx, truth.n);
        double y = truth.evaluate(x);
        if (noise_sigma > 0.0) y += rng.normal(0.0, noise_sigma);
        ds.records.push_back({std::move(x), y});
    }
    return ds;
}

}  // namespace fmvqa
