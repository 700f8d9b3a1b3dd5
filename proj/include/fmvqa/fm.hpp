#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmvqa/dataset.hpp"
#include "fmvqa/qubo.hpp"
#include "fmvqa/rng.hpp"

namespace fmvqa {

// Second-order factorization machine: bias + sum w_i x_i + sum_{i<j} (v_i . v_j) x_i x_j.
struct FmModel {
    int n = 0;
    int k = 0;
    double bias = 0.0;
    std::vector<double> w;
    std::vector<double> V;  // row-major n x k; row i is factor vector v_i

    double v(int i, int f) const { return V[static_cast<std::size_t>(i) * k + f]; }
    double& v(int i, int f) { return V[static_cast<std::size_t>(i) * k + f]; }
};

struct TrainConfig {
    int k = 8;
    int epochs = 2000;
    double learning_rate = 0.05;
    double l2 = 1e-6;
    double init_scale = 0.01;
    std::uint64_t seed = 0;
};

inline double fm_predict(const FmModel& m, const Bits& x) {
    if (static_cast<int>(x.size()) != m.n)
        throw std::invalid_argument("fm_predict: length mismatch");
    double out = m.bias;
    // O(nk) pairwise term: sum_f [ (sum_i v_if x_i)^2 - sum_i v_if^2 x_i^2 ] / 2
    for (int i = 0; i < m.n; ++i)
        if (x[static_cast<std::size_t>(i)]) out += m.w[static_cast<std::size_t>(i)];
    for (int f = 0; f < m.k; ++f) {
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < m.n; ++i) {
            if (!x[static_cast<std::size_t>(i)]) continue;
            const double vif = m.v(i, f);
            s += vif;
            s2 += vif * vif;
        }
        out += 0.5 * (s * s - s2);
    }
    return out;
}

// Q_ii = w_i, Q_ij = v_i . v_j, offset = bias.
inline QuboModel fm_to_qubo(const FmModel& m) {
    QuboModel q = QuboModel::zeros(m.n);
    q.offset = m.bias;
    q.diag = m.w;
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) {
            double dot = 0.0;
            for (int f = 0; f < m.k; ++f) dot += m.v(i, f) * m.v(j, f);
            q.upper[pair_index(i, j, m.n)] = dot;
        }
    return q;
}

// Plain SGD over shuffled records, squared-error loss, fixed learning rate,
// L2 on w and V. Targets are standardized internally (train on (y-mu)/sigma)
// so the fixed learning rate behaves identically across target scales; the
// returned model is de-standardized exactly (w,bias scale by sigma, V by
// sqrt(sigma), which scales the Gram matrix by sigma). loss_trace reports the
// epoch-mean squared error in the original units.
inline std::pair<FmModel, std::vector<double>> fm_train(const Dataset& ds, const TrainConfig& cfg) {
    if (ds.records.empty()) throw std::invalid_argument("fm_train: empty dataset");
    if (cfg.epochs < 1) throw std::invalid_argument("fm_train: epochs must be >= 1");
    if (cfg.k < 1) throw std::invalid_argument("fm_train: k must be >= 1");
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("fm_train: learning_rate must be > 0");
    const int n = ds.n;
    const int k = cfg.k;
    const std::size_t m = ds.records.size();

    double mu = 0.0;
    for (const auto& r : ds.records) mu += r.y;
    mu /= static_cast<double>(m);
    double var = 0.0;
    for (const auto& r : ds.records) var += (r.y - mu) * (r.y - mu);
    double sigma = std::sqrt(var / static_cast<double>(m));
    if (sigma == 0.0) sigma = 1.0;

    std::vector<double> ys(m);
    for (std::size_t i = 0; i < m; ++i) ys[i] = (ds.records[i].y - mu) / sigma;

    FmModel model;
    model.n = n;
    model.k = k;
    model.bias = 0.0;
    model.w.assign(static_cast<std::size_t>(n), 0.0);
    model.V.assign(static_cast<std::size_t>(n) * k, 0.0);
    Rng rng(cfg.seed);
    for (double& v : model.V) v = rng.normal(0.0, cfg.init_scale);

    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::vector<double> sf(static_cast<std::size_t>(k));
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(cfg.epochs));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[rng.integer(i)]);
        double loss = 0.0;
        for (std::size_t oi = 0; oi < m; ++oi) {
            const auto& rec = ds.records[order[oi]];
            const double target = ys[order[oi]];
            double pred = model.bias;
            for (int f = 0; f < k; ++f) sf[static_cast<std::size_t>(f)] = 0.0;
            for (int i = 0; i < n; ++i) {
                if (!rec.x[static_cast<std::size_t>(i)]) continue;
                pred += model.w[static_cast<std::size_t>(i)];
                for (int f = 0; f < k; ++f) sf[static_cast<std::size_t>(f)] += model.v(i, f);
            }
            for (int f = 0; f < k; ++f) {
                double s2 = 0.0;
                for (int i = 0; i < n; ++i)
                    if (rec.x[static_cast<std::size_t>(i)]) {
                        const double vif = model.v(i, f);
                        s2 += vif * vif;
                    }
                pred += 0.5 * (sf[static_cast<std::size_t>(f)] * sf[static_cast<std::size_t>(f)] - s2);
            }
            const double err = pred - target;
            loss += err * err;

            model.bias -= cfg.learning_rate * err;
            for (int i = 0; i < n; ++i) {
                if (!rec.x[static_cast<std::size_t>(i)]) continue;
                model.w[static_cast<std::size_t>(i)] -=
                    cfg.learning_rate * (err + cfg.l2 * model.w[static_cast<std::size_t>(i)]);
                for (int f = 0; f < k; ++f) {
                    const double vif = model.v(i, f);
                    const double grad = err * (sf[static_cast<std::size_t>(f)] - vif) + cfg.l2 * vif;
                    model.v(i, f) = vif - cfg.learning_rate * grad;
                }
            }
        }
        loss = loss / static_cast<double>(m) * sigma * sigma;
        if (!std::isfinite(loss))
            throw std::runtime_error("fm_train: loss diverged at epoch " + std::to_string(epoch));
        trace.push_back(loss);
    }

    model.bias = mu + sigma * model.bias;
    const double root = std::sqrt(sigma);
    for (double& x : model.w) x *= sigma;
    for (double& x : model.V) x *= root;
    return {model, trace};
}

// Cardinality penalty learned by the surrogate itself: fit the FM to the
// exact (n_D - n0)^2 values over all 2^n inputs, then export the quadratic.
inline QuboModel penalty_qubo_fm(int n, int n0, const TrainConfig& cfg) {
    const QuboModel exact = penalty_qubo_exact(n, n0);
    const Dataset ds = synth_dataset(exact, 0.0, cfg.seed);
    auto [model, trace] = fm_train(ds, cfg);
    (void)trace;
    return fm_to_qubo(model);
}

}  // namespace fmvqa
