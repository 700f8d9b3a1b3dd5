#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmvqa/circuit.hpp"
#include "fmvqa/rng.hpp"

namespace fmvqa {

// Column j = measured distribution when basis state j is prepared.
struct ConfusionMatrix {
    int n = 0;
    std::size_t dim = 0;
    std::vector<double> M;  // row-major dim x dim

    double at(std::size_t row, std::size_t col) const { return M[row * dim + col]; }
    double& at(std::size_t row, std::size_t col) { return M[row * dim + col]; }
};

// Prepares each basis state exactly and pushes shots through the readout
// channel; columns are normalized counts.
inline ConfusionMatrix build_confusion_matrix(int n, const NoiseModel& noise,
                                              std::size_t shots_per_state, std::uint64_t seed) {
    if (shots_per_state < 1)
        throw std::invalid_argument("build_confusion_matrix: shots_per_state must be >= 1");
    if (n < 1 || n > 12) throw std::invalid_argument("build_confusion_matrix: n out of range");
    ConfusionMatrix cm;
    cm.n = n;
    cm.dim = std::size_t{1} << n;
    cm.M.assign(cm.dim * cm.dim, 0.0);
    Rng master(seed);
    for (std::size_t j = 0; j < cm.dim; ++j) {
        Rng rng = master.child(j);
        for (std::size_t s = 0; s < shots_per_state; ++s) {
            std::uint64_t out = j;
            for (int q = 0; q < n; ++q) {
                const std::uint64_t mask = std::uint64_t{1} << (n - 1 - q);
                const bool bit = (out & mask) != 0;
                const double pflip = bit ? noise.p10 : noise.p01;
                if (pflip > 0.0 && rng.uniform() < pflip) out ^= mask;
            }
            cm.at(out, j) += 1.0;
        }
        for (std::size_t r = 0; r < cm.dim; ++r)
            cm.at(r, j) /= static_cast<double>(shots_per_state);
    }
    return cm;
}

namespace detail {

// 1-norm condition estimate via explicit inversion (dim <= 4096).
inline double condition_estimate(const ConfusionMatrix& cm) {
    const std::size_t d = cm.dim;
    std::vector<double> A = cm.M;
    std::vector<double> inv(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) inv[i * d + i] = 1.0;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::fabs(A[r * d + col]) > std::fabs(A[piv * d + col])) piv = r;
        if (std::fabs(A[piv * d + col]) < 1e-300) return std::numeric_limits<double>::infinity();
        if (piv != col)
            for (std::size_t c = 0; c < d; ++c) {
                std::swap(A[piv * d + c], A[col * d + c]);
                std::swap(inv[piv * d + c], inv[col * d + c]);
            }
        const double pval = A[col * d + col];
        for (std::size_t c = 0; c < d; ++c) {
            A[col * d + c] /= pval;
            inv[col * d + c] /= pval;
        }
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col) continue;
            const double m = A[r * d + col];
            if (m == 0.0) continue;
            for (std::size_t c = 0; c < d; ++c) {
                A[r * d + c] -= m * A[col * d + c];
                inv[r * d + c] -= m * inv[col * d + c];
            }
        }
    }
    auto norm1 = [d](const std::vector<double>& X) {
        double best = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            double s = 0.0;
            for (std::size_t r = 0; r < d; ++r) s += std::fabs(X[r * d + c]);
            best = std::max(best, s);
        }
        return best;
    };
    return norm1(cm.M) * norm1(inv);
}

// Euclidean projection onto the probability simplex.
inline void project_simplex(std::vector<double>& x) {
    std::vector<double> u = x;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        const double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    for (double& v : x) v = std::max(0.0, v - theta);
}

}  // namespace detail

// Solves min ||M x - p||_2 subject to x >= 0, sum x = 1 by accelerated
// projected gradient descent onto the simplex. The condition estimate and
// gradient Lipschitz constant are computed once so repeated solves against
// the same matrix stay cheap.
class Mitigator {
public:
    explicit Mitigator(ConfusionMatrix cm) : cm_(std::move(cm)) {
        cond_ = detail::condition_estimate(cm_);
        if (!std::isfinite(cond_) || cond_ > 1e12)
            throw std::runtime_error(
                "Mitigator: confusion matrix singular or ill-conditioned (condition estimate " +
                std::to_string(cond_) + ")");
        // Largest eigenvalue of M^T M by power iteration.
        const std::size_t d = cm_.dim;
        std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d))), tmp(d), mtv(d);
        double lam = 1.0;
        for (int it = 0; it < 80; ++it) {
            for (std::size_t r = 0; r < d; ++r) {
                double s = 0.0;
                for (std::size_t c = 0; c < d; ++c) s += cm_.M[r * d + c] * v[c];
                tmp[r] = s;
            }
            for (std::size_t c = 0; c < d; ++c) {
                double s = 0.0;
                for (std::size_t r = 0; r < d; ++r) s += cm_.M[r * d + c] * tmp[r];
                mtv[c] = s;
            }
            double nrm = 0.0;
            for (double x : mtv) nrm += x * x;
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) break;
            lam = nrm;
            for (std::size_t c = 0; c < d; ++c) v[c] = mtv[c] / nrm;
        }
        step_ = 1.0 / lam;
    }

    double condition() const { return cond_; }
    const ConfusionMatrix& matrix() const { return cm_; }

    std::vector<double> apply(const std::vector<double>& noisy_probs, int iterations = 2000) const {
        const std::size_t d = cm_.dim;
        if (noisy_probs.size() != d) throw std::invalid_argument("Mitigator::apply: dimension mismatch");
        std::vector<double> x(d, 1.0 / static_cast<double>(d));
        std::vector<double> y = x, xprev = x, resid(d), grad(d);
        double tk = 1.0;
        for (int it = 0; it < iterations; ++it) {
            for (std::size_t r = 0; r < d; ++r) {
                double s = -noisy_probs[r];
                for (std::size_t c = 0; c < d; ++c) s += cm_.M[r * d + c] * y[c];
                resid[r] = s;
            }
            for (std::size_t c = 0; c < d; ++c) {
                double s = 0.0;
                for (std::size_t r = 0; r < d; ++r) s += cm_.M[r * d + c] * resid[r];
                grad[c] = s;
            }
            xprev = x;
            for (std::size_t c = 0; c < d; ++c) x[c] = y[c] - step_ * grad[c];
            detail::project_simplex(x);
            const double tnext = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
            for (std::size_t c = 0; c < d; ++c)
                y[c] = x[c] + ((tk - 1.0) / tnext) * (x[c] - xprev[c]);
            tk = tnext;
        }
        return x;
    }

private:
    ConfusionMatrix cm_;
    double cond_ = 0.0;
    double step_ = 1.0;
};

inline std::vector<double> mitigate(const std::vector<double>& noisy_probs,
                                    const ConfusionMatrix& cm, int iterations = 2000) {
    return Mitigator(cm).apply(noisy_probs, iterations);
}

inline std::vector<double> mitigate_counts(const std::vector<std::uint64_t>& counts,
                                           const ConfusionMatrix& cm, int iterations = 2000) {
    return mitigate(normalize_counts(counts), cm, iterations);
}

}  // namespace fmvqa
