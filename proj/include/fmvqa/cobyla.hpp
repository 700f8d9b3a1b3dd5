#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fmvqa {

struct CobylaOptions {
    int max_iter = 1000;       // evaluation budget
    double rho_begin = 0.5;    // initial simplex scale
    double rho_end = 1e-4;     // terminal simplex scale
};

struct CobylaEval {
    std::vector<double> x;
    double f = 0.0;
};

struct CobylaResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
    std::vector<CobylaEval> trace;
};

// Derivative-free minimizer over an (n+1)-point simplex. Starting from an
// axis-aligned simplex of scale rho_begin around x0, each iteration moves one
// vertex by reflection, expansion, or contraction against the centroid of the
// others, shrinking the whole simplex toward the best vertex when no move
// helps; the run stops once the simplex diameter falls below rho_end or the
// evaluation budget is spent. Returns the best point ever evaluated and the
// full evaluation trace.
inline CobylaResult cobyla_minimize(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0, const CobylaOptions& opt = {}) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("cobyla_minimize: empty x0");
    if (!(opt.rho_end < opt.rho_begin) || opt.rho_end <= 0.0)
        throw std::invalid_argument("cobyla_minimize: need 0 < rho_end < rho_begin");
    if (opt.max_iter < 1) throw std::invalid_argument("cobyla_minimize: max_iter must be >= 1");

    CobylaResult res;
    res.f = std::numeric_limits<double>::infinity();

    auto evaluate = [&](const std::vector<double>& x) {
        const double v = f(x);
        if (!std::isfinite(v)) throw std::runtime_error("cobyla_minimize: non-finite objective value");
        ++res.evaluations;
        res.trace.push_back({x, v});
        if (v < res.f) {
            res.f = v;
            res.x = x;
        }
        return v;
    };
    auto budget_left = [&]() { return res.evaluations < opt.max_iter; };

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> val(n + 1, std::numeric_limits<double>::infinity());
    val[0] = evaluate(pts[0]);
    for (std::size_t i = 1; i <= n && budget_left(); ++i) {
        pts[i][i - 1] += opt.rho_begin;
        val[i] = evaluate(pts[i]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), cand(n);

    while (budget_left()) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        const std::size_t ibest = order[0];
        const std::size_t iworst = order[n];
        const std::size_t isecond = order[n - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            double d = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                const double t = pts[i][c] - pts[ibest][c];
                d += t * t;
            }
            diameter = std::max(diameter, std::sqrt(d));
        }
        if (diameter < opt.rho_end) break;

        for (std::size_t c = 0; c < n; ++c) {
            double acc = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
                if (i != iworst) acc += pts[i][c];
            centroid[c] = acc / static_cast<double>(n);
        }

        auto along = [&](double t) {
            for (std::size_t c = 0; c < n; ++c)
                cand[c] = centroid[c] + t * (centroid[c] - pts[iworst][c]);
            return cand;
        };

        const double fr = evaluate(along(1.0));
        std::vector<double> xr = cand;
        if (fr < val[ibest] && budget_left()) {
            const double fe = evaluate(along(2.0));
            if (fe < fr) {
                pts[iworst] = cand;
                val[iworst] = fe;
            } else {
                pts[iworst] = std::move(xr);
                val[iworst] = fr;
            }
            continue;
        }
        if (fr < val[isecond]) {
            pts[iworst] = std::move(xr);
            val[iworst] = fr;
            continue;
        }
        if (!budget_left()) break;
        const double t = (fr < val[iworst]) ? 0.5 : -0.5;
        const double fc = evaluate(along(t));
        if (fc < std::min(fr, val[iworst])) {
            pts[iworst] = cand;
            val[iworst] = fc;
            continue;
        }
        // Shrink everything toward the best vertex.
        for (std::size_t i = 0; i <= n && budget_left(); ++i) {
            if (i == ibest) continue;
            for (std::size_t c = 0; c < n; ++c)
                pts[i][c] = pts[ibest][c] + 0.5 * (pts[i][c] - pts[ibest][c]);
            val[i] = evaluate(pts[i]);
        }
    }
    return res;
}

}  // namespace fmvqa
