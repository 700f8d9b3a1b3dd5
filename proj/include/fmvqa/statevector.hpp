#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fmvqa/bits.hpp"
#include "fmvqa/rng.hpp"

namespace fmvqa {

using cplx = std::complex<double>;

// Dense statevector over n qubits. Site 0 is the most significant bit of the
// basis-state index, matching the bitstring convention in bits.hpp.
class Statevector {
public:
    explicit Statevector(int n) : n_(n), amp_(std::size_t{1} << n, cplx{0.0, 0.0}) {
        if (n < 1 || n > 24) throw std::invalid_argument("statevector supports 1..24 qubits");
        amp_[0] = 1.0;  // |00..0>
    }

    int num_qubits() const { return n_; }
    std::size_t size() const { return amp_.size(); }
    const std::vector<cplx>& amplitudes() const { return amp_; }
    std::vector<cplx>& amplitudes() { return amp_; }

    void reset() {
        std::fill(amp_.begin(), amp_.end(), cplx{0.0, 0.0});
        amp_[0] = 1.0;
    }

    // Single-qubit gate [[a, b], [c, d]] on `site`.
    void apply_1q(int site, cplx a, cplx b, cplx c, cplx d) {
        const std::size_t stride = std::size_t{1} << (n_ - 1 - site);
        const std::size_t size = amp_.size();
        for (std::size_t base = 0; base < size; base += 2 * stride) {
            for (std::size_t off = 0; off < stride; ++off) {
                const std::size_t i0 = base + off;
                const std::size_t i1 = i0 + stride;
                const cplx v0 = amp_[i0];
                const cplx v1 = amp_[i1];
                amp_[i0] = a * v0 + b * v1;
                amp_[i1] = c * v0 + d * v1;
            }
        }
    }

    // RY(t) = exp(-i t Y / 2) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]
    void apply_ry(int site, double theta) {
        const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
        apply_1q(site, c, -s, s, c);
    }

    // RX(t) = exp(-i t X / 2)
    void apply_rx(int site, double theta) {
        const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
        apply_1q(site, c, cplx{0.0, -s}, cplx{0.0, -s}, c);
    }

    // RZ(t) = exp(-i t Z / 2) = diag(e^{-it/2}, e^{+it/2})
    void apply_rz(int site, double theta) {
        const cplx p0 = std::polar(1.0, -theta / 2.0);
        const cplx p1 = std::polar(1.0, +theta / 2.0);
        const std::size_t stride = std::size_t{1} << (n_ - 1 - site);
        for (std::size_t i = 0; i < amp_.size(); ++i)
            amp_[i] *= ((i & stride) ? p1 : p0);
    }

    void apply_x(int site) { apply_1q(site, 0.0, 1.0, 1.0, 0.0); }

    void apply_h(int site) {
        const double r = 1.0 / std::sqrt(2.0);
        apply_1q(site, r, r, r, -r);
    }

    void apply_cnot(int control, int target) {
        if (control == target) throw std::invalid_argument("cnot control == target");
        const std::size_t cmask = std::size_t{1} << (n_ - 1 - control);
        const std::size_t tmask = std::size_t{1} << (n_ - 1 - target);
        for (std::size_t i = 0; i < amp_.size(); ++i)
            if ((i & cmask) && !(i & tmask)) std::swap(amp_[i], amp_[i | tmask]);
    }

    void apply_z(int site) {
        const std::size_t mask = std::size_t{1} << (n_ - 1 - site);
        for (std::size_t i = 0; i < amp_.size(); ++i)
            if (i & mask) amp_[i] = -amp_[i];
    }

    void apply_y(int site) {
        const std::size_t mask = std::size_t{1} << (n_ - 1 - site);
        const cplx im{0.0, 1.0};
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            if (!(i & mask)) {
                const std::size_t j = i | mask;
                const cplx v0 = amp_[i];
                amp_[i] = -im * amp_[j];
                amp_[j] = im * v0;
            }
        }
    }

    // ZZ(i, j, t) = CNOT(i,j) RZ(j, t) CNOT(i,j) = exp(-i t Z_i Z_j / 2)
    void apply_zz(int i, int j, double theta) {
        apply_cnot(i, j);
        apply_rz(j, theta);
        apply_cnot(i, j);
    }

    std::vector<double> probabilities() const {
        std::vector<double> p(amp_.size());
        for (std::size_t i = 0; i < amp_.size(); ++i) p[i] = std::norm(amp_[i]);
        return p;
    }

    // Samples basis-state indices; the cumulative table makes each draw
    // O(log N) via binary search.
    std::vector<std::uint64_t> sample(Rng& rng, std::size_t shots) const {
        std::vector<double> cum(amp_.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            acc += std::norm(amp_[i]);
            cum[i] = acc;
        }
        std::vector<std::uint64_t> out(shots);
        for (std::size_t s = 0; s < shots; ++s) {
            const double u = rng.uniform() * acc;
            const auto it = std::lower_bound(cum.begin(), cum.end(), u);
            out[s] = static_cast<std::uint64_t>(it - cum.begin());
        }
        return out;
    }

private:
    int n_;
    std::vector<cplx> amp_;
};

}  // namespace fmvqa
