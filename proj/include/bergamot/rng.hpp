#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "bergamot/errors.hpp"

namespace bergamot {

// xoshiro256++ seeded through splitmix64. Self-contained so that streams
// are reproducible independent of the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via the polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        have_spare_ = true;
        return u * factor;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4] = {};
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Uniform point in the complex m-ball of radius r centered at 0, using a
/// normalized Gaussian direction scaled by radius u^(1/2m).
inline std::vector<std::complex<double>> sample_complex_ball(Rng& rng, int m, double r) {
    std::vector<std::complex<double>> point(m);
    double norm_sq = 0.0;
    for (int i = 0; i < m; ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        point[i] = {re, im};
        norm_sq += re * re + im * im;
    }
    const double norm = std::sqrt(norm_sq);
    const double radius = r * std::pow(rng.next_double(), 1.0 / (2.0 * m));
    for (auto& c : point) c *= radius / norm;
    return point;
}

// Halton sequence with a seeded Cranley-Patterson rotation per dimension.
class HaltonSequence {
public:
    HaltonSequence(int dims, std::uint64_t seed) {
        static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
        if (dims < 1 || dims > static_cast<int>(std::size(primes)))
            throw ValidationError("HaltonSequence: unsupported dimension count");
        bases_.assign(primes, primes + dims);
        Rng rng(seed ^ 0x517cc1b727220a95ull);
        shifts_.resize(dims);
        for (auto& s : shifts_) s = rng.next_double();
    }

    void next(double* out) {
        ++index_;
        for (std::size_t d = 0; d < bases_.size(); ++d) {
            double x = radical_inverse(index_, bases_[d]) + shifts_[d];
            out[d] = x - std::floor(x);
        }
    }

    int dims() const { return static_cast<int>(bases_.size()); }

private:
    static double radical_inverse(std::uint64_t i, int base) {
        double inv_base = 1.0 / base;
        double factor = inv_base;
        double value = 0.0;
        while (i > 0) {
            value += static_cast<double>(i % base) * factor;
            i /= base;
            factor *= inv_base;
        }
        return value;
    }

    std::vector<int> bases_;
    std::vector<double> shifts_;
    std::uint64_t index_ = 0;
};

/// Maps 2m uniforms in [0,1) to a uniform point in the complex m-ball of
/// radius r: one radius variable, m-1 simplex variables for the squared
/// moduli, and m angles. Exact in distribution.
inline std::vector<std::complex<double>> complex_ball_from_uniforms(int m, double r,
                                                                    const double* u) {
    const double radius = r * std::pow(u[0], 1.0 / (2.0 * m));
    std::vector<double> cuts(m + 1);
    cuts[0] = 0.0;
    cuts[m] = 1.0;
    for (int i = 1; i < m; ++i) cuts[i] = u[i];
    std::sort(cuts.begin() + 1, cuts.begin() + m);
    std::vector<std::complex<double>> point(m);
    for (int i = 0; i < m; ++i) {
        const double lambda = cuts[i + 1] - cuts[i];
        const double theta = 2.0 * std::numbers::pi * u[m + i];
        point[i] = std::polar(radius * std::sqrt(std::max(lambda, 0.0)), theta);
    }
    return point;
}

} // namespace bergamot
