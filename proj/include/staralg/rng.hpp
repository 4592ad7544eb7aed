#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "staralg/cmat.hpp"

namespace staralg {

// Seeded generator whose outputs are derived from raw mt19937_64 words only,
// so identical seeds give identical streams independent of the standard
// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // integer in [lo, hi] inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(gen_() % span);
    }

    double normal() {
        // Box-Muller; cache the second value.
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    Complex cnormal() { return Complex{normal(), normal()}; }

    CMat random_matrix(std::size_t rows, std::size_t cols) {
        CMat m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = cnormal();
        return m;
    }

    CMat random_hermitian(std::size_t n) {
        CMat m = random_matrix(n, n);
        CMat h = (m + m.adjoint()) * Complex{0.5, 0.0};
        return h;
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace staralg
