#pragma once

// Test-only oracles, independent of the library paths they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "staralg/cmat.hpp"

namespace oracles {

using staralg::CMat;
using staralg::Complex;

// Characteristic polynomial coefficients by Faddeev-LeVerrier:
// p(t) = t^n + c[1] t^{n-1} + ... + c[n].
inline std::vector<Complex> char_poly(const CMat& a) {
    const std::size_t n = a.rows();
    std::vector<Complex> c(n + 1);
    c[0] = 1.0;
    CMat m = CMat::zero(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += c[k - 1];
        c[k] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

// Durand-Kerner simultaneous root iteration for a monic polynomial given by
// char_poly coefficients. Deterministic start points.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& coeff) {
    const std::size_t n = coeff.size() - 1;
    if (n == 0) return {};
    auto eval = [&](Complex z) {
        Complex v = coeff[0];
        for (std::size_t k = 1; k <= n; ++k) v = v * z + coeff[k];
        return v;
    };
    double radius = 0.0;
    for (std::size_t k = 1; k <= n; ++k) radius = std::max(radius, std::abs(coeff[k]));
    radius = 1.0 + radius;
    std::vector<Complex> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * 3.14159265358979323846 * (static_cast<double>(i) + 0.25) /
                             static_cast<double>(n);
        r[i] = radius * Complex{std::cos(angle), std::sin(angle)};
    }
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex denom{1.0, 0.0};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= (r[i] - r[j]);
            const Complex delta = eval(r[i]) / denom;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14 * radius) break;
    }
    std::sort(r.begin(), r.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return r;
}

// Projector onto the joint null space of (1-p) + (1-q), i.e. ran p /\ ran q,
// via an eigensolver-free Gaussian-elimination kernel basis.
inline CMat intersection_projector(const CMat& p, const CMat& q) {
    const std::size_t n = p.rows();
    CMat m = (CMat::identity(n) - p) + (CMat::identity(n) - q);
    // Row-reduce m to find a kernel basis.
    CMat a = m;
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t best = row;
        double best_abs = std::abs(a(row, col));
        for (std::size_t i = row + 1; i < n; ++i)
            if (std::abs(a(i, col)) > best_abs) {
                best_abs = std::abs(a(i, col));
                best = i;
            }
        if (best_abs < 1e-9) continue;
        for (std::size_t j = 0; j < n; ++j) std::swap(a(row, j), a(best, j));
        const Complex piv = a(row, col);
        for (std::size_t j = 0; j < n; ++j) a(row, j) /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row) continue;
            const Complex f = a(i, col);
            if (f == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(row, j);
        }
        pivot_cols.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::vector<CMat> kernel;
    for (std::size_t free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        CMat v(n, 1);
        v(free_col, 0) = 1.0;
        for (std::size_t r2 = 0; r2 < pivot_cols.size(); ++r2)
            v(pivot_cols[r2], 0) = -a(r2, free_col);
        kernel.push_back(v);
    }
    if (kernel.empty()) return CMat::zero(n, n);
    // Gram-Schmidt, then assemble the projector.
    std::vector<CMat> ortho;
    for (auto& v : kernel) {
        CMat w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : ortho) {
                Complex ip{0.0, 0.0};
                for (std::size_t i = 0; i < n; ++i) ip += std::conj(u(i, 0)) * w(i, 0);
                for (std::size_t i = 0; i < n; ++i) w(i, 0) -= ip * u(i, 0);
            }
        const double nw = w.norm_fro();
        if (nw < 1e-9) continue;
        ortho.push_back(w * Complex{1.0 / nw, 0.0});
    }
    CMat proj(n, n);
    for (const auto& u : ortho) proj += u * u.adjoint();
    return proj;
}

} // namespace oracles
