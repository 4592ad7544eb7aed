#pragma once

// Shared builders for concrete finite-dimensional *-algebras used in tests.

#include <utility>
#include <vector>

#include "staralg/fdalg.hpp"

namespace testalg {

using staralg::CMat;
using staralg::Complex;
using staralg::FdAlgebra;
using staralg::Tolerance;

// Block-diagonal algebra from (size, multiplicity) pairs: each block is a
// full matrix algebra of the given size embedded with the given
// multiplicity (x repeated along the diagonal).
inline FdAlgebra block_diag_algebra(const std::vector<std::pair<std::size_t, std::size_t>>& spec,
                                    const Tolerance& tol = Tolerance{},
                                    std::uint64_t seed = 1) {
    std::size_t ambient = 0;
    for (const auto& [n, m] : spec) ambient += n * m;
    std::vector<CMat> gens;
    std::size_t off = 0;
    for (const auto& [n, m] : spec) {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                CMat g(ambient, ambient);
                for (std::size_t s = 0; s < m; ++s) g(off + s * n + j, off + s * n + k) = 1.0;
                gens.push_back(std::move(g));
            }
        off += n * m;
    }
    return FdAlgebra::generate(gens, ambient, FdAlgebra::kDefaultCap, tol, seed);
}

inline FdAlgebra full_matrix_algebra(std::size_t n, const Tolerance& tol = Tolerance{}) {
    return block_diag_algebra({{n, 1}}, tol);
}

inline FdAlgebra diagonal_algebra(std::size_t n, const Tolerance& tol = Tolerance{}) {
    std::vector<std::pair<std::size_t, std::size_t>> spec(n, {1, 1});
    return block_diag_algebra(spec, tol);
}

// {x + x : x in M2} inside M4.
inline FdAlgebra amplified_m2(const Tolerance& tol = Tolerance{}) {
    return block_diag_algebra({{2, 2}}, tol);
}

// Hilbert-Schmidt dimension of the span of a family of matrices.
inline std::size_t span_dim(const std::vector<CMat>& family, double drop = 1e-7) {
    std::vector<CMat> basis;
    for (const auto& c : family) {
        if (c.norm_fro() <= drop) continue;
        CMat w = c;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) w -= w.hs_inner(b) * b;
        const double nw = w.norm_fro();
        if (nw <= drop * std::max(1.0, c.norm_fro())) continue;
        basis.push_back(w * Complex{1.0 / nw, 0.0});
    }
    return basis.size();
}

} // namespace testalg
