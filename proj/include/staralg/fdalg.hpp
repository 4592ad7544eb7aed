#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "staralg/numlin.hpp"
#include "staralg/rng.hpp"

namespace staralg {

// One full matrix block of a finite-dimensional *-subalgebra of M_N:
// an n x n system of matrix units embedded with multiplicity m.
struct BlockData {
    std::size_t size = 0;          // abstract dimension n
    std::size_t multiplicity = 0;  // ambient rank of each diagonal unit
    std::vector<CMat> units;       // row-major n*n list, units[j*n+k] = e_{jk}

    const CMat& unit(std::size_t j, std::size_t k) const { return units[j * size + k]; }
};

// Per-block integer ranks of a projection class.
struct RankVector {
    std::vector<std::size_t> ranks;

    bool operator==(const RankVector&) const = default;
};

struct ProjectionClass {
    bool is_atom = false;
    bool is_abelian = false;
    bool is_central = false;
};

// A finite-dimensional *-subalgebra of M_N with computed block structure.
// Immutable after construction; all operations on it are pure.
class FdAlgebra {
public:
    // Smallest *-subalgebra of M_N containing the generators, with blocks
    // and central projections computed. Throws NonSquareGenerator,
    // CapExceeded, DecompositionFailed.
    static FdAlgebra generate(const std::vector<CMat>& gens, std::size_t ambient_dim,
                              std::size_t cap, const Tolerance& tol, std::uint64_t seed = 1);

    static constexpr std::size_t kDefaultCap = 4096;

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<CMat>& basis() const { return basis_; }
    bool unital() const { return unital_; }
    // The algebra's own unit (equals the ambient identity iff unital()).
    const CMat& unit() const { return unit_; }
    const std::vector<BlockData>& blocks() const { return blocks_; }
    const std::vector<CMat>& central_projections() const { return centrals_; }
    const Tolerance& tol() const { return tol_; }

    // Coefficients of the orthogonal projection of x onto span(basis).
    std::vector<Complex> coordinates(const CMat& x) const;
    CMat project(const CMat& x) const;

    // Distance from x to span(basis) <= tol.rel * max(1, ||x||_F).
    bool membership(const CMat& x) const;

    // Abstract n x n compression of x into the given block.
    CMat compress(std::size_t block_index, const CMat& x) const;
    // Ambient lift of an abstract block matrix.
    CMat lift(std::size_t block_index, const CMat& abstract) const;

private:
    std::size_t ambient_dim_ = 0;
    std::vector<CMat> basis_;
    bool unital_ = false;
    CMat unit_;
    std::vector<BlockData> blocks_;
    std::vector<CMat> centrals_;
    Tolerance tol_;
};

// Orthonormal (Hilbert-Schmidt) basis of {x in A : xb = bx for all b}.
std::vector<CMat> center(const FdAlgebra& a, const Tolerance& tol);

// Recompute blocks and central projections from scratch with a fresh seed.
std::pair<std::vector<BlockData>, std::vector<CMat>> decompose(const FdAlgebra& a,
                                                               const Tolerance& tol,
                                                               std::uint64_t seed);

ProjectionClass classify_projection(const FdAlgebra& a, const CMat& p, const Tolerance& tol);

RankVector rank_vector(const FdAlgebra& a, const CMat& p, const Tolerance& tol);

// Partial isometry v in A with v^* v = p and v v^* = q when the rank
// vectors agree; nothing otherwise.
std::optional<CMat> mv_equivalent(const FdAlgebra& a, const CMat& p, const CMat& q,
                                  const Tolerance& tol);

// Seeded sampling helpers used by property suites.
CMat random_member(const FdAlgebra& a, Rng& rng);
CMat random_self_adjoint_member(const FdAlgebra& a, Rng& rng);
// Projection with the given per-block ranks, built from seeded block bases.
CMat random_projection_of_rank(const FdAlgebra& a, const RankVector& rv, Rng& rng);
// Projection with seeded random per-block ranks.
CMat random_projection(const FdAlgebra& a, Rng& rng);

} // namespace staralg
