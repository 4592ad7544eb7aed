#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "staralg/fdalg.hpp"

namespace staralg {

// Finite generalized field of sets over a ground set of at most 16 points,
// sets encoded as bitmasks.
struct GenFieldOfSets {
    std::size_t ground_size = 0;
    std::vector<std::uint32_t> sets;

    static constexpr std::size_t kMaxGround = 16;
};

struct FieldReport {
    bool is_field = false;    // closed under intersection, union, difference
    bool is_boolean = false;  // additionally contains the whole ground set
};

FieldReport validate_field(const GenFieldOfSets& s);

// The commutative algebra of the field: indicator functions acting by
// pointwise multiplication on C^{|X|}. Throws NotAField.
FdAlgebra r_of_s(const GenFieldOfSets& s, const Tolerance& tol);

// Inverse direction: the projections of a commutative algebra as subsets of
// its |blocks|-point spectrum (the full power set of the atoms).
GenFieldOfSets projections_to_sets(const FdAlgebra& a, const Tolerance& tol);

// x = sum z_k p_k with distinct nonzero z_k and mutually orthogonal
// projections p_k in A, ordered by (re, im).
std::vector<std::pair<Complex, CMat>> spectral_resolution(const FdAlgebra& a, const CMat& x,
                                                          const Tolerance& tol);

// Table form of a projection map between commutative algebras: atom-subset
// bitmask of A -> atom-subset bitmask of B, one entry per element of P(A).
using LatticeHomTable = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// The unique linear extension of a 0-preserving lattice homomorphism
// P(A) -> P(B), returned as the |atoms(B)| x |atoms(A)| 0/1 matrix over the
// atom bases; verified multiplicative and adjoint-preserving.
CMat lift_lattice_hom(const FdAlgebra& a, const FdAlgebra& b, const LatticeHomTable& psi,
                      const Tolerance& tol);

// Canonical cell structure: points grouped by membership signature, sets
// re-encoded over cells. Isomorphism search is exhaustive over cell
// bijections (cell counts are at most 16).
GenFieldOfSets reduce_to_cells(const GenFieldOfSets& s);
bool fields_isomorphic(const GenFieldOfSets& s1, const GenFieldOfSets& s2);

} // namespace staralg
