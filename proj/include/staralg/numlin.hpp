#pragma once

#include <vector>

#include "staralg/cmat.hpp"

namespace staralg {

// Eigendecomposition of a Hermitian matrix: a = vectors * diag(values) * vectors^*
// with values ascending and vectors unitary.
struct EigDecomp {
    std::vector<double> values;
    CMat vectors;
};

struct SvdResult {
    CMat u;                  // orthonormal columns
    std::vector<double> s;   // descending, nonnegative
    CMat v;                  // orthonormal columns
};

// Cyclic Jacobi eigensolver for Hermitian matrices. Deterministic: fixed
// sweep order, ascending eigenvalues, lexicographic tie-break, phase-fixed
// eigenvectors. Throws NotHermitian / DidNotConverge.
EigDecomp herm_eig(const CMat& a, const Tolerance& tol);

// SVD through herm_eig on the Gram matrix of the smaller side; missing
// null-space columns of u/v are completed from the standard basis.
SvdResult svd(const CMat& x, const Tolerance& tol);

// Count of singular values above cluster * max(s).
std::size_t rank(const CMat& x, const Tolerance& tol);

// Orthonormal basis of the joint column space of the given blocks.
// Column count equals the rank of the concatenation.
CMat orth_span(const std::vector<CMat>& columns, const Tolerance& tol);

// Largest singular value (0 for empty matrices).
double op_norm(const CMat& x, const Tolerance& tol);

} // namespace staralg
