#pragma once

#include <optional>
#include <vector>

#include "staralg/fdalg.hpp"

namespace staralg {

// p_0, ..., p_n with each consecutive pair perspective; witnesses r_j
// satisfy p_{j-1} /\ r_j = 0 = p_j /\ r_j and p_{j-1} \/ r_j = p_j \/ r_j.
struct PerspectivityChain {
    std::vector<CMat> steps;
    std::vector<CMat> witnesses;
    double max_residual = 0.0;
};

struct MeetDiagnostics {
    // Set when an eigenvalue of pqp falls just below the acceptance window
    // for 1, i.e. the subspaces nearly touch.
    bool ill_conditioned = false;
    double nearest_excluded = 0.0;
};

// Support projection of p + q: the projection onto ran p + ran q.
CMat join(const FdAlgebra& a, const CMat& p, const CMat& q, const Tolerance& tol);

// Indicator of the eigenvalue 1 of pqp: the projection onto ran p /\ ran q.
CMat meet(const FdAlgebra& a, const CMat& p, const CMat& q, const Tolerance& tol,
          MeetDiagnostics* diag = nullptr);

// unit - p in a unital algebra.
CMat complement(const FdAlgebra& a, const CMat& p, const Tolerance& tol);

// Chain of conjugates of p under the principal logarithm of a corner
// unitary carrying p to q, with perspectivity witnesses at every step.
PerspectivityChain perspectivity_chain(const FdAlgebra& a, const CMat& p, const CMat& q,
                                       std::size_t n_steps, const Tolerance& tol);

// Componentwise sum when every block stays within its size bound;
// absent otherwise.
std::optional<RankVector> partial_sum(const FdAlgebra& a, const RankVector& cp,
                                      const RankVector& cq);

} // namespace staralg
