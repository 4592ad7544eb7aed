#include "staralg/projlat.hpp"

#include <algorithm>
#include <cmath>

#include "staralg/opcalc.hpp"

namespace staralg {

namespace {

void require_projection_member(const FdAlgebra& a, const CMat& p, const Tolerance& tol,
                               const char* where) {
    if (!is_projection_matrix(p, tol))
        throw Error(ErrorCode::NotAProjection, where);
    if (!a.membership(p))
        throw Error(ErrorCode::NotAMember, where);
}

} // namespace

CMat join(const FdAlgebra& a, const CMat& p, const CMat& q, const Tolerance& tol) {
    require_projection_member(a, p, tol, "join");
    require_projection_member(a, q, tol, "join");
    const CMat sum = p + q;
    EigDecomp eig = herm_eig(sum, tol);
    const std::size_t n = sum.rows();
    const double cut = tol.cluster * std::max(1.0, eig.values.empty() ? 0.0 : eig.values.back());
    CMat out(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (eig.values[j] <= cut) continue;
        const CMat c = eig.vectors.column(j);
        out += c * c.adjoint();
    }
    return out;
}

CMat meet(const FdAlgebra& a, const CMat& p, const CMat& q, const Tolerance& tol,
          MeetDiagnostics* diag) {
    require_projection_member(a, p, tol, "meet");
    require_projection_member(a, q, tol, "meet");
    const CMat pqp = p * q * p;
    EigDecomp eig = herm_eig((pqp + pqp.adjoint()) * Complex{0.5, 0.0}, tol);
    const std::size_t n = pqp.rows();
    CMat out(n, n);
    double nearest = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (eig.values[j] >= 1.0 - tol.cluster) {
            const CMat c = eig.vectors.column(j);
            out += c * c.adjoint();
        } else {
            nearest = std::max(nearest, eig.values[j]);
        }
    }
    if (diag) {
        diag->nearest_excluded = nearest;
        diag->ill_conditioned = nearest >= 1.0 - 10.0 * tol.cluster;
    }
    return out;
}

CMat complement(const FdAlgebra& a, const CMat& p, const Tolerance& tol) {
    if (!a.unital())
        throw Error(ErrorCode::NonUnitalAlgebra, "complement needs a unital algebra");
    require_projection_member(a, p, tol, "complement");
    return CMat::identity(a.ambient_dim()) - p;
}

PerspectivityChain perspectivity_chain(const FdAlgebra& a, const CMat& p, const CMat& q,
                                       std::size_t n_steps, const Tolerance& tol) {
    require_projection_member(a, p, tol, "perspectivity_chain");
    require_projection_member(a, q, tol, "perspectivity_chain");
    if (!(rank_vector(a, p, tol) == rank_vector(a, q, tol)))
        throw Error(ErrorCode::NotEquivalent, "rank vectors differ");

    PerspectivityChain chain;
    if (distance_fro(p, q) <= tol.rel * std::max(1.0, p.norm_fro())) {
        chain.steps.push_back(p);
        return chain;
    }
    if (n_steps == 0)
        throw Error(ErrorCode::StepCountTooSmall, "nontrivial chain needs n_steps >= 1");

    const std::size_t n = a.ambient_dim();
    const CMat s = join(a, p, q, tol);

    auto w1 = mv_equivalent(a, p, q, tol);
    auto w2 = mv_equivalent(a, a.project(s - p), a.project(s - q), tol);
    if (!w1 || !w2)
        throw Error(ErrorCode::NotEquivalent, "no corner unitary witness");
    const CMat v = *w1 + *w2;

    // Principal logarithm of the corner unitary; the complement of s sits
    // in the kernel and gets angle 0.
    NormalEig ve = normal_eig(v, tol);
    std::vector<double> theta(ve.values.size());
    for (std::size_t k = 0; k < ve.values.size(); ++k) {
        const Complex z = ve.values[k];
        theta[k] = std::abs(z) > 0.5 ? std::arg(z) : 0.0;
    }
    auto conjugate_step = [&](double t) {
        std::vector<Complex> phases(theta.size());
        for (std::size_t k = 0; k < theta.size(); ++k)
            phases[k] = std::exp(Complex{0.0, theta[k] * t});
        const CMat w = ve.vectors * CMat::diag(phases) * ve.vectors.adjoint();
        return w * p * w.adjoint();
    };

    chain.steps.push_back(p);
    for (std::size_t j = 1; j <= n_steps; ++j) {
        CMat pj = conjugate_step(static_cast<double>(j) / static_cast<double>(n_steps));
        pj = (pj + pj.adjoint()) * Complex{0.5, 0.0};
        chain.steps.push_back(std::move(pj));
    }

    double residual = distance_fro(chain.steps.back(), q);
    for (std::size_t j = 1; j < chain.steps.size(); ++j) {
        const CMat& prev = chain.steps[j - 1];
        const CMat& cur = chain.steps[j];
        const CMat sj = join(a, prev, cur, tol);
        const CMat r = a.project(sj - prev);
        residual = std::max(residual, distance_fro(r, sj - prev));
        residual = std::max(residual, meet(a, prev, r, tol).norm_fro());
        residual = std::max(residual, meet(a, cur, r, tol).norm_fro());
        residual = std::max(residual, distance_fro(join(a, prev, r, tol), join(a, cur, r, tol)));
        if (!a.membership(cur))
            throw Error(ErrorCode::StepCountTooSmall, "chain step escapes the algebra");
        chain.witnesses.push_back(r);
    }
    chain.max_residual = residual;
    if (residual > tol.cluster)
        throw Error(ErrorCode::StepCountTooSmall, "witness conditions fail at this step count");
    return chain;
}

std::optional<RankVector> partial_sum(const FdAlgebra& a, const RankVector& cp,
                                      const RankVector& cq) {
    const auto& blocks = a.blocks();
    if (cp.ranks.size() != blocks.size() || cq.ranks.size() != blocks.size())
        throw Error(ErrorCode::BadInput, "rank vector length mismatch");
    RankVector out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (cp.ranks[i] > blocks[i].size || cq.ranks[i] > blocks[i].size)
            throw Error(ErrorCode::BadInput, "rank vector exceeds block size");
        const std::size_t sum = cp.ranks[i] + cq.ranks[i];
        if (sum > blocks[i].size) return std::nullopt;
        out.ranks.push_back(sum);
    }
    return out;
}

} // namespace staralg
