#include "staralg/fdalg.hpp"

#include <algorithm>
#include <cmath>

#include "staralg/opcalc.hpp"

namespace staralg {

namespace {

// Append candidate to the HS-orthonormal family if its residual is
// significant; returns true when a new direction was added.
bool hs_append(std::vector<CMat>& basis, const CMat& candidate, double drop_tol) {
    const double cnorm = candidate.norm_fro();
    if (cnorm <= drop_tol) return false;
    CMat w = candidate;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
            const Complex ip = w.hs_inner(b);
            w -= ip * b;
        }
    }
    const double nw = w.norm_fro();
    if (nw <= drop_tol * std::max(1.0, cnorm)) return false;
    basis.push_back(w * Complex{1.0 / nw, 0.0});
    return true;
}

double commutator_norm(const CMat& a, const CMat& b) {
    return distance_fro(a * b, b * a);
}

// Spectral projector onto the eigenvalue clusters of a Hermitian matrix
// lying in (lo, hi).
CMat spectral_window(const EigDecomp& eig, double lo, double hi) {
    const std::size_t n = eig.vectors.rows();
    CMat p(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (eig.values[j] > lo && eig.values[j] < hi) {
            const CMat c = eig.vectors.column(j);
            p += c * c.adjoint();
        }
    }
    return p;
}

struct DecomposeContext {
    const std::vector<CMat>* basis;
    std::size_t ambient;
    Tolerance tol;

    std::vector<Complex> coords(const CMat& x) const {
        std::vector<Complex> c(basis->size());
        for (std::size_t j = 0; j < basis->size(); ++j) c[j] = x.hs_inner((*basis)[j]);
        return c;
    }

    CMat project(const CMat& x) const {
        CMat p(x.rows(), x.cols());
        for (const auto& b : *basis) p += x.hs_inner(b) * b;
        return p;
    }

    bool member(const CMat& x) const {
        return distance_fro(x, project(x)) <= tol.rel * std::max(1.0, x.norm_fro());
    }
};

// Orthonormal basis of the corner pAp.
std::vector<CMat> corner_basis(const DecomposeContext& ctx, const CMat& p) {
    std::vector<CMat> out;
    const double drop = ctx.tol.cluster;
    for (const auto& b : *ctx.basis) hs_append(out, p * b * p, drop);
    return out;
}

// A seeded self-adjoint element of the span of the given family.
CMat random_self_adjoint_in(const std::vector<CMat>& family, std::size_t n, Rng& rng) {
    CMat g(n, n);
    for (const auto& b : family) {
        const Complex c{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        g += c * b;
    }
    return (g + g.adjoint()) * Complex{0.5, 0.0};
}

// The unit of the algebra spanned by `basis`: support projection of
// sum b b^*, verified to act as a two-sided identity.
CMat algebra_unit(const DecomposeContext& ctx) {
    const std::size_t n = ctx.ambient;
    CMat t(n, n);
    for (const auto& b : *ctx.basis) t += b * b.adjoint();
    if (t.norm_fro() == 0.0) return CMat::zero(n, n);
    EigDecomp eig = herm_eig(t, ctx.tol);
    const double cut = ctx.tol.cluster * std::max(1.0, eig.values.back());
    CMat e = spectral_window(eig, cut, eig.values.back() + 1.0);
    for (const auto& b : *ctx.basis) {
        if (distance_fro(e * b, b) > ctx.tol.cluster * std::max(1.0, b.norm_fro()) ||
            distance_fro(b * e, b) > ctx.tol.cluster * std::max(1.0, b.norm_fro()))
            throw Error(ErrorCode::DecompositionFailed, "support projection is not a unit");
    }
    return e;
}

// Minimal projection below p: repeatedly split by the lowest spectral
// cluster of a random self-adjoint corner element.
CMat refine_to_atom(const DecomposeContext& ctx, CMat p, Rng& rng) {
    for (std::size_t guard = 0; guard <= ctx.ambient + 2; ++guard) {
        std::vector<CMat> corner = corner_basis(ctx, p);
        if (corner.size() <= 1) return p;
        CMat best_split;
        bool split_found = false;
        for (int attempt = 0; attempt < 5 && !split_found; ++attempt) {
            CMat a = random_self_adjoint_in(corner, ctx.ambient, rng);
            // Shift away from the corner's complement so the kernel of p
            // does not mix with genuine eigenvalues.
            EigDecomp raw = herm_eig(a, ctx.tol);
            const double amax = std::max(std::abs(raw.values.front()), std::abs(raw.values.back()));
            a += Complex{3.0 * amax + 1.0, 0.0} * p;
            EigDecomp eig = herm_eig(a, ctx.tol);
            const double radius = ctx.tol.cluster * std::max(1.0, eig.values.back());
            // Lowest cluster above the kernel.
            std::size_t j = 0;
            while (j < eig.values.size() && eig.values[j] <= radius) ++j;
            if (j == eig.values.size()) continue;
            const double lo = eig.values[j];
            std::size_t jend = j;
            while (jend + 1 < eig.values.size() && eig.values[jend + 1] - eig.values[jend] <= radius)
                ++jend;
            CMat q = spectral_window(eig, lo - radius / 2, eig.values[jend] + radius / 2);
            if (static_cast<std::size_t>(std::lround(q.trace().real())) ==
                static_cast<std::size_t>(std::lround(p.trace().real())))
                continue; // the whole corner fell in one cluster; resample
            best_split = std::move(q);
            split_found = true;
        }
        if (!split_found)
            throw Error(ErrorCode::DecompositionFailed, "atom refinement stalled");
        p = std::move(best_split);
    }
    throw Error(ErrorCode::DecompositionFailed, "atom refinement did not terminate");
}

std::pair<std::vector<BlockData>, std::vector<CMat>> decompose_impl(const DecomposeContext& ctx,
                                                                    std::uint64_t seed);

} // namespace

FdAlgebra FdAlgebra::generate(const std::vector<CMat>& gens, std::size_t ambient_dim,
                              std::size_t cap, const Tolerance& tol, std::uint64_t seed) {
    for (const auto& g : gens) {
        if (g.rows() != ambient_dim || g.cols() != ambient_dim)
            throw Error(ErrorCode::NonSquareGenerator, "generator shape mismatch");
        g.require_finite("generator");
    }

    FdAlgebra a;
    a.ambient_dim_ = ambient_dim;
    a.tol_ = tol;
    const double drop = tol.cluster;

    std::vector<CMat>& basis = a.basis_;
    std::vector<CMat> frontier;
    auto add = [&](const CMat& c) {
        if (hs_append(basis, c, drop)) {
            frontier.push_back(basis.back());
            if (basis.size() > cap)
                throw Error(ErrorCode::CapExceeded, "generated dimension exceeds cap");
            return true;
        }
        return false;
    };

    for (const auto& g : gens) {
        add(g);
        add(g.adjoint());
    }
    // Alternate product/adjoint closure until the dimension stabilizes.
    while (!frontier.empty()) {
        std::vector<CMat> fresh = std::move(frontier);
        frontier.clear();
        const std::size_t old_count = basis.size() - fresh.size();
        for (const auto& f : fresh) add(f.adjoint());
        for (const auto& f : fresh) {
            for (std::size_t j = 0; j < basis.size(); ++j) {
                add(f * basis[j]);
                if (j < old_count) add(basis[j] * f);
            }
        }
    }

    DecomposeContext ctx{&a.basis_, ambient_dim, tol};
    auto [blocks, centrals] = decompose_impl(ctx, seed);
    a.blocks_ = std::move(blocks);
    a.centrals_ = std::move(centrals);
    a.unit_ = CMat::zero(ambient_dim, ambient_dim);
    for (const auto& z : a.centrals_) a.unit_ += z;
    a.unital_ = ambient_dim == 0 ||
                distance_fro(a.unit_, CMat::identity(ambient_dim)) <=
                    tol.cluster * std::max(1.0, std::sqrt(static_cast<double>(ambient_dim)));
    return a;
}

std::vector<Complex> FdAlgebra::coordinates(const CMat& x) const {
    std::vector<Complex> c(basis_.size());
    for (std::size_t j = 0; j < basis_.size(); ++j) c[j] = x.hs_inner(basis_[j]);
    return c;
}

CMat FdAlgebra::project(const CMat& x) const {
    CMat p(x.rows(), x.cols());
    for (const auto& b : basis_) p += x.hs_inner(b) * b;
    return p;
}

bool FdAlgebra::membership(const CMat& x) const {
    if (x.rows() != ambient_dim_ || x.cols() != ambient_dim_) return false;
    return distance_fro(x, project(x)) <= tol_.rel * std::max(1.0, x.norm_fro());
}

CMat FdAlgebra::compress(std::size_t block_index, const CMat& x) const {
    const BlockData& blk = blocks_[block_index];
    const double m = static_cast<double>(blk.multiplicity);
    CMat out(blk.size, blk.size);
    for (std::size_t j = 0; j < blk.size; ++j)
        for (std::size_t k = 0; k < blk.size; ++k)
            out(j, k) = x.hs_inner(blk.unit(j, k)) / m;
    return out;
}

CMat FdAlgebra::lift(std::size_t block_index, const CMat& abstract) const {
    const BlockData& blk = blocks_[block_index];
    CMat out(ambient_dim_, ambient_dim_);
    for (std::size_t j = 0; j < blk.size; ++j)
        for (std::size_t k = 0; k < blk.size; ++k) {
            const Complex c = abstract(j, k);
            if (c != Complex{0.0, 0.0}) out += c * blk.unit(j, k);
        }
    return out;
}

std::vector<CMat> center(const FdAlgebra& a, const Tolerance& tol) {
    const std::size_t dim = a.dim();
    const std::size_t n = a.ambient_dim();
    if (dim == 0) return {};
    // Stack the commutator map [x, b_k] over all basis elements; the center
    // is its null space inside the span.
    CMat stacked(dim * n * n, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        for (std::size_t k = 0; k < dim; ++k) {
            const CMat comm = a.basis()[col] * a.basis()[k] - a.basis()[k] * a.basis()[col];
            for (std::size_t e = 0; e < n * n; ++e) stacked(k * n * n + e, col) = comm.data()[e];
        }
    }
    SvdResult d = svd(stacked, tol);
    const double smax = d.s.empty() ? 0.0 : d.s.front();
    const double cutoff = std::max(tol.abs, tol.cluster * std::max(1.0, smax));
    std::vector<CMat> out;
    for (std::size_t j = 0; j < d.s.size(); ++j) {
        if (d.s[j] > cutoff) continue;
        CMat z(n, n);
        for (std::size_t k = 0; k < dim; ++k) z += d.v(k, j) * a.basis()[k];
        out.push_back(std::move(z));
    }
    return out;
}

namespace {

std::vector<CMat> center_ctx(const DecomposeContext& ctx) {
    // Same construction as center(), phrased on the raw basis.
    const std::size_t dim = ctx.basis->size();
    const std::size_t n = ctx.ambient;
    if (dim == 0) return {};
    CMat stacked(dim * n * n, dim);
    for (std::size_t col = 0; col < dim; ++col)
        for (std::size_t k = 0; k < dim; ++k) {
            const CMat comm = (*ctx.basis)[col] * (*ctx.basis)[k] - (*ctx.basis)[k] * (*ctx.basis)[col];
            for (std::size_t e = 0; e < n * n; ++e) stacked(k * n * n + e, col) = comm.data()[e];
        }
    SvdResult d = svd(stacked, ctx.tol);
    const double smax = d.s.empty() ? 0.0 : d.s.front();
    const double cutoff = std::max(ctx.tol.abs, ctx.tol.cluster * std::max(1.0, smax));
    std::vector<CMat> out;
    for (std::size_t j = 0; j < d.s.size(); ++j) {
        if (d.s[j] > cutoff) continue;
        CMat z(n, n);
        for (std::size_t k = 0; k < dim; ++k) z += d.v(k, j) * (*ctx.basis)[k];
        out.push_back(std::move(z));
    }
    return out;
}

std::pair<std::vector<BlockData>, std::vector<CMat>> decompose_once(const DecomposeContext& ctx,
                                                                    Rng& rng) {
    const std::size_t n = ctx.ambient;
    const std::size_t dim = ctx.basis->size();
    std::vector<BlockData> blocks;
    std::vector<CMat> centrals;
    if (dim == 0) return {blocks, centrals};

    const CMat e = algebra_unit(ctx);
    const std::vector<CMat> zcenter = center_ctx(ctx);
    const std::size_t n_blocks = zcenter.size();

    // Generic self-adjoint central element, shifted off the complement of
    // the algebra's unit so its kernel carries no block.
    CMat g = random_self_adjoint_in(zcenter, n, rng);
    EigDecomp raw = herm_eig(g, ctx.tol);
    const double amax =
        raw.values.empty() ? 0.0 : std::max(std::abs(raw.values.front()), std::abs(raw.values.back()));
    g += Complex{3.0 * amax + 1.0, 0.0} * e;
    EigDecomp eig = herm_eig(g, ctx.tol);
    const double radius = ctx.tol.cluster * std::max(1.0, eig.values.back());

    // Cluster the positive part of the spectrum.
    std::vector<std::pair<double, double>> windows;
    std::size_t j = 0;
    while (j < eig.values.size() && eig.values[j] <= radius) ++j;
    while (j < eig.values.size()) {
        std::size_t jend = j;
        while (jend + 1 < eig.values.size() && eig.values[jend + 1] - eig.values[jend] <= radius)
            ++jend;
        windows.emplace_back(eig.values[j] - radius / 2, eig.values[jend] + radius / 2);
        j = jend + 1;
    }
    if (windows.size() != n_blocks)
        throw Error(ErrorCode::DecompositionFailed, "central element failed to separate blocks");

    for (const auto& [lo, hi] : windows) {
        const CMat z = spectral_window(eig, lo, hi);
        for (const auto& b : *ctx.basis)
            if (commutator_norm(z, b) > ctx.tol.cluster * std::max(1.0, b.norm_fro()))
                throw Error(ErrorCode::DecompositionFailed, "central candidate fails to commute");
        if (!ctx.member(z))
            throw Error(ErrorCode::DecompositionFailed, "central candidate escapes the span");
        centrals.push_back(z);
    }

    // Matrix units inside each block.
    std::size_t total_dim = 0;
    for (const auto& z : centrals) {
        const std::size_t block_dim = corner_basis(ctx, z).size();

        std::vector<CMat> atoms;
        CMat remaining = z;
        while (remaining.norm_fro() > ctx.tol.cluster) {
            CMat atom = refine_to_atom(ctx, remaining, rng);
            atoms.push_back(atom);
            remaining = remaining - atom;
            remaining = (remaining + remaining.adjoint()) * Complex{0.5, 0.0};
        }
        const std::size_t nsize = atoms.size();
        if (nsize * nsize != block_dim)
            throw Error(ErrorCode::DecompositionFailed, "atom count does not match block dimension");

        // Connecting isometries u_j: u_j u_j^* = atom_0, u_j^* u_j = atom_j.
        std::vector<CMat> links(nsize);
        links[0] = atoms[0];
        for (std::size_t t = 1; t < nsize; ++t) {
            CMat best(n, n);
            double best_norm = 0.0;
            for (const auto& b : *ctx.basis) {
                CMat w = atoms[0] * b * atoms[t];
                const double wn = w.norm_fro();
                if (wn > best_norm + 1e-14) {
                    best_norm = wn;
                    best = std::move(w);
                }
            }
            if (best_norm <= ctx.tol.cluster)
                throw Error(ErrorCode::DecompositionFailed, "disconnected atoms inside a block");
            // w w^* is a positive multiple of the rank-m atom.
            const double scale2 = (best * best.adjoint()).trace().real() / atoms[0].trace().real();
            links[t] = best * Complex{1.0 / std::sqrt(scale2), 0.0};
        }

        BlockData blk;
        blk.size = nsize;
        const double mtrace = atoms[0].trace().real();
        blk.multiplicity = static_cast<std::size_t>(std::lround(mtrace));
        blk.units.resize(nsize * nsize);
        for (std::size_t jj = 0; jj < nsize; ++jj)
            for (std::size_t kk = 0; kk < nsize; ++kk)
                blk.units[jj * nsize + kk] = links[jj].adjoint() * links[kk];
        blocks.push_back(std::move(blk));
        total_dim += nsize * nsize;
    }
    if (total_dim != dim)
        throw Error(ErrorCode::DecompositionFailed, "block dimensions do not add up");

    // Deterministic block order.
    std::vector<std::size_t> order(blocks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto diag_less = [&](const CMat& a, const CMat& b) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (a(i, i).real() != b(i, i).real()) return a(i, i).real() < b(i, i).real();
        }
        return false;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (blocks[i].size != blocks[j].size) return blocks[i].size < blocks[j].size;
        if (blocks[i].multiplicity != blocks[j].multiplicity)
            return blocks[i].multiplicity < blocks[j].multiplicity;
        return diag_less(centrals[i], centrals[j]);
    });
    std::vector<BlockData> sorted_blocks;
    std::vector<CMat> sorted_centrals;
    for (auto idx : order) {
        sorted_blocks.push_back(std::move(blocks[idx]));
        sorted_centrals.push_back(std::move(centrals[idx]));
    }

    // Residual verification of the matrix-unit relations.
    const double check = ctx.tol.cluster;
    for (const auto& blk : sorted_blocks) {
        const std::size_t m = blk.size;
        for (std::size_t a1 = 0; a1 < m; ++a1)
            for (std::size_t b1 = 0; b1 < m; ++b1) {
                if (distance_fro(blk.unit(a1, b1).adjoint(), blk.unit(b1, a1)) > check)
                    throw Error(ErrorCode::DecompositionFailed, "unit adjoint relation fails");
                for (std::size_t c1 = 0; c1 < m; ++c1)
                    for (std::size_t d1 = 0; d1 < m; ++d1) {
                        const CMat prod = blk.unit(a1, b1) * blk.unit(c1, d1);
                        const CMat expect =
                            (b1 == c1) ? blk.unit(a1, d1) : CMat::zero(ctx.ambient, ctx.ambient);
                        if (distance_fro(prod, expect) > check)
                            throw Error(ErrorCode::DecompositionFailed, "unit product relation fails");
                    }
            }
    }
    return {std::move(sorted_blocks), std::move(sorted_centrals)};
}

std::pair<std::vector<BlockData>, std::vector<CMat>> decompose_impl(const DecomposeContext& ctx,
                                                                    std::uint64_t seed) {
    std::string last = "decomposition failed";
    for (int attempt = 0; attempt < 5; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt) * 0x9e3779b97f4a7c15ULL);
        try {
            return decompose_once(ctx, rng);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::DecompositionFailed) throw;
            last = err.what();
        }
    }
    throw Error(ErrorCode::DecompositionFailed, last + " (after 5 seeds)");
}

} // namespace

std::pair<std::vector<BlockData>, std::vector<CMat>> decompose(const FdAlgebra& a,
                                                               const Tolerance& tol,
                                                               std::uint64_t seed) {
    DecomposeContext ctx{&a.basis(), a.ambient_dim(), tol};
    return decompose_impl(ctx, seed);
}

ProjectionClass classify_projection(const FdAlgebra& a, const CMat& p, const Tolerance& tol) {
    if (!is_projection_matrix(p, tol))
        throw Error(ErrorCode::NotAProjection, "classify_projection input");
    if (!a.membership(p))
        throw Error(ErrorCode::NotAMember, "projection lies outside the algebra");

    DecomposeContext ctx{&a.basis(), a.ambient_dim(), tol};
    const std::vector<CMat> corner = corner_basis(ctx, p);

    ProjectionClass out;
    out.is_atom = corner.size() == 1;
    out.is_abelian = true;
    for (std::size_t i = 0; i < corner.size() && out.is_abelian; ++i)
        for (std::size_t j = i + 1; j < corner.size(); ++j)
            if (commutator_norm(corner[i], corner[j]) > tol.cluster) {
                out.is_abelian = false;
                break;
            }
    out.is_central = true;
    for (const auto& b : a.basis())
        if (commutator_norm(p, b) > tol.cluster * std::max(1.0, b.norm_fro())) {
            out.is_central = false;
            break;
        }
    return out;
}

RankVector rank_vector(const FdAlgebra& a, const CMat& p, const Tolerance& tol) {
    if (!is_projection_matrix(p, tol))
        throw Error(ErrorCode::NotAProjection, "rank_vector input");
    RankVector rv;
    std::size_t weighted = 0;
    for (std::size_t i = 0; i < a.blocks().size(); ++i) {
        const CMat c = a.compress(i, p);
        const std::size_t r = rank(c, tol);
        rv.ranks.push_back(r);
        weighted += a.blocks()[i].multiplicity * r;
    }
    if (weighted != rank(p, tol))
        throw Error(ErrorCode::NotAMember, "projection rank disagrees with block ranks");
    return rv;
}

std::optional<CMat> mv_equivalent(const FdAlgebra& a, const CMat& p, const CMat& q,
                                  const Tolerance& tol) {
    const RankVector rp = rank_vector(a, p, tol);
    const RankVector rq = rank_vector(a, q, tol);
    if (!(rp == rq)) return std::nullopt;

    CMat v(a.ambient_dim(), a.ambient_dim());
    for (std::size_t i = 0; i < a.blocks().size(); ++i) {
        const std::size_t k = rp.ranks[i];
        if (k == 0) continue;
        const std::size_t nsize = a.blocks()[i].size;
        const CMat cp = a.compress(i, p);
        const CMat cq = a.compress(i, q);
        EigDecomp ep = herm_eig((cp + cp.adjoint()) * Complex{0.5, 0.0}, tol);
        EigDecomp eq = herm_eig((cq + cq.adjoint()) * Complex{0.5, 0.0}, tol);
        // Range bases: top-k eigencolumns (eigenvalues near 1).
        CMat w(nsize, nsize);
        for (std::size_t l = 0; l < k; ++l) {
            const CMat acol = ep.vectors.column(nsize - 1 - l);
            const CMat bcol = eq.vectors.column(nsize - 1 - l);
            w += bcol * acol.adjoint();
        }
        v += a.lift(i, w);
    }
    return v;
}

CMat random_member(const FdAlgebra& a, Rng& rng) {
    CMat x(a.ambient_dim(), a.ambient_dim());
    for (const auto& b : a.basis()) x += rng.cnormal() * b;
    return x;
}

CMat random_self_adjoint_member(const FdAlgebra& a, Rng& rng) {
    const CMat x = random_member(a, rng);
    return (x + x.adjoint()) * Complex{0.5, 0.0};
}

CMat random_projection_of_rank(const FdAlgebra& a, const RankVector& rv, Rng& rng) {
    CMat p(a.ambient_dim(), a.ambient_dim());
    for (std::size_t i = 0; i < a.blocks().size(); ++i) {
        const std::size_t nsize = a.blocks()[i].size;
        const std::size_t k = std::min(rv.ranks[i], nsize);
        if (k == 0) continue;
        EigDecomp e = herm_eig(rng.random_hermitian(nsize), a.tol());
        CMat abs_p(nsize, nsize);
        for (std::size_t l = 0; l < k; ++l) {
            const CMat c = e.vectors.column(l);
            abs_p += c * c.adjoint();
        }
        p += a.lift(i, abs_p);
    }
    return p;
}

CMat random_projection(const FdAlgebra& a, Rng& rng) {
    RankVector rv;
    for (const auto& blk : a.blocks())
        rv.ranks.push_back(static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(blk.size))));
    return random_projection_of_rank(a, rv, rng);
}

} // namespace staralg
