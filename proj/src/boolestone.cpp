#include "staralg/boolestone.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "staralg/opcalc.hpp"

namespace staralg {

namespace {

std::vector<std::uint32_t> sorted_unique(std::vector<std::uint32_t> sets) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    return sets;
}

void require_ground(const GenFieldOfSets& s) {
    if (s.ground_size > GenFieldOfSets::kMaxGround)
        throw Error(ErrorCode::BadInput, "ground set larger than 16 points");
    const std::uint32_t full =
        s.ground_size == 32 ? 0xffffffffu : ((1u << s.ground_size) - 1u);
    for (auto m : s.sets)
        if ((m & ~full) != 0)
            throw Error(ErrorCode::BadInput, "set bitmask outside the ground set");
}

} // namespace

FieldReport validate_field(const GenFieldOfSets& s) {
    require_ground(s);
    FieldReport report;
    if (s.sets.empty()) return report;
    const std::vector<std::uint32_t> family = sorted_unique(s.sets);
    auto has = [&](std::uint32_t m) {
        return std::binary_search(family.begin(), family.end(), m);
    };
    report.is_field = true;
    for (auto a : family) {
        for (auto b : family) {
            if (!has(a & b) || !has(a | b) || !has(a & ~b)) {
                report.is_field = false;
                break;
            }
        }
        if (!report.is_field) break;
    }
    const std::uint32_t full = s.ground_size == 0 ? 0u : ((1u << s.ground_size) - 1u);
    report.is_boolean = report.is_field && has(full);
    return report;
}

FdAlgebra r_of_s(const GenFieldOfSets& s, const Tolerance& tol) {
    if (!validate_field(s).is_field)
        throw Error(ErrorCode::NotAField, "input family is not closed");
    std::vector<CMat> gens;
    for (auto m : sorted_unique(s.sets)) {
        CMat g(s.ground_size, s.ground_size);
        for (std::size_t i = 0; i < s.ground_size; ++i)
            if (m & (1u << i)) g(i, i) = 1.0;
        gens.push_back(std::move(g));
    }
    return FdAlgebra::generate(gens, s.ground_size, FdAlgebra::kDefaultCap, tol);
}

GenFieldOfSets projections_to_sets(const FdAlgebra& a, const Tolerance& tol) {
    for (const auto& blk : a.blocks())
        if (blk.size != 1)
            throw Error(ErrorCode::NotCommutative, "algebra has a block of size > 1");
    const std::size_t k = a.blocks().size();
    if (k > GenFieldOfSets::kMaxGround)
        throw Error(ErrorCode::BadInput, "more than 16 atoms");
    (void)tol;
    GenFieldOfSets out;
    out.ground_size = k;
    // Every 0/1 combination of atoms is a projection of the algebra, so the
    // fields arising here are exactly the power sets of the atoms.
    for (std::uint32_t m = 0; m < (1u << k); ++m) out.sets.push_back(m);
    return out;
}

std::vector<std::pair<Complex, CMat>> spectral_resolution(const FdAlgebra& a, const CMat& x,
                                                          const Tolerance& tol) {
    if (!a.membership(x))
        throw Error(ErrorCode::NotAMember, "spectral_resolution input");
    if (!is_normal(x, tol))
        throw Error(ErrorCode::NotNormal, "spectral_resolution input");
    SpectrumReport sp = spectrum(x, tol);
    std::vector<std::pair<Complex, CMat>> out;
    const double radius =
        tol.cluster * std::max(1.0, op_norm(x, tol));
    for (const auto& [z, mult] : sp.points) {
        if (std::abs(z) <= radius) continue;
        FnTable table;
        for (const auto& [w, m2] : sp.points)
            table.emplace_back(w, std::abs(w - z) <= radius ? Complex{1, 0} : Complex{0, 0});
        CMat p = borel_calc(x, table, false, tol);
        if (!a.membership(p))
            throw Error(ErrorCode::NotAMember, "spectral projection escapes the algebra");
        out.emplace_back(z, a.project(p));
    }
    return out;
}

CMat lift_lattice_hom(const FdAlgebra& a, const FdAlgebra& b, const LatticeHomTable& psi,
                      const Tolerance& tol) {
    for (const auto& blk : a.blocks())
        if (blk.size != 1)
            throw Error(ErrorCode::NotCommutative, "source algebra is not commutative");
    for (const auto& blk : b.blocks())
        if (blk.size != 1)
            throw Error(ErrorCode::NotCommutative, "target algebra is not commutative");
    const std::size_t ka = a.blocks().size();
    const std::size_t kb = b.blocks().size();
    // Exhaustive pair verification below is quadratic in |P(A)| = 2^ka.
    if (ka > 12 || kb > GenFieldOfSets::kMaxGround)
        throw Error(ErrorCode::BadInput, "too many atoms for exhaustive verification");

    // Total table over P(A).
    std::map<std::uint32_t, std::uint32_t> table;
    for (const auto& [in, out] : psi) {
        if (in >= (1u << ka) || out >= (1u << kb))
            throw Error(ErrorCode::BadInput, "psi table mask out of range");
        table[in] = out;
    }
    if (table.size() != (1u << ka))
        throw Error(ErrorCode::InconsistentExtension, "psi table must cover all of P(A)");
    if (table.at(0) != 0)
        throw Error(ErrorCode::ZeroNotPreserved, "psi(0) must be 0");
    for (std::uint32_t m1 = 0; m1 < (1u << ka); ++m1)
        for (std::uint32_t m2 = 0; m2 < (1u << ka); ++m2) {
            if (table.at(m1 | m2) != (table.at(m1) | table.at(m2)) ||
                table.at(m1 & m2) != (table.at(m1) & table.at(m2)))
                throw Error(ErrorCode::NotALatticeHom, "psi fails join/meet preservation");
        }

    CMat phi(kb, ka);
    for (std::size_t i = 0; i < ka; ++i) {
        const std::uint32_t image = table.at(1u << i);
        for (std::size_t j = 0; j < kb; ++j)
            if (image & (1u << j)) phi(j, i) = 1.0;
    }

    // The matrix must reproduce psi on every projection.
    auto apply = [&](std::uint32_t mask) {
        CMat img(b.ambient_dim(), b.ambient_dim());
        for (std::size_t i = 0; i < ka; ++i) {
            if (!(mask & (1u << i))) continue;
            for (std::size_t j = 0; j < kb; ++j)
                if (phi(j, i) != Complex{0.0, 0.0}) img += b.central_projections()[j];
        }
        return img;
    };
    for (const auto& [in, out] : table) {
        CMat expect(b.ambient_dim(), b.ambient_dim());
        for (std::size_t j = 0; j < kb; ++j)
            if (out & (1u << j)) expect += b.central_projections()[j];
        if (distance_fro(apply(in), expect) > tol.cluster)
            throw Error(ErrorCode::InconsistentExtension,
                        "psi is not additive over orthogonal joins");
    }

    // Verified *-homomorphism on basis products: atoms are orthogonal
    // idempotents, so images must be too.
    for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t j = 0; j < ka; ++j) {
            const CMat pi = apply(1u << i), pj = apply(1u << j);
            const CMat expect = i == j ? pi : CMat::zero(b.ambient_dim(), b.ambient_dim());
            if (distance_fro(pi * pj, expect) > tol.cluster)
                throw Error(ErrorCode::NotALatticeHom, "lift fails multiplicativity");
            if (distance_fro(pi.adjoint(), pi) > tol.cluster)
                throw Error(ErrorCode::NotALatticeHom, "lift fails adjoint preservation");
        }
    return phi;
}

GenFieldOfSets reduce_to_cells(const GenFieldOfSets& s) {
    require_ground(s);
    const std::vector<std::uint32_t> family = sorted_unique(s.sets);
    // Signature of a point: which sets contain it. Points with equal
    // signatures form a cell; uncovered points vanish.
    std::map<std::vector<bool>, std::uint32_t> cells;
    std::vector<std::uint32_t> point_cell(s.ground_size, 0);
    std::vector<bool> covered(s.ground_size, false);
    for (std::size_t x = 0; x < s.ground_size; ++x) {
        std::vector<bool> sig;
        bool any = false;
        for (auto m : family) {
            const bool in = (m >> x) & 1u;
            sig.push_back(in);
            any = any || in;
        }
        if (!any) continue;
        covered[x] = true;
        auto it = cells.find(sig);
        if (it == cells.end())
            it = cells.emplace(sig, static_cast<std::uint32_t>(cells.size())).first;
        point_cell[x] = it->second;
    }
    GenFieldOfSets out;
    out.ground_size = cells.size();
    for (auto m : family) {
        std::uint32_t reduced = 0;
        for (std::size_t x = 0; x < s.ground_size; ++x)
            if (covered[x] && ((m >> x) & 1u)) reduced |= 1u << point_cell[x];
        out.sets.push_back(reduced);
    }
    out.sets = sorted_unique(out.sets);
    return out;
}

bool fields_isomorphic(const GenFieldOfSets& s1, const GenFieldOfSets& s2) {
    const GenFieldOfSets r1 = reduce_to_cells(s1);
    const GenFieldOfSets r2 = reduce_to_cells(s2);
    if (r1.ground_size != r2.ground_size || r1.sets.size() != r2.sets.size()) return false;
    const std::size_t k = r1.ground_size;
    if (k == 0) return r1.sets == r2.sets;
    // Above 8 cells the exhaustive bijection search is replaced by the
    // signature-canonical comparison of the reduced families.
    if (k > 8) return r1.sets == r2.sets;

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool match = true;
        std::vector<std::uint32_t> mapped;
        for (auto m : r1.sets) {
            std::uint32_t t = 0;
            for (std::size_t x = 0; x < k; ++x)
                if ((m >> x) & 1u) t |= 1u << perm[x];
            mapped.push_back(t);
        }
        std::sort(mapped.begin(), mapped.end());
        match = mapped == r2.sets;
        if (match) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace staralg
