#include <doctest.h>

#include <cmath>

#include "staralg/boolestone.hpp"
#include "staralg/opcalc.hpp"
#include "support/algebras.hpp"

using namespace staralg;

namespace {

const Tolerance kTol{};

// Random genuine generalized field of sets: all unions of the cells of a
// random partition of a random subset of the ground set.
GenFieldOfSets random_field(Rng& rng, std::size_t max_ground) {
    const std::size_t ground = 1 + rng.uniform_int(0, static_cast<std::int64_t>(max_ground) - 1);
    const std::size_t ncells = 1 + rng.uniform_int(0, 2);
    std::vector<std::uint32_t> cells(ncells, 0);
    for (std::size_t x = 0; x < ground; ++x) {
        const std::int64_t c = rng.uniform_int(0, static_cast<std::int64_t>(ncells));
        if (c < static_cast<std::int64_t>(ncells)) cells[c] |= 1u << x;
    }
    cells.erase(std::remove(cells.begin(), cells.end(), 0u), cells.end());
    GenFieldOfSets s;
    s.ground_size = ground;
    for (std::uint32_t pick = 0; pick < (1u << cells.size()); ++pick) {
        std::uint32_t m = 0;
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (pick & (1u << c)) m |= cells[c];
        s.sets.push_back(m);
    }
    return s;
}

// Count the 0/1 diagonal members of a diagonal-spanned algebra.
std::size_t diagonal_projection_count(const FdAlgebra& a) {
    const std::size_t n = a.ambient_dim();
    std::size_t count = 0;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        CMat p(n, n);
        for (std::size_t i = 0; i < n; ++i)
            if (m & (1u << i)) p(i, i) = 1.0;
        if (a.membership(p)) ++count;
    }
    return count;
}

} // namespace

TEST_CASE("validate_field closed forms") {
    GenFieldOfSets power2{2, {0b00, 0b01, 0b10, 0b11}};
    FieldReport r1 = validate_field(power2);
    CHECK(r1.is_field);
    CHECK(r1.is_boolean);

    GenFieldOfSets half{2, {0b00, 0b01}};
    FieldReport r2 = validate_field(half);
    CHECK(r2.is_field);
    CHECK_FALSE(r2.is_boolean);

    GenFieldOfSets missing_union{2, {0b00, 0b01, 0b10}};
    FieldReport r3 = validate_field(missing_union);
    CHECK_FALSE(r3.is_field);
}

TEST_CASE("r_of_s on power sets gives the diagonal algebra") {
    GenFieldOfSets s{3, {}};
    for (std::uint32_t m = 0; m < 8; ++m) s.sets.push_back(m);
    FdAlgebra a = r_of_s(s, kTol);
    CHECK(a.dim() == 3);
    CHECK(a.unital());
    CHECK(a.blocks().size() == 3);
}

TEST_CASE("r_of_s of the two-point blob is the scalars") {
    GenFieldOfSets s{2, {0b00, 0b11}};
    FdAlgebra a = r_of_s(s, kTol);
    CHECK(a.dim() == 1);
    CHECK(a.unital());
    CHECK(a.blocks().size() == 1);
    CHECK(a.blocks()[0].multiplicity == 2);
}

TEST_CASE("r_of_s rejects non-fields") {
    GenFieldOfSets bad{2, {0b00, 0b01, 0b10}};
    CHECK_THROWS_AS(r_of_s(bad, kTol), Error);
}

TEST_CASE("projection count of r_of_s equals the family size") {
    // An 8-element field over 4 points: cells {1}, {2}, {3,4}.
    GenFieldOfSets s{4, {}};
    const std::vector<std::uint32_t> cells{0b0001, 0b0010, 0b1100};
    for (std::uint32_t pick = 0; pick < 8; ++pick) {
        std::uint32_t m = 0;
        for (std::size_t c = 0; c < 3; ++c)
            if (pick & (1u << c)) m |= cells[c];
        s.sets.push_back(m);
    }
    FdAlgebra a = r_of_s(s, kTol);
    CHECK(diagonal_projection_count(a) == s.sets.size());
    CHECK(projections_to_sets(a, kTol).sets.size() == s.sets.size());
}

TEST_CASE("projections_to_sets closed forms") {
    FdAlgebra d3 = testalg::diagonal_algebra(3);
    GenFieldOfSets s = projections_to_sets(d3, kTol);
    CHECK(s.ground_size == 3);
    CHECK(s.sets.size() == 8);

    // span{I2} in M2 reduces to a single point.
    FdAlgebra scalars =
        FdAlgebra::generate({CMat::identity(2)}, 2, FdAlgebra::kDefaultCap, kTol);
    GenFieldOfSets t = projections_to_sets(scalars, kTol);
    CHECK(t.ground_size == 1);
    CHECK(t.sets.size() == 2);

    FdAlgebra m2 = testalg::full_matrix_algebra(2);
    CHECK_THROWS_AS(projections_to_sets(m2, kTol), Error);
}

TEST_CASE("round trip reproduces the field up to relabeling") {
    Rng rng(41);
    for (int rep = 0; rep < 25; ++rep) {
        GenFieldOfSets s = random_field(rng, 6);
        REQUIRE(validate_field(s).is_field);
        FdAlgebra a = r_of_s(s, kTol);
        GenFieldOfSets back = projections_to_sets(a, kTol);
        CHECK(back.sets.size() == s.sets.size());
        CHECK(fields_isomorphic(s, back));
    }
}

TEST_CASE("unitality matches boolean-ness") {
    Rng rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        GenFieldOfSets s = random_field(rng, 5);
        const bool boolean = validate_field(s).is_boolean;
        FdAlgebra a = r_of_s(s, kTol);
        CHECK(a.unital() == boolean);
    }
}

TEST_CASE("spectral_resolution closed forms") {
    FdAlgebra d3 = testalg::diagonal_algebra(3);
    const CMat x = CMat::diag({5.0, 5.0, 2.0});
    auto res = spectral_resolution(d3, x, kTol);
    REQUIRE(res.size() == 2);
    CHECK(std::abs(res[0].first - Complex{2, 0}) < 1e-10);
    CHECK(distance_fro(res[0].second, CMat::diag({0.0, 0.0, 1.0})) < 1e-9);
    CHECK(std::abs(res[1].first - Complex{5, 0}) < 1e-10);
    CHECK(distance_fro(res[1].second, CMat::diag({1.0, 1.0, 0.0})) < 1e-9);

    // A projection resolves as [(1, p)].
    FdAlgebra m2 = testalg::full_matrix_algebra(2);
    CMat e11(2, 2);
    e11(0, 0) = 1.0;
    auto pres = spectral_resolution(m2, e11, kTol);
    REQUIRE(pres.size() == 1);
    CHECK(std::abs(pres[0].first - Complex{1, 0}) < 1e-10);
    CHECK(distance_fro(pres[0].second, e11) < 1e-9);
}

TEST_CASE("spectral_resolution of random members of commutative algebras") {
    Rng rng(43);
    for (int rep = 0; rep < 10; ++rep) {
        GenFieldOfSets s = random_field(rng, 6);
        FdAlgebra a = r_of_s(s, kTol);
        if (a.dim() == 0) continue;
        const CMat x = random_member(a, rng);
        auto res = spectral_resolution(a, x, kTol);
        CMat recon(a.ambient_dim(), a.ambient_dim());
        for (const auto& [z, p] : res) {
            CHECK(a.membership(p));
            recon += z * p;
        }
        CHECK(distance_fro(recon, x) < 1e-9 * std::max(1.0, x.norm_fro()));
        // Mutual orthogonality.
        for (std::size_t i = 0; i < res.size(); ++i)
            for (std::size_t j = i + 1; j < res.size(); ++j)
                CHECK((res[i].second * res[j].second).norm_fro() < 1e-8);
    }
    CHECK_THROWS_AS(
        spectral_resolution(testalg::diagonal_algebra(2), CMat::identity(3), kTol), Error);
}

TEST_CASE("lift_lattice_hom identity") {
    FdAlgebra d2 = testalg::diagonal_algebra(2);
    LatticeHomTable psi;
    for (std::uint32_t m = 0; m < 4; ++m) psi.emplace_back(m, m);
    const CMat phi = lift_lattice_hom(d2, d2, psi, kTol);
    CHECK(distance_fro(phi, CMat::identity(2)) < 1e-12);
}

TEST_CASE("lift_lattice_hom coordinate projection C^2 -> C") {
    FdAlgebra d2 = testalg::diagonal_algebra(2);
    FdAlgebra d1 = testalg::diagonal_algebra(1);
    // psi(e1) = 1, psi(e2) = 0: the lattice-consistent collapse.
    LatticeHomTable psi{{0b00, 0}, {0b01, 1}, {0b10, 0}, {0b11, 1}};
    const CMat phi = lift_lattice_hom(d2, d1, psi, kTol);
    REQUIRE(phi.rows() == 1);
    REQUIRE(phi.cols() == 2);
    CHECK(std::abs(phi(0, 0) - Complex{1, 0}) < 1e-12);
    CHECK(std::abs(phi(0, 1)) < 1e-12);
}

TEST_CASE("lift_lattice_hom doubling an atom into C^3") {
    FdAlgebra d2 = testalg::diagonal_algebra(2);
    FdAlgebra d3 = testalg::diagonal_algebra(3);
    // (x, y) -> (x, x, y): atom 1 -> {1,2}, atom 2 -> {3}.
    LatticeHomTable psi{{0b00, 0b000}, {0b01, 0b011}, {0b10, 0b100}, {0b11, 0b111}};
    const CMat phi = lift_lattice_hom(d2, d3, psi, kTol);
    CHECK(std::abs(phi(0, 0) - Complex{1, 0}) < 1e-12);
    CHECK(std::abs(phi(1, 0) - Complex{1, 0}) < 1e-12);
    CHECK(std::abs(phi(2, 1) - Complex{1, 0}) < 1e-12);
    CHECK(std::abs(phi(2, 0)) < 1e-12);
}

TEST_CASE("lift_lattice_hom error paths") {
    FdAlgebra d2 = testalg::diagonal_algebra(2);
    // Zero not preserved.
    LatticeHomTable bad0{{0b00, 0b01}, {0b01, 0b01}, {0b10, 0b10}, {0b11, 0b11}};
    CHECK_THROWS_AS(lift_lattice_hom(d2, d2, bad0, kTol), Error);
    // Join not preserved.
    LatticeHomTable badj{{0b00, 0b00}, {0b01, 0b01}, {0b10, 0b10}, {0b11, 0b01}};
    CHECK_THROWS_AS(lift_lattice_hom(d2, d2, badj, kTol), Error);
    // Incomplete table.
    LatticeHomTable part{{0b00, 0b00}, {0b01, 0b01}};
    CHECK_THROWS_AS(lift_lattice_hom(d2, d2, part, kTol), Error);
    // Noncommutative source.
    FdAlgebra m2 = testalg::full_matrix_algebra(2);
    LatticeHomTable id2{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(lift_lattice_hom(m2, d2, id2, kTol), Error);
}

TEST_CASE("composition of lifts is the lift of the composition") {
    FdAlgebra d2 = testalg::diagonal_algebra(2);
    FdAlgebra d3 = testalg::diagonal_algebra(3);
    LatticeHomTable psi1{{0b00, 0b000}, {0b01, 0b011}, {0b10, 0b100}, {0b11, 0b111}};
    // P(C^3) -> P(C^3): permutation of atoms (1 2 3) -> (2 3 1).
    LatticeHomTable psi2;
    for (std::uint32_t m = 0; m < 8; ++m) {
        std::uint32_t t = 0;
        if (m & 0b001) t |= 0b010;
        if (m & 0b010) t |= 0b100;
        if (m & 0b100) t |= 0b001;
        psi2.emplace_back(m, t);
    }
    const CMat f1 = lift_lattice_hom(d2, d3, psi1, kTol);
    const CMat f2 = lift_lattice_hom(d3, d3, psi2, kTol);

    // Compose the tables directly.
    LatticeHomTable composed;
    auto apply2 = [&](std::uint32_t m) {
        std::uint32_t t = 0;
        if (m & 0b001) t |= 0b010;
        if (m & 0b010) t |= 0b100;
        if (m & 0b100) t |= 0b001;
        return t;
    };
    const std::uint32_t images[4] = {0b000, 0b011, 0b100, 0b111};
    for (std::uint32_t m = 0; m < 4; ++m) composed.emplace_back(m, apply2(images[m]));
    const CMat fc = lift_lattice_hom(d2, d3, composed, kTol);
    CHECK(distance_fro(f2 * f1, fc) < 1e-12);
}

TEST_CASE("fields_isomorphic distinguishes cell structure") {
    GenFieldOfSets s1{3, {0b000, 0b001, 0b110, 0b111}};
    GenFieldOfSets s2{3, {0b000, 0b100, 0b011, 0b111}};
    CHECK(fields_isomorphic(s1, s2));
    GenFieldOfSets s3{3, {0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111}};
    CHECK_FALSE(fields_isomorphic(s1, s3));
}
