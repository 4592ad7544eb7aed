#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "staralg/fdalg.hpp"

namespace staralg {

using BigInt = boost::multiprecision::cpp_int;

// Dense integer matrix for incidence and intertwining data. All K-theory
// arithmetic in this module is exact.
struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<BigInt> data;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    BigInt& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const BigInt& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    static IntMatrix identity(std::size_t n);
    IntMatrix operator*(const IntMatrix& o) const;
    std::vector<BigInt> apply(const std::vector<BigInt>& v) const;
    bool operator==(const IntMatrix&) const = default;

    bool nonnegative() const;
    bool has_zero_row() const;
    bool has_zero_column() const;
    // Rank over the rationals equals the column count.
    bool injective() const;
};

// Finite presentation of a Bratteli diagram: explicit prefix levels plus an
// optional eventually-periodic tail. Tail levels take sizes
// s^n = E^n s^{n-1} exactly, so nonunital diagrams need their irregular
// levels inside the prefix.
struct BratteliDiagram {
    bool unital = true;
    std::vector<std::vector<BigInt>> prefix_sizes;  // s^0, s^1, ...
    std::vector<IntMatrix> prefix_maps;             // E^1, ..., E^k
    std::vector<IntMatrix> tail_maps;               // repeated forever; may be empty

    bool finite() const { return tail_maps.empty(); }
    std::size_t prefix_levels() const { return prefix_sizes.size(); }
    // Largest addressable level: prefix end for finite diagrams, unbounded
    // otherwise.
    std::optional<std::size_t> last_level() const;

    // E^n mapping level n-1 to level n (1-based in n).
    const IntMatrix& map_at(std::size_t n) const;
    std::vector<BigInt> sizes_at(std::size_t level) const;

    void validate() const;

    static BratteliDiagram uhf(const std::vector<std::uint64_t>& period);
};

// Compose k consecutive incidence steps into one.
BratteliDiagram telescope(const BratteliDiagram& d, std::size_t k);

struct DimGroupElt {
    std::size_t level = 0;
    std::vector<BigInt> vector;

    bool operator==(const DimGroupElt&) const = default;
};

enum class K0Status {
    Equal,
    NotEqual,
    Positive,
    NotPositive,
    InScale,
    NotInScale,
    Inconclusive,
};

const char* k0_status_name(K0Status s);

struct K0Verdict {
    K0Status status = K0Status::Inconclusive;
    std::size_t depth_used = 0;
    std::string certificate;
};

DimGroupElt push(const BratteliDiagram& d, const DimGroupElt& e, std::size_t to_level);

K0Verdict k0_equal(const BratteliDiagram& d, const DimGroupElt& e1, const DimGroupElt& e2,
                   std::size_t depth);
K0Verdict k0_positive(const BratteliDiagram& d, const DimGroupElt& e, std::size_t depth);
// Requires a Positive verdict first; throws ElementNotPositive when the
// element is provably not positive.
K0Verdict in_scale(const BratteliDiagram& d, const DimGroupElt& e, std::size_t depth);

struct PrimeMultiplicity {
    std::uint64_t multiplicity = 0;
    bool saturated = false;  // the periodic tail contributes no further factor
};

// Prime factorization of the composed incidence product of a single-vertex
// diagram, truncated at depth.
std::map<std::uint64_t, PrimeMultiplicity> supernatural(const BratteliDiagram& d,
                                                        std::size_t depth);

enum class CompareStatus { Isomorphic, Distinguished, Inconclusive };

struct IntertwiningStep {
    std::size_t from_level = 0;  // level in the source diagram
    std::size_t to_level = 0;    // level in the target diagram
    IntMatrix matrix;
};

struct CompareVerdict {
    CompareStatus status = CompareStatus::Inconclusive;
    std::string invariant;  // set when Distinguished
    std::size_t depth_used = 0;
    // Alternating maps D1 -> D2 -> D1 -> ... forming commuting triangles.
    std::vector<IntertwiningStep> forward;   // F_i
    std::vector<IntertwiningStep> backward;  // G_i
};

// Bounded comparison: Isomorphic only with a verified (periodically
// extendable) intertwining, Distinguished only on sound invariants,
// otherwise honest Inconclusive.
CompareVerdict compare_af(const BratteliDiagram& d1, const BratteliDiagram& d2,
                          std::size_t depth, std::size_t budget = 1000000);

struct DimSemigroupInfo {
    std::vector<std::size_t> block_sizes;
    std::vector<RankVector> classes;
    // classes index or -1 when the sum is undefined; emitted only when the
    // class count is at most 4096.
    std::vector<std::vector<std::ptrdiff_t>> addition_table;
};

DimSemigroupInfo dim_semigroup(const FdAlgebra& a);

} // namespace staralg
