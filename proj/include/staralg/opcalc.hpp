#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "staralg/numlin.hpp"

namespace staralg {

// Clustered eigenvalue list of a normal operator. Multiplicities sum to the
// matrix dimension; distinct points are separated by more than the cluster
// radius.
struct SpectrumReport {
    std::vector<std::pair<Complex, std::size_t>> points;
    bool clustered = false;
};

// x = v * absx with v a partial isometry, absx = (x^* x)^{1/2},
// v v^* = l(x), v^* v = r(x).
struct PolarParts {
    CMat v;
    CMat absx;
};

// Diagonalization of a normal operator: x = vectors * diag(values) * vectors^*.
struct NormalEig {
    std::vector<Complex> values;
    CMat vectors;
};

// Joint diagonalization through the Hermitian solver on real/imaginary parts.
// Throws NotNormal when the commutator test fails.
NormalEig normal_eig(const CMat& x, const Tolerance& tol);

SpectrumReport spectrum(const CMat& x, const Tolerance& tol);

using FnTable = std::vector<std::pair<Complex, Complex>>;

// f applied to normal x through its spectral projections. The table must
// cover every clustered spectrum point; when unital is false and 0 lies in
// the spectrum, f(0) must vanish.
CMat borel_calc(const CMat& x, const FnTable& table, bool unital, const Tolerance& tol);

// Convenience: evaluate fn on each clustered spectrum point, then delegate.
CMat borel_apply(const CMat& x, const std::function<Complex(Complex)>& fn, bool unital,
                 const Tolerance& tol);

PolarParts polar(const CMat& x, const Tolerance& tol);

// (l(x), r(x)) from the polar isometry.
std::pair<CMat, CMat> supports(const CMat& x, const Tolerance& tol);

CMat pinv(const CMat& x, const Tolerance& tol);

// y with x y x = x (the Moore-Penrose inverse).
CMat regular_witness(const CMat& x, const Tolerance& tol);

// a = aplus - aminus, both positive, aplus * aminus = 0.
std::pair<CMat, CMat> pos_neg_parts(const CMat& a, const Tolerance& tol);

// Invertible y with x y x = x, built as pinv(x) + v^* where v matches the
// kernels of x^* and x.
CMat unit_regular_witness(const CMat& x, const Tolerance& tol);

} // namespace staralg
