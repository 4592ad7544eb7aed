#include "staralg/opcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace staralg {

namespace {

constexpr Complex kI{0.0, 1.0};

double spectral_scale(const std::vector<Complex>& values) {
    double s = 0.0;
    for (const auto& z : values) s = std::max(s, std::abs(z));
    return s;
}

// Single-linkage clusters of complex points within the given radius.
// Returns, per cluster, the member indices; clusters ordered by (re, im)
// of their mean.
std::vector<std::vector<std::size_t>> cluster_points(const std::vector<Complex>& pts,
                                                     double radius) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(pts[i] - pts[j]) <= radius) parent[find(i)] = find(j);

    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::ptrdiff_t> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<std::ptrdiff_t>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(slot[root])].push_back(i);
    }
    auto mean = [&](const std::vector<std::size_t>& g) {
        Complex m{0.0, 0.0};
        for (auto i : g) m += pts[i];
        return m / static_cast<double>(g.size());
    };
    std::sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
        const Complex ma = mean(a), mb = mean(b);
        if (ma.real() != mb.real()) return ma.real() < mb.real();
        return ma.imag() < mb.imag();
    });
    return groups;
}

struct ClusteredSpectrum {
    std::vector<Complex> reps;                       // cluster means
    std::vector<std::vector<std::size_t>> members;   // eigenvector column indices
    bool merged = false;
};

ClusteredSpectrum cluster_spectrum(const NormalEig& eig, const Tolerance& tol) {
    const double radius = tol.cluster * std::max(1.0, spectral_scale(eig.values));
    ClusteredSpectrum out;
    out.members = cluster_points(eig.values, radius);
    const double merge_floor = tol.abs * std::max(1.0, spectral_scale(eig.values));
    for (const auto& g : out.members) {
        Complex m{0.0, 0.0};
        double diameter = 0.0;
        for (auto i : g) m += eig.values[i];
        m /= static_cast<double>(g.size());
        for (auto i : g)
            for (auto j : g) diameter = std::max(diameter, std::abs(eig.values[i] - eig.values[j]));
        if (diameter > merge_floor) out.merged = true;
        out.reps.push_back(m);
    }
    return out;
}

} // namespace

NormalEig normal_eig(const CMat& x, const Tolerance& tol) {
    if (!x.is_square())
        throw Error(ErrorCode::NotNormal, "matrix is not square");
    const std::size_t n = x.rows();
    if (n == 0) return NormalEig{{}, CMat(0, 0)};
    if (!is_normal(x, tol))
        throw Error(ErrorCode::NotNormal, "commutator ||xx* - x*x|| exceeds tolerance");

    const CMat h = (x + x.adjoint()) * Complex{0.5, 0.0};
    const CMat k = (x - x.adjoint()) * (Complex{0.5, 0.0} / kI);

    EigDecomp eh = herm_eig(h, tol);
    CMat u = eh.vectors;
    CMat kp = u.adjoint() * k * u;

    // Exact eigenspaces of h admit further rotation; diagonalize the
    // compression of k inside each nearly-degenerate group.
    const double hscale = std::max(1.0, h.norm_fro());
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && eh.values[end] - eh.values[end - 1] <= tol.abs * hscale) ++end;
        const std::size_t len = end - start;
        if (len > 1) {
            CMat block(len, len);
            for (std::size_t i = 0; i < len; ++i)
                for (std::size_t j = 0; j < len; ++j) block(i, j) = kp(start + i, start + j);
            EigDecomp eb = herm_eig((block + block.adjoint()) * Complex{0.5, 0.0}, tol);
            // Rotate the group's columns of u.
            CMat cols(n, len);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < len; ++j) cols(i, j) = u(i, start + j);
            const CMat rotated = cols * eb.vectors;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < len; ++j) u(i, start + j) = rotated(i, j);
        }
        start = end;
    }

    const CMat d = u.adjoint() * x * u;
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) off += std::norm(d(i, j));
    if (std::sqrt(off) > tol.rel * std::max(1.0, x.norm_fro()) * 10.0)
        throw Error(ErrorCode::NotNormal, "joint diagonalization residual too large");

    NormalEig out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = d(i, i);

    // Deterministic column order: (re, im) ascending.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const Complex a = out.values[i], b = out.values[j];
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    NormalEig sorted;
    sorted.values.resize(n);
    sorted.vectors = CMat(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        sorted.values[c] = out.values[order[c]];
        for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, c) = u(i, order[c]);
    }
    return sorted;
}

SpectrumReport spectrum(const CMat& x, const Tolerance& tol) {
    NormalEig eig = normal_eig(x, tol);
    ClusteredSpectrum cs = cluster_spectrum(eig, tol);
    SpectrumReport out;
    out.clustered = cs.merged;
    for (std::size_t k = 0; k < cs.reps.size(); ++k)
        out.points.emplace_back(cs.reps[k], cs.members[k].size());
    return out;
}

CMat borel_calc(const CMat& x, const FnTable& table, bool unital, const Tolerance& tol) {
    NormalEig eig = normal_eig(x, tol);
    const std::size_t n = x.rows();
    if (n == 0) return CMat(0, 0);
    ClusteredSpectrum cs = cluster_spectrum(eig, tol);
    const double radius = tol.cluster * std::max(1.0, spectral_scale(eig.values));

    std::vector<Complex> fvals(cs.reps.size());
    for (std::size_t k = 0; k < cs.reps.size(); ++k) {
        double best = radius;
        bool found = false;
        for (const auto& [at, val] : table) {
            const double d = std::abs(at - cs.reps[k]);
            if (d <= best) {
                best = d;
                fvals[k] = val;
                found = true;
            }
        }
        if (!found)
            throw Error(ErrorCode::UndefinedOnSpectrum,
                        "no table entry near spectrum point " + std::to_string(cs.reps[k].real()));
        if (!unital && std::abs(cs.reps[k]) <= radius && std::abs(fvals[k]) > tol.abs)
            throw Error(ErrorCode::NonunitalViolation, "f(0) must vanish in a nonunital algebra");
    }

    CMat out(n, n);
    for (std::size_t k = 0; k < cs.reps.size(); ++k) {
        if (fvals[k] == Complex{0.0, 0.0}) continue;
        for (auto col : cs.members[k]) {
            const CMat uc = eig.vectors.column(col);
            out += fvals[k] * (uc * uc.adjoint());
        }
    }
    return out;
}

CMat borel_apply(const CMat& x, const std::function<Complex(Complex)>& fn, bool unital,
                 const Tolerance& tol) {
    NormalEig eig = normal_eig(x, tol);
    ClusteredSpectrum cs = cluster_spectrum(eig, tol);
    FnTable table;
    for (const auto& z : cs.reps) table.emplace_back(z, fn(z));
    return borel_calc(x, table, unital, tol);
}

PolarParts polar(const CMat& x, const Tolerance& tol) {
    SvdResult d = svd(x, tol);
    const std::size_t m = x.rows(), n = x.cols(), k = d.s.size();
    const double smax = d.s.empty() ? 0.0 : d.s.front();
    const double cutoff = std::max(tol.abs, tol.cluster * smax);

    CMat v(m, n);
    CMat absx(n, n);
    for (std::size_t j = 0; j < k; ++j) {
        const CMat vc = d.v.column(j);
        if (d.s[j] > cutoff) {
            const CMat uc = d.u.column(j);
            v += uc * vc.adjoint();
        }
        absx += Complex{d.s[j], 0.0} * (vc * vc.adjoint());
    }
    return PolarParts{std::move(v), std::move(absx)};
}

std::pair<CMat, CMat> supports(const CMat& x, const Tolerance& tol) {
    PolarParts p = polar(x, tol);
    return {p.v * p.v.adjoint(), p.v.adjoint() * p.v};
}

CMat pinv(const CMat& x, const Tolerance& tol) {
    SvdResult d = svd(x, tol);
    const double smax = d.s.empty() ? 0.0 : d.s.front();
    const double cutoff = std::max(tol.abs, tol.cluster * smax);
    CMat out(x.cols(), x.rows());
    for (std::size_t j = 0; j < d.s.size(); ++j) {
        if (d.s[j] <= cutoff) break;
        out += Complex{1.0 / d.s[j], 0.0} * (d.v.column(j) * d.u.column(j).adjoint());
    }
    return out;
}

CMat regular_witness(const CMat& x, const Tolerance& tol) { return pinv(x, tol); }

std::pair<CMat, CMat> pos_neg_parts(const CMat& a, const Tolerance& tol) {
    if (!is_hermitian(a, tol))
        throw Error(ErrorCode::NotSelfAdjoint, "pos_neg_parts needs a self-adjoint input");
    EigDecomp eig = herm_eig(a, tol);
    const std::size_t n = a.rows();
    CMat plus(n, n), minus(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lam = eig.values[j];
        if (lam == 0.0) continue;
        const CMat uc = eig.vectors.column(j);
        if (lam > 0.0)
            plus += Complex{lam, 0.0} * (uc * uc.adjoint());
        else
            minus += Complex{-lam, 0.0} * (uc * uc.adjoint());
    }
    return {plus, minus};
}

CMat unit_regular_witness(const CMat& x, const Tolerance& tol) {
    if (!x.is_square())
        throw Error(ErrorCode::BadInput, "unit_regular_witness needs a square matrix");
    SvdResult d = svd(x, tol);
    const std::size_t n = x.rows();
    const double smax = d.s.empty() ? 0.0 : d.s.front();
    const double cutoff = std::max(tol.abs, tol.cluster * smax);
    std::size_t r = 0;
    while (r < d.s.size() && d.s[r] > cutoff) ++r;

    CMat y = pinv(x, tol);
    // Partial isometry ker(x) -> ker(x*) matched in index order.
    for (std::size_t j = r; j < n; ++j)
        y += d.v.column(j) * d.u.column(j).adjoint();
    return y;
}

} // namespace staralg
