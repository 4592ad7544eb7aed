#include "staralg/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace staralg {

namespace {

// Off-diagonal Frobenius norm.
double off_diag_norm(const CMat& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Lexicographic comparison of eigenvector columns on (re, im) pairs.
bool column_less(const CMat& m, std::size_t c1, std::size_t c2) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const Complex a = m(i, c1), b = m(i, c2);
        if (a.real() != b.real()) return a.real() < b.real();
        if (a.imag() != b.imag()) return a.imag() < b.imag();
    }
    return false;
}

// Rotate each column so its largest-magnitude entry is real positive.
void fix_phases(CMat& u) {
    for (std::size_t c = 0; c < u.cols(); ++c) {
        std::size_t best = 0;
        double best_abs = 0.0;
        for (std::size_t i = 0; i < u.rows(); ++i) {
            const double a = std::abs(u(i, c));
            if (a > best_abs + 1e-14) {
                best_abs = a;
                best = i;
            }
        }
        if (best_abs <= 0.0) continue;
        const Complex phase = std::conj(u(best, c)) / best_abs;
        for (std::size_t i = 0; i < u.rows(); ++i) u(i, c) *= phase;
    }
}

} // namespace

EigDecomp herm_eig(const CMat& a, const Tolerance& tol) {
    if (!a.is_square())
        throw Error(ErrorCode::NotHermitian, "matrix is not square");
    const std::size_t n = a.rows();
    if (n == 0) return EigDecomp{{}, CMat(0, 0)};
    if (!is_hermitian(a, tol))
        throw Error(ErrorCode::NotHermitian, "||a - a*|| exceeds tolerance");

    // Work on the symmetrized copy so roundoff in the input cannot bias sweeps.
    CMat m = (a + a.adjoint()) * Complex{0.5, 0.0};
    CMat u = CMat::identity(n);
    const double scale = m.norm_fro();
    const double threshold = 1e-13 * std::max(scale, 1e-300);

    constexpr int kMaxSweeps = 100;
    bool converged = scale == 0.0 || n == 1;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = m(p, q);
                const double g = std::abs(apq);
                if (g <= threshold / static_cast<double>(n)) continue;
                const double app = m(p, p).real();
                const double aqq = m(q, q).real();
                // Phase factor folding a_pq to a real coupling.
                const Complex phase = apq / g;
                const double tau = (aqq - app) / (2.0 * g);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex sp = s * phase;

                // Columns: [p q] <- [p q] * [[c, sp],[-conj(sp)... ]] built so
                // that the (p,q) entry annihilates.
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex mip = m(i, p), miq = m(i, q);
                    m(i, p) = c * mip - std::conj(sp) * miq;
                    m(i, q) = sp * mip + c * miq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex mpj = m(p, j), mqj = m(q, j);
                    m(p, j) = c * mpj - sp * mqj;
                    m(q, j) = std::conj(sp) * mpj + c * mqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex uip = u(i, p), uiq = u(i, q);
                    u(i, p) = c * uip - std::conj(sp) * uiq;
                    u(i, q) = sp * uip + c * uiq;
                }
                m(p, q) = Complex{0.0, 0.0};
                m(q, p) = Complex{0.0, 0.0};
                m(p, p) = Complex{m(p, p).real(), 0.0};
                m(q, q) = Complex{m(q, q).real(), 0.0};
            }
        }
        if (off_diag_norm(m) <= threshold) converged = true;
    }
    if (!converged)
        throw Error(ErrorCode::DidNotConverge, "Jacobi sweep cap reached");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    fix_phases(u);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const double vi = m(i, i).real(), vj = m(j, j).real();
        if (vi != vj) return vi < vj;
        return column_less(u, i, j);
    });

    EigDecomp out;
    out.values.resize(n);
    out.vectors = CMat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = m(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = u(i, order[k]);
    }
    return out;
}

namespace {

// Orthonormal completion: extend the columns of u (orthonormal, possibly
// none) to `want` columns. Greedy: at each step append the standard basis
// vector with the largest residual against the current columns.
void complete_basis(CMat& u, std::size_t have, std::size_t want) {
    const std::size_t n = u.rows();
    auto residual = [&](std::size_t e, std::size_t ncols) {
        CMat v(n, 1);
        v(e, 0) = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t c = 0; c < ncols; ++c) {
                Complex ip{0.0, 0.0};
                for (std::size_t i = 0; i < n; ++i) ip += std::conj(u(i, c)) * v(i, 0);
                for (std::size_t i = 0; i < n; ++i) v(i, 0) -= ip * u(i, c);
            }
        }
        return v;
    };
    for (std::size_t next = have; next < want; ++next) {
        std::size_t best = 0;
        double best_norm = -1.0;
        for (std::size_t e = 0; e < n; ++e) {
            const double nv = residual(e, next).norm_fro();
            if (nv > best_norm + 1e-14) {
                best_norm = nv;
                best = e;
            }
        }
        CMat v = residual(best, next);
        const double nv = v.norm_fro();
        for (std::size_t i = 0; i < n; ++i) u(i, next) = v(i, 0) / nv;
    }
}

} // namespace

SvdResult svd(const CMat& x, const Tolerance& tol) {
    const std::size_t m = x.rows(), n = x.cols();
    if (m == 0 || n == 0)
        return SvdResult{CMat(m, 0), {}, CMat(n, 0)};
    if (m < n) {
        SvdResult t = svd(x.adjoint(), tol);
        return SvdResult{std::move(t.v), std::move(t.s), std::move(t.u)};
    }

    const CMat gram = x.adjoint() * x;
    EigDecomp eig = herm_eig(gram, tol);

    // Descending singular values.
    const std::size_t k = n;
    SvdResult out;
    out.s.resize(k);
    out.v = CMat(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t src = k - 1 - j;
        out.s[j] = std::sqrt(std::max(0.0, eig.values[src]));
        for (std::size_t i = 0; i < n; ++i) out.v(i, j) = eig.vectors(i, src);
    }

    const double smax = out.s.empty() ? 0.0 : out.s.front();
    const double cutoff = std::max(tol.abs, tol.cluster * smax);
    out.u = CMat(m, k);
    std::size_t r = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (out.s[j] <= cutoff) break;
        const CMat xv = x * out.v.column(j);
        const double nv = xv.norm_fro();
        for (std::size_t i = 0; i < m; ++i) out.u(i, j) = xv(i, 0) / nv;
        ++r;
    }
    complete_basis(out.u, r, k);
    return out;
}

std::size_t rank(const CMat& x, const Tolerance& tol) {
    if (x.rows() == 0 || x.cols() == 0) return 0;
    SvdResult d = svd(x, tol);
    const double smax = d.s.empty() ? 0.0 : d.s.front();
    const double cutoff = std::max(tol.abs, tol.cluster * smax);
    std::size_t r = 0;
    for (double s : d.s)
        if (s > cutoff) ++r;
    return r;
}

CMat orth_span(const std::vector<CMat>& columns, const Tolerance& tol) {
    if (columns.empty()) return CMat(0, 0);
    const CMat cat = CMat::hcat(columns);
    if (cat.rows() == 0) return CMat(0, 0);
    SvdResult d = svd(cat, tol);
    const double smax = d.s.empty() ? 0.0 : d.s.front();
    const double cutoff = std::max(tol.abs, tol.cluster * smax);
    std::size_t r = 0;
    for (double s : d.s)
        if (s > cutoff) ++r;
    return d.u.submatrix(0, 0, cat.rows(), r);
}

double op_norm(const CMat& x, const Tolerance& tol) {
    if (x.rows() == 0 || x.cols() == 0) return 0.0;
    SvdResult d = svd(x, tol);
    return d.s.empty() ? 0.0 : d.s.front();
}

} // namespace staralg
