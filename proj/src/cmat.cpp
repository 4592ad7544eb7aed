#include "staralg/cmat.hpp"

#include <cmath>
#include <sstream>

namespace staralg {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::DidNotConverge: return "DidNotConverge";
        case ErrorCode::NotNormal: return "NotNormal";
        case ErrorCode::UndefinedOnSpectrum: return "UndefinedOnSpectrum";
        case ErrorCode::NonunitalViolation: return "NonunitalViolation";
        case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::NonSquareGenerator: return "NonSquareGenerator";
        case ErrorCode::DecompositionFailed: return "DecompositionFailed";
        case ErrorCode::NotAProjection: return "NotAProjection";
        case ErrorCode::NotAMember: return "NotAMember";
        case ErrorCode::NonUnitalAlgebra: return "NonUnitalAlgebra";
        case ErrorCode::NotEquivalent: return "NotEquivalent";
        case ErrorCode::StepCountTooSmall: return "StepCountTooSmall";
        case ErrorCode::NotAField: return "NotAField";
        case ErrorCode::NotCommutative: return "NotCommutative";
        case ErrorCode::NotALatticeHom: return "NotALatticeHom";
        case ErrorCode::ZeroNotPreserved: return "ZeroNotPreserved";
        case ErrorCode::InconsistentExtension: return "InconsistentExtension";
        case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
        case ErrorCode::ElementNotPositive: return "ElementNotPositive";
        case ErrorCode::NotUHFShape: return "NotUHFShape";
        case ErrorCode::InconsistentMeasure: return "InconsistentMeasure";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::InconsistentMap: return "InconsistentMap";
        case ErrorCode::NotJordan: return "NotJordan";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

CMat::CMat(std::size_t rows, std::size_t cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw Error(ErrorCode::BadInput, "entry count does not match rows*cols");
}

CMat::CMat(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw Error(ErrorCode::BadInput, "ragged initializer");
        for (const auto& z : r) data_.push_back(z);
    }
}

CMat CMat::identity(std::size_t n) {
    CMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::diag(const std::vector<Complex>& d) {
    CMat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMat CMat::scalar(std::size_t n, Complex z) {
    CMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = z;
    return m;
}

CMat CMat::adjoint() const {
    CMat m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

CMat CMat::transpose() const {
    CMat m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

CMat CMat::conj() const {
    CMat m(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = std::conj(data_[i]);
    return m;
}

CMat CMat::operator+(const CMat& o) const {
    CMat m = *this;
    m += o;
    return m;
}

CMat CMat::operator-(const CMat& o) const {
    CMat m = *this;
    m -= o;
    return m;
}

CMat& CMat::operator+=(const CMat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw Error(ErrorCode::BadInput, "shape mismatch in +");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

CMat& CMat::operator-=(const CMat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw Error(ErrorCode::BadInput, "shape mismatch in -");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

CMat CMat::operator*(const CMat& o) const {
    if (cols_ != o.rows_)
        throw Error(ErrorCode::BadInput, "shape mismatch in *");
    CMat m(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex a = (*this)(i, k);
            if (a == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) m(i, j) += a * o(k, j);
        }
    }
    return m;
}

CMat CMat::operator*(Complex z) const {
    CMat m = *this;
    for (auto& e : m.data_) e *= z;
    return m;
}

CMat CMat::operator-() const { return (*this) * Complex{-1.0, 0.0}; }

Complex CMat::trace() const {
    Complex t{0.0, 0.0};
    const std::size_t n = std::min(rows_, cols_);
    for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
}

double CMat::norm_fro() const {
    double s = 0.0;
    for (const auto& e : data_) s += std::norm(e);
    return std::sqrt(s);
}

double CMat::max_abs() const {
    double s = 0.0;
    for (const auto& e : data_) s = std::max(s, std::abs(e));
    return s;
}

Complex CMat::hs_inner(const CMat& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
        throw Error(ErrorCode::BadInput, "shape mismatch in hs_inner");
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < data_.size(); ++i) t += data_[i] * std::conj(b.data_[i]);
    return t;
}

CMat CMat::submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    CMat m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
}

CMat CMat::column(std::size_t c) const { return submatrix(0, c, rows_, 1); }

void CMat::set_column(std::size_t c, const CMat& col) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = col(i, 0);
}

CMat CMat::hcat(const std::vector<CMat>& blocks) {
    if (blocks.empty()) return CMat();
    std::size_t rows = blocks.front().rows();
    std::size_t cols = 0;
    for (const auto& b : blocks) {
        if (b.rows() != rows)
            throw Error(ErrorCode::BadInput, "row mismatch in hcat");
        cols += b.cols();
    }
    CMat m(rows, cols);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) m(i, off + j) = b(i, j);
        off += b.cols();
    }
    return m;
}

bool CMat::all_finite() const {
    for (const auto& e : data_)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    return true;
}

void CMat::require_finite(const std::string& where) const {
    if (!all_finite())
        throw Error(ErrorCode::BadInput, "non-finite entry in " + where);
}

std::string CMat::to_string(int precision) const {
    std::ostringstream os;
    os.precision(precision);
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (std::size_t j = 0; j < cols_; ++j) {
            const Complex z = (*this)(i, j);
            os << "(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
            if (j + 1 < cols_) os << " ";
        }
        os << (i + 1 == rows_ ? "]" : "\n");
    }
    return os.str();
}

double distance_fro(const CMat& a, const CMat& b) { return (a - b).norm_fro(); }

bool is_hermitian(const CMat& a, const Tolerance& tol) {
    if (!a.is_square()) return false;
    if (a.empty()) return true;
    return distance_fro(a, a.adjoint()) <= tol.rel * std::max(1.0, a.norm_fro());
}

bool is_normal(const CMat& x, const Tolerance& tol) {
    if (!x.is_square()) return false;
    if (x.empty()) return true;
    const double n = x.norm_fro();
    return distance_fro(x * x.adjoint(), x.adjoint() * x) <= tol.rel * std::max(1.0, n * n);
}

bool is_projection_matrix(const CMat& p, const Tolerance& tol) {
    if (!p.is_square()) return false;
    if (p.empty()) return true;
    const double scale = std::max(1.0, p.norm_fro());
    return distance_fro(p, p.adjoint()) <= tol.rel * scale &&
           distance_fro(p * p, p) <= tol.rel * scale;
}

} // namespace staralg
