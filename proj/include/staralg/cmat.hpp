#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include "staralg/errors.hpp"

namespace staralg {

using Complex = std::complex<double>;

// Absolute / relative / eigenvalue-clustering thresholds used across all
// floating-point operations. cluster >= abs is expected.
struct Tolerance {
    double abs = 1e-10;
    double rel = 1e-9;
    double cluster = 1e-7;
};

// Dense complex matrix, row-major. The one operator representation used
// everywhere: elements of matrix algebras, projections, partial isometries.
class CMat {
public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}
    CMat(std::size_t rows, std::size_t cols, std::vector<Complex> data);
    CMat(std::initializer_list<std::initializer_list<Complex>> rows);

    static CMat identity(std::size_t n);
    static CMat zero(std::size_t rows, std::size_t cols) { return CMat(rows, cols); }
    static CMat diag(const std::vector<Complex>& d);
    static CMat scalar(std::size_t n, Complex z);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    CMat adjoint() const;
    CMat transpose() const;
    CMat conj() const;

    CMat operator+(const CMat& o) const;
    CMat operator-(const CMat& o) const;
    CMat operator*(const CMat& o) const;
    CMat operator*(Complex z) const;
    CMat operator-() const;
    CMat& operator+=(const CMat& o);
    CMat& operator-=(const CMat& o);

    Complex trace() const;
    double norm_fro() const;
    double max_abs() const;

    // Hilbert-Schmidt inner product tr(b^* a) with *this as a.
    Complex hs_inner(const CMat& b) const;

    CMat submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    CMat column(std::size_t c) const;
    void set_column(std::size_t c, const CMat& col);
    static CMat hcat(const std::vector<CMat>& blocks);

    bool all_finite() const;
    void require_finite(const std::string& where) const;

    std::string to_string(int precision = 4) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline CMat operator*(Complex z, const CMat& m) { return m * z; }
inline CMat operator*(double z, const CMat& m) { return m * Complex{z, 0.0}; }

double distance_fro(const CMat& a, const CMat& b);

// ||a - a^*||_F <= tol.rel * max(1, ||a||_F)
bool is_hermitian(const CMat& a, const Tolerance& tol);
// ||x x^* - x^* x||_F <= tol.rel * max(1, ||x||_F^2)
bool is_normal(const CMat& x, const Tolerance& tol);
// p = p^2 = p^* within tol
bool is_projection_matrix(const CMat& p, const Tolerance& tol);

} // namespace staralg
