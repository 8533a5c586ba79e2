#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpole/error.hpp"
#include "qpole/quaternion.hpp"

namespace qpole {

/// Relative pivot threshold used by elimination when the caller does not pass one.
inline constexpr double kDefaultPivotRelTol = 1e-12;

template<typename Scalar>
struct ScalarTraits;

template<>
struct ScalarTraits<Quaternion> {
    static double magnitude(const Quaternion& q) { return abs(q); }
    static Quaternion inverse(const Quaternion& q) { return inv(q); }
    static Quaternion conjugate(const Quaternion& q) { return conj(q); }
    static Quaternion one() { return Quaternion{1.0}; }
};

template<>
struct ScalarTraits<std::complex<double>> {
    static double magnitude(const std::complex<double>& c) { return std::abs(c); }
    static std::complex<double> inverse(const std::complex<double>& c) {
        if (c == 0.0) throw DomainError("complex inverse of zero");
        return 1.0 / c;
    }
    static std::complex<double> conjugate(const std::complex<double>& c) { return std::conj(c); }
    static std::complex<double> one() { return 1.0; }
};

/**
 * @brief Dense row-major matrix over a (possibly noncommutative) ring.
 *
 * Column vectors form a right module: a linear combination of columns puts
 * the coefficients on the right, and the product (M·N)(i,j) is the
 * left-to-right sum of M(i,k)·N(k,j).
 */
template<typename Scalar>
class Matrix {
public:
    using value_type = Scalar;
    using Traits = ScalarTraits<Scalar>;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<Scalar>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Traits::one();
        return m;
    }
    /// Column vector from entries.
    static Matrix column(std::span<const Scalar> entries) {
        Matrix m(entries.size(), 1);
        std::copy(entries.begin(), entries.end(), m.data_.begin());
        return m;
    }
    /// Row vector from entries.
    static Matrix row_vector(std::span<const Scalar> entries) {
        Matrix m(1, entries.size());
        std::copy(entries.begin(), entries.end(), m.data_.begin());
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<Scalar> entries() noexcept { return data_; }
    std::span<const Scalar> entries() const noexcept { return data_; }

    Matrix row(std::size_t i) const {
        return row_vector(std::span<const Scalar>(data_).subspan(i * cols_, cols_));
    }
    Matrix col(std::size_t j) const {
        Matrix c(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
        return c;
    }
    void set_row(std::size_t i, const Matrix& r) {
        if (r.rows_ != 1 || r.cols_ != cols_) throw DimensionError("set_row: shape mismatch");
        std::copy(r.data_.begin(), r.data_.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    }
    void set_col(std::size_t j, const Matrix& c) {
        if (c.cols_ != 1 || c.rows_ != rows_) throw DimensionError("set_col: shape mismatch");
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c(i, 0);
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>(b * cols_));
    }

    /// M* = entrywise conjugate of the transpose.
    Matrix adjoint() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = Traits::conjugate((*this)(i, j));
        return t;
    }
    /// Plain transpose. Over H this does not reverse products.
    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Largest entry magnitude.
    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, Traits::magnitude(v));
        return m;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o, "addition");
        for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o, "subtraction");
        for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a) {
        for (auto& v : a.data_) v = -v;
        return a;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) {
            throw DimensionError("matmul: " + shape(a) + " times " + shape(b));
        }
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Scalar& aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        }
        return out;
    }

    /// Scalar multiplying every entry from the left.
    friend Matrix operator*(const Scalar& s, Matrix m) {
        for (auto& v : m.data_) v = s * v;
        return m;
    }
    /// Scalar multiplying every entry from the right.
    friend Matrix operator*(Matrix m, const Scalar& s) {
        for (auto& v : m.data_) v = v * s;
        return m;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

    static std::string shape(const Matrix& m) {
        return std::to_string(m.rows_) + "x" + std::to_string(m.cols_);
    }

private:
    void check_same_shape(const Matrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw DimensionError(std::string(op) + ": " + shape(*this) + " vs " + shape(o));
        }
    }

    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<Scalar> data_;
};

using QMatrix = Matrix<Quaternion>;
using CMatrix = Matrix<std::complex<double>>;

/// Largest entrywise difference magnitude; shapes must agree.
template<typename Scalar>
double max_abs_diff(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
    return (a - b).max_abs();
}

/// Rank by row reduction with complete pivoting.
///
/// Row operations are left multiplications, so they preserve every right
/// linear relation between columns; the count of pivots is the number of
/// right-independent columns. Entries below pivot_rel_tol · max|M| count as zero.
template<typename Scalar>
std::size_t rank(Matrix<Scalar> m, double pivot_rel_tol = kDefaultPivotRelTol) {
    using Traits = ScalarTraits<Scalar>;
    const double threshold = pivot_rel_tol * m.max_abs();
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::vector<std::size_t> col_order(cols);
    for (std::size_t j = 0; j < cols; ++j) col_order[j] = j;

    std::size_t r = 0;
    while (r < std::min(rows, cols)) {
        double best = -1.0;
        std::size_t pr = r, pc = r;
        for (std::size_t i = r; i < rows; ++i) {
            for (std::size_t jj = r; jj < cols; ++jj) {
                const double mag = Traits::magnitude(m(i, col_order[jj]));
                if (mag > best) {
                    best = mag;
                    pr = i;
                    pc = jj;
                }
            }
        }
        if (best <= threshold) break;
        m.swap_rows(r, pr);
        std::swap(col_order[r], col_order[pc]);
        const Scalar pivot_inv = Traits::inverse(m(r, col_order[r]));
        for (std::size_t jj = r; jj < cols; ++jj) {
            auto& v = m(r, col_order[jj]);
            v = pivot_inv * v;
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            const Scalar factor = m(i, col_order[r]);
            for (std::size_t jj = r; jj < cols; ++jj) {
                m(i, col_order[jj]) -= factor * m(r, col_order[jj]);
            }
        }
        ++r;
    }
    return r;
}

/**
 * @brief Solves M·X = Y by Gaussian elimination with partial pivoting.
 *
 * Each pivot row is scaled by pivot⁻¹ from the left and subtracted from the
 * rows below after left multiplication by their leading entry, so the
 * unknowns X keep their coefficients on the right. Throws
 * SingularMatrixError when a pivot falls below pivot_rel_tol · max|M|.
 */
template<typename Scalar>
Matrix<Scalar> solve(Matrix<Scalar> m, Matrix<Scalar> y, double pivot_rel_tol = kDefaultPivotRelTol) {
    using Traits = ScalarTraits<Scalar>;
    if (!m.is_square()) throw DimensionError("solve: matrix is " + Matrix<Scalar>::shape(m));
    if (y.rows() != m.rows()) {
        throw DimensionError("solve: right-hand side is " + Matrix<Scalar>::shape(y) + " for " +
                             Matrix<Scalar>::shape(m));
    }
    const std::size_t n = m.rows();
    const double threshold = pivot_rel_tol * m.max_abs();
    const Matrix<Scalar> original = m;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = Traits::magnitude(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double mag = Traits::magnitude(m(i, k));
            if (mag > best) {
                best = mag;
                p = i;
            }
        }
        if (best <= threshold) {
            throw SingularMatrixError("solve: matrix is singular to working precision",
                                      rank(original, pivot_rel_tol));
        }
        m.swap_rows(k, p);
        y.swap_rows(k, p);

        const Scalar pivot_inv = Traits::inverse(m(k, k));
        for (std::size_t j = k; j < n; ++j) m(k, j) = pivot_inv * m(k, j);
        for (std::size_t j = 0; j < y.cols(); ++j) y(k, j) = pivot_inv * y(k, j);

        for (std::size_t i = k + 1; i < n; ++i) {
            const Scalar factor = m(i, k);
            for (std::size_t j = k; j < n; ++j) m(i, j) -= factor * m(k, j);
            for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) -= factor * y(k, j);
        }
    }

    // Unit upper triangular back substitution: X(k,:) = Y(k,:) - sum_{j>k} M(k,j)·X(j,:).
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t j = kk + 1; j < n; ++j) {
            const Scalar coeff = m(kk, j);
            for (std::size_t c = 0; c < y.cols(); ++c) y(kk, c) -= coeff * y(j, c);
        }
    }
    return y;
}

/// Two-sided inverse; throws SingularMatrixError carrying the estimated rank.
template<typename Scalar>
Matrix<Scalar> inverse(const Matrix<Scalar>& m, double pivot_rel_tol = kDefaultPivotRelTol) {
    if (!m.is_square()) throw DimensionError("inverse: matrix is " + Matrix<Scalar>::shape(m));
    return solve(m, Matrix<Scalar>::identity(m.rows()), pivot_rel_tol);
}

/// Quaternionic rank: the maximal number of right-independent columns.
inline std::size_t rank_h(const QMatrix& m, double pivot_rel_tol = kDefaultPivotRelTol) {
    return rank(m, pivot_rel_tol);
}

/**
 * @brief Complex adjoint embedding Φ: H^{m×n} → C^{2m×2n}.
 *
 * Each entry q = z₁ + z₂·j (z₁ = w + x·i, z₂ = y + z·i) becomes the block
 * [[z₁, z₂], [−conj(z₂), conj(z₁)]]. Φ is an injective *-ring homomorphism.
 */
CMatrix complex_adjoint(const QMatrix& m);

/// Inverse of complex_adjoint; reads z₁, z₂ from the first row of each block.
QMatrix from_complex_adjoint(const CMatrix& c);

}  // namespace qpole
