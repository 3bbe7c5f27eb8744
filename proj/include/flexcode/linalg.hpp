// SPDX-License-Identifier: Apache-2.0
//
// Dense matrices over a Field. Block matrices (entries that are L x L
// matrices) are always stored flattened; callers address blocks through
// block()/set_block().

#pragma once

#include "flexcode/field.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace flexcode {

class Matrix {
public:
    Matrix() = default;
    Matrix(FieldPtr field, std::size_t rows, std::size_t cols);

    static Matrix identity(FieldPtr field, std::size_t n);
    static Matrix from_rows(FieldPtr field, const std::vector<std::vector<Elem>>& rows);
    static Matrix column(FieldPtr field, std::span<const Elem> values);

    const FieldPtr& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
    bool is_zero() const;

    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix scaled(Elem c) const;
    Matrix transposed() const;

    Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_submatrix(std::size_t r0, std::size_t c0, const Matrix& m);
    Matrix select_columns(std::span<const std::size_t> cols) const;
    Matrix select_rows(std::span<const std::size_t> rows) const;

    /// Column block c of width `width` (all rows).
    Matrix block_column(std::size_t c, std::size_t width) const { return submatrix(0, c * width, rows_, width); }

    static Matrix hstack(const std::vector<Matrix>& parts);
    static Matrix vstack(const std::vector<Matrix>& parts);
    /// Block-diagonal matrix with `copies` copies of m.
    static Matrix block_diag(const Matrix& m, std::size_t copies);

private:
    FieldPtr field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Elem> data_;
};

std::size_t matrix_rank(const Matrix& a);

/// X with A X = B. A must have full column rank; an overdetermined system
/// must be consistent. Throws SingularMatrixError otherwise.
Matrix solve_linear(const Matrix& a, const Matrix& b);

Matrix inverse(const Matrix& a);

/// k x |points| matrix with entry (i, j) = points[j]^i. Points must be distinct.
Matrix vandermonde(FieldPtr field, std::span<const Elem> points, std::size_t k);

/// Indices of the first linearly independent rows (greedy, top to bottom).
std::vector<std::size_t> independent_rows(const Matrix& a);

} // namespace flexcode
