// SPDX-License-Identifier: Apache-2.0
#include "flexcode/linalg.hpp"

#include "flexcode/errors.hpp"

#include <algorithm>
#include <set>

namespace flexcode {

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::identity(FieldPtr field, std::size_t n) {
    Matrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(FieldPtr field, const std::vector<std::vector<Elem>>& rows) {
    const std::size_t nc = rows.empty() ? 0 : rows.front().size();
    Matrix m(field, rows.size(), nc);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != nc) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t c = 0; c < nc; ++c) {
            if (!field->contains(rows[r][c])) throw FieldError("matrix entry not in field");
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

Matrix Matrix::column(FieldPtr field, std::span<const Elem> values) {
    Matrix m(std::move(field), values.size(), 1);
    std::copy(values.begin(), values.end(), m.data_.begin());
    return m;
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Elem e) { return e == 0; });
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix dimension mismatch");
    const Field& f = *field_;
    Matrix out(field_, rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t t = 0; t < cols_; ++t) {
            const Elem a = (*this)(i, t);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                const Elem b = rhs(t, j);
                if (b) out(i, j) = f.add(out(i, j), f.mul(a, b));
            }
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("matrix dimension mismatch");
    Matrix out(field_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_->add(data_[i], rhs.data_[i]);
    return out;
}

Matrix Matrix::scaled(Elem c) const {
    Matrix out(*this);
    for (auto& e : out.data_) e = field_->mul(e, c);
    return out;
}

Matrix Matrix::transposed() const {
    Matrix out(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

Matrix Matrix::submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("submatrix out of range");
    Matrix out(field_, nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
    return out;
}

void Matrix::set_submatrix(std::size_t r0, std::size_t c0, const Matrix& m) {
    if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) throw std::out_of_range("submatrix out of range");
    for (std::size_t r = 0; r < m.rows_; ++r)
        for (std::size_t c = 0; c < m.cols_; ++c) (*this)(r0 + r, c0 + c) = m(r, c);
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
    Matrix out(field_, rows_, cols.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = (*this)(r, cols[c]);
    return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
    Matrix out(field_, rows.size(), cols_);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(rows[r], c);
    return out;
}

Matrix Matrix::hstack(const std::vector<Matrix>& parts) {
    if (parts.empty()) return {};
    std::size_t nc = 0;
    for (const auto& p : parts) {
        if (p.rows_ != parts.front().rows_) throw std::invalid_argument("hstack row mismatch");
        nc += p.cols_;
    }
    Matrix out(parts.front().field_, parts.front().rows_, nc);
    std::size_t c0 = 0;
    for (const auto& p : parts) {
        out.set_submatrix(0, c0, p);
        c0 += p.cols_;
    }
    return out;
}

Matrix Matrix::vstack(const std::vector<Matrix>& parts) {
    if (parts.empty()) return {};
    std::size_t nr = 0;
    for (const auto& p : parts) {
        if (p.cols_ != parts.front().cols_) throw std::invalid_argument("vstack column mismatch");
        nr += p.rows_;
    }
    Matrix out(parts.front().field_, nr, parts.front().cols_);
    std::size_t r0 = 0;
    for (const auto& p : parts) {
        out.set_submatrix(r0, 0, p);
        r0 += p.rows_;
    }
    return out;
}

Matrix Matrix::block_diag(const Matrix& m, std::size_t copies) {
    Matrix out(m.field_, m.rows_ * copies, m.cols_ * copies);
    for (std::size_t i = 0; i < copies; ++i) out.set_submatrix(i * m.rows_, i * m.cols_, m);
    return out;
}

namespace {

// In-place reduced row echelon form with first-nonzero pivoting. Returns
// the pivot column of each pivot row. Only the first `ncols` columns are
// used for pivots; the rest are carried along (augmented part).
std::vector<std::size_t> row_reduce(Matrix& m, std::size_t ncols) {
    const Field& f = *m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t t = 0; t < m.cols(); ++t) std::swap(m(piv, t), m(r, t));
        const Elem inv = f.inv(m(r, c));
        for (std::size_t t = 0; t < m.cols(); ++t) m(r, t) = f.mul(m(r, t), inv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            const Elem factor = m(i, c);
            if (factor == 0) continue;
            const Elem nf = f.neg(factor);
            for (std::size_t t = c; t < m.cols(); ++t)
                if (m(r, t)) m(i, t) = f.add(m(i, t), f.mul(nf, m(r, t)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

std::size_t matrix_rank(const Matrix& a) {
    Matrix m(a);
    return row_reduce(m, m.cols()).size();
}

Matrix solve_linear(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("solve_linear: row count mismatch");
    if (a.rows() < a.cols()) throw SingularMatrixError("underdetermined system");
    Matrix aug = Matrix::hstack({a, b});
    const auto pivots = row_reduce(aug, a.cols());
    if (pivots.size() < a.cols())
        throw SingularMatrixError("system matrix is rank deficient (rank " + std::to_string(pivots.size()) + " < " +
                                  std::to_string(a.cols()) + ")");
    for (std::size_t r = a.cols(); r < aug.rows(); ++r)
        for (std::size_t c = a.cols(); c < aug.cols(); ++c)
            if (aug(r, c) != 0) throw SingularMatrixError("inconsistent overdetermined system");
    return aug.submatrix(0, a.cols(), a.cols(), b.cols());
}

Matrix inverse(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
    return solve_linear(a, Matrix::identity(a.field(), a.rows()));
}

Matrix vandermonde(FieldPtr field, std::span<const Elem> points, std::size_t k) {
    if (k == 0) throw std::invalid_argument("vandermonde: k must be positive");
    std::set<Elem> seen(points.begin(), points.end());
    if (seen.size() != points.size()) throw std::invalid_argument("vandermonde: duplicate evaluation points");
    const Field& f = *field;
    Matrix m(field, k, points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
        Elem v = 1;
        for (std::size_t i = 0; i < k; ++i) {
            m(i, j) = v;
            v = f.mul(v, points[j]);
        }
    }
    return m;
}

std::vector<std::size_t> independent_rows(const Matrix& a) {
    // Pivot columns of the transpose are the independent rows of a.
    Matrix t = a.transposed();
    return row_reduce(t, t.cols());
}

} // namespace flexcode
