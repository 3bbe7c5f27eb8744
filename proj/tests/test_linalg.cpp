// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flexcode/errors.hpp"
#include "flexcode/linalg.hpp"
#include "flexcode/msr.hpp"
#include "flexcode/philox.hpp"

#include <algorithm>
#include <numeric>

using namespace flexcode;

namespace {

Matrix random_matrix(FieldPtr f, std::size_t r, std::size_t c, Philox4x32& rng) {
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng() % f->order();
    return m;
}

// Determinant by cofactor expansion: an oracle independent of elimination.
Elem det_oracle(const Matrix& m) {
    const Field& f = *m.field();
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    Elem acc = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::size_t> rows(n - 1), cols;
        std::iota(rows.begin(), rows.end(), 1);
        for (std::size_t k = 0; k < n; ++k)
            if (k != c) cols.push_back(k);
        const Elem minor = det_oracle(m.select_rows(rows).select_columns(cols));
        const Elem term = f.mul(m(0, c), minor);
        acc = c % 2 ? f.sub(acc, term) : f.add(acc, term);
    }
    return acc;
}

} // namespace

TEST_CASE("solve_linear") {
    auto f5 = Field::make(5, 1);
    SUBCASE("identity") {
        auto B = Matrix::from_rows(f5, {{1, 2}, {3, 4}});
        CHECK(solve_linear(Matrix::identity(f5, 2), B) == B);
    }
    SUBCASE("2x2 over GF(5)") {
        auto A = Matrix::from_rows(f5, {{1, 1}, {1, 2}});
        auto B = Matrix::from_rows(f5, {{3}, {0}});
        auto X = solve_linear(A, B);
        CHECK(X == Matrix::from_rows(f5, {{1}, {2}}));
        // substitute back with checked arithmetic
        for (std::size_t r = 0; r < 2; ++r) {
            FieldElement acc{f5, 0};
            for (std::size_t c = 0; c < 2; ++c)
                acc = ff_arith(acc, ff_arith({f5, A(r, c)}, {f5, X(c, 0)}, ArithOp::Mul), ArithOp::Add);
            CHECK(acc == FieldElement{f5, B(r, 0)});
        }
    }
    SUBCASE("singular") {
        auto A = Matrix::from_rows(f5, {{1, 2}, {1, 2}});
        CHECK_THROWS_AS(solve_linear(A, Matrix::from_rows(f5, {{1}, {1}})), SingularMatrixError);
    }
    SUBCASE("overdetermined with full column rank") {
        auto A = Matrix::from_rows(f5, {{1, 0}, {0, 1}, {1, 1}});
        auto X = Matrix::from_rows(f5, {{2}, {4}});
        CHECK(solve_linear(A, A * X) == X);
    }
}

TEST_CASE("solve_linear round trip on random systems") {
    Philox4x32 rng(5, 0);
    for (auto f : {Field::binary(8), Field::make(7, 1), Field::binary(30)}) {
        for (int t = 0; t < 50; ++t) {
            const std::size_t n = 1 + rng() % 7;
            auto A = random_matrix(f, n, n, rng);
            auto X = random_matrix(f, n, 2, rng);
            if (matrix_rank(A) < n) {
                CHECK_THROWS_AS(solve_linear(A, A * X), SingularMatrixError);
                continue;
            }
            CHECK(solve_linear(A, A * X) == X);
            CHECK(inverse(A) * A == Matrix::identity(f, n));
        }
    }
}

TEST_CASE("rank agrees with a cofactor determinant on small square matrices") {
    Philox4x32 rng(6, 0);
    auto f = Field::binary(2);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng() % 4;
        auto A = random_matrix(f, n, n, rng);
        CHECK((matrix_rank(A) == n) == (det_oracle(A) != 0));
    }
}

TEST_CASE("rank basics and invariances") {
    auto f = Field::binary(8);
    CHECK(matrix_rank(Matrix(f, 3, 4)) == 0);
    Philox4x32 rng(7, 0);
    for (int t = 0; t < 100; ++t) {
        const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        auto A = random_matrix(f, r, c, rng);
        // make some rows dependent
        if (r > 2) A.set_submatrix(r - 1, 0, A.submatrix(0, 0, 1, c).scaled(1 + rng() % 255));
        const std::size_t rk = matrix_rank(A);
        CHECK(rk <= std::min(r, c));
        CHECK(matrix_rank(A.transposed()) == rk);
        std::vector<std::size_t> rp(r), cp(c);
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::reverse(rp.begin(), rp.end());
        std::rotate(cp.begin(), cp.begin() + c / 2, cp.end());
        CHECK(matrix_rank(A.select_rows(rp).select_columns(cp)) == rk);
        Matrix S = A;
        S.set_submatrix(0, 0, A.submatrix(0, 0, 1, c).scaled(1 + rng() % 255));
        CHECK(matrix_rank(S) == rk);
        CHECK(independent_rows(A).size() == rk);
        CHECK(matrix_rank(A.select_rows(independent_rows(A))) == rk);
    }
}

TEST_CASE("vandermonde") {
    auto f5 = Field::make(5, 1);
    std::vector<Elem> one{1};
    CHECK(vandermonde(f5, one, 1) == Matrix::from_rows(f5, {{1}}));
    std::vector<Elem> pts{1, 2, 3};
    CHECK(vandermonde(f5, pts, 2) == Matrix::from_rows(f5, {{1, 1, 1}, {1, 2, 3}}));
    std::vector<Elem> dup{1, 1};
    CHECK_THROWS(vandermonde(f5, dup, 2));

    // Distinct points: the product of differences is nonzero, so the rank is full.
    auto f = Field::binary(8);
    Philox4x32 rng(8, 0);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 1 + rng() % 10;
        std::vector<Elem> p;
        while (p.size() < n) {
            const Elem x = rng() % 256;
            if (std::find(p.begin(), p.end(), x) == p.end()) p.push_back(x);
        }
        Elem prod = 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) prod = f->mul(prod, f->sub(p[j], p[i]));
        REQUIRE(prod != 0);
        CHECK(matrix_rank(vandermonde(f, p, n)) == n);
        if (n <= 5) CHECK(det_oracle(vandermonde(f, p, n)) == prod);
    }
}

TEST_CASE("block helpers") {
    auto f = Field::binary(2);
    auto m = Matrix::from_rows(f, {{1, 2}, {3, 0}});
    auto d = Matrix::block_diag(m, 2);
    CHECK(d.rows() == 4);
    CHECK(d.submatrix(2, 2, 2, 2) == m);
    CHECK(d.submatrix(0, 2, 2, 2).is_zero());
    CHECK(Matrix::hstack({m, m}).block_column(1, 2) == m);
    CHECK(Matrix::vstack({m, m}).submatrix(2, 0, 2, 2) == m);
}

TEST_CASE("Example 4 repair matrix S_1 on the base parity-check columns") {
    const Matrix H = example4_base_h();
    const auto S = example4_repair_matrices();
    // [h_{1,i}; h_{2,i}] is block column i of the 2 x 4 block matrix H.
    CHECK(matrix_rank(S[0] * H.block_column(0, 2)) == 2);
    CHECK(matrix_rank(S[0] * H.block_column(1, 2)) == 1);
}
