// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flexcode/errors.hpp"
#include "flexcode/pmds.hpp"
#include "flexcode/philox.hpp"

#include <algorithm>

using namespace flexcode;

namespace {

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t r) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(r), true);
    do {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask[i]) s.push_back(i);
        out.push_back(s);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

std::vector<Elem> random_elems(Philox4x32& rng, std::size_t count, const Field& f) {
    std::vector<Elem> v(count);
    for (auto& e : v) e = (std::uint64_t{rng()} << 32 | rng()) % f.order();
    return v;
}

SymbolReads reads_of(const CodewordArray& arr, std::size_t rows, std::size_t n) {
    SymbolReads s;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < n; ++c) s[{r, c}] = arr.at(r, c)[0];
    return s;
}

} // namespace

TEST_CASE("small Gabidulin code over GF(2^6) with base GF(2)") {
    auto F = Field::binary(6);
    auto E = Field::binary(1);
    const auto emb = std::make_shared<Embedding>(E, F);
    const auto code = make_gabidulin(F, emb, 6, 3);
    Philox4x32 rng(51, 0);
    for (int t = 0; t < 20; ++t) {
        const auto u = random_elems(rng, 3, *F);
        // f is GF(2)-linear: f(x + y) = f(x) + f(y).
        const Elem x = rng() % 64, y = rng() % 64;
        CHECK(linearized_eval(code, u, F->add(x, y)) ==
              F->add(linearized_eval(code, u, x), linearized_eval(code, u, y)));
        const auto c = gabidulin_encode(u, code);
        for (const auto& s : subsets(6, 3)) {
            std::vector<std::pair<Elem, Elem>> pairs;
            for (auto i : s) pairs.emplace_back(code.points[i], c[i]);
            REQUIRE(gabidulin_erasure_decode(pairs, code) == u);
        }
        // Sums of points are new, still valid, evaluation points.
        std::vector<std::pair<Elem, Elem>> mixed{{F->add(code.points[0], code.points[1]), F->add(c[0], c[1])},
                                                 {F->add(code.points[1], code.points[2]), F->add(c[1], c[2])},
                                                 {code.points[4], c[4]}};
        CHECK(gabidulin_erasure_decode(mixed, code) == u);
    }
}

TEST_CASE("Gabidulin decode rejects dependent evaluations") {
    auto F = Field::binary(6);
    const auto code = make_gabidulin(F, std::make_shared<Embedding>(Field::binary(1), F), 6, 3);
    const std::vector<Elem> u{1, 2, 3};
    const auto c = gabidulin_encode(u, code);
    const std::vector<std::pair<Elem, Elem>> dep{{code.points[0], c[0]},
                                                 {code.points[1], c[1]},
                                                 {F->add(code.points[0], code.points[1]), F->add(c[0], c[1])}};
    CHECK_THROWS_AS(gabidulin_erasure_decode(dep, code), DecodeError);
    CHECK_THROWS_AS(make_gabidulin(F, std::make_shared<Embedding>(Field::binary(2), F), 4, 2), FieldError);
}

TEST_CASE("systematic MDS parities over GF(q)") {
    for (auto [w, n, k] : {std::tuple{2u, 5u, 3u}, {2u, 5u, 4u}, {2u, 5u, 2u}, {3u, 9u, 4u}, {1u, 4u, 3u}, {1u, 4u, 1u}}) {
        auto fq = Field::binary(w);
        const Matrix P = gfq_mds_parity(fq, n, k);
        REQUIRE(P.rows() == k);
        REQUIRE(P.cols() == n - k);
        const Matrix G = Matrix::hstack({Matrix::identity(fq, k), P});
        for (const auto& s : subsets(n, k)) CHECK(matrix_rank(G.select_columns(s)) == k);
    }
    CHECK_THROWS_AS(gfq_mds_parity(Field::binary(1), 5, 3), FieldError);
}

TEST_CASE("base degree and Table III geometry") {
    CHECK(pmds_base_degree(make_profile(Family::Pmds, 5, {{4, 3}, {3, 4}}, 0, 2)) == 2);
    CHECK(pmds_base_degree(make_profile(Family::Pmds, 4, {{3, 2}, {2, 3}}, 0, 1)) == 2);
    CHECK(pmds_base_degree(make_profile(Family::Pmds, 3, {{2, 2}, {1, 4}}, 0, 1)) == 1);
    const auto code = make_table3_code();
    CHECK(code.fq->order() == 4);
    CHECK(code.gab.field->order() == (std::uint64_t{1} << 30));
    CHECK(code.gab.N == 15);
    CHECK(code.K() == 10);
    CHECK(code.coord_offset == std::vector<std::size_t>{0, 4, 8, 12});
}

TEST_CASE("Table III: rows are Gabidulin coordinates plus GF(q) parities") {
    const auto code = make_table3_code();
    Philox4x32 rng(52, 0);
    const auto u = random_elems(rng, 10, *code.gab.field);
    const auto c = gabidulin_encode(u, code.gab);
    const auto arr = flex_pmds_encode(u, code);
    for (std::size_t i = 0; i < 4; ++i) CHECK(arr.at(0, i)[0] == c[i]);
    for (std::size_t i = 0; i < 3; ++i) CHECK(arr.at(3, i)[0] == c[12 + i]);
    // Every row is a codeword of [I | P] lifted to the big field.
    const Field& F = *code.gab.field;
    const Embedding& emb = *code.gab.base;
    for (std::size_t row = 0; row < 4; ++row) {
        const std::size_t kj = row < 3 ? 4 : 3;
        const Matrix& P = code.parity[row < 3 ? 0 : 1];
        for (std::size_t t = 0; t < P.cols(); ++t) {
            Elem acc = 0;
            for (std::size_t i = 0; i < kj; ++i) acc = F.add(acc, F.mul(emb.embed(P(i, t)), arr.at(row, i)[0]));
            CHECK(arr.at(row, kj + t)[0] == acc);
        }
    }
}

TEST_CASE("Table III: erasure patterns within and beyond the budget") {
    const auto code = make_table3_code();
    Philox4x32 rng(53, 0);
    const auto u = random_elems(rng, 10, *code.gab.field);
    const auto arr = flex_pmds_encode(u, code);
    for (std::size_t J = 1; J <= 2; ++J) {
        const std::size_t rows = J == 1 ? 3 : 4;
        const std::size_t lost_nodes = J == 1 ? 1 : 2;
        const auto full = reads_of(arr, rows, 5);
        std::size_t decoded = 0;
        for (const auto& nodes : subsets(5, lost_nodes)) {
            SymbolReads base = full;
            for (auto c : nodes)
                for (std::size_t r = 0; r < rows; ++r) base.erase({r, c});
            std::vector<std::pair<std::size_t, std::size_t>> left;
            for (const auto& [pos, v] : base) left.push_back(pos);
            for (std::size_t a = 0; a < left.size(); ++a)
                for (std::size_t b = a + 1; b < left.size(); ++b) {
                    SymbolReads s = base;
                    s.erase(left[a]);
                    s.erase(left[b]);
                    REQUIRE(flex_pmds_decode(s, J, code) == u);
                    ++decoded;
                    // One more erased symbol is over budget.
                    for (std::size_t c = b + 1; c < left.size(); c += 3) {
                        SymbolReads t = s;
                        t.erase(left[c]);
                        CHECK_THROWS_AS(flex_pmds_decode(t, J, code), DecodeError);
                    }
                }
        }
        CHECK(decoded == (J == 1 ? 5u * 66u : 10u * 66u));
    }
}

TEST_CASE("PMDS decode input checks") {
    const auto code = make_table3_code();
    SymbolReads s{{{3, 0}, 1}};
    CHECK_THROWS_AS(flex_pmds_decode(s, 1, code), DecodeError);
    CHECK_THROWS_AS(flex_pmds_decode({}, 3, code), std::out_of_range);
    CHECK_THROWS_AS(flex_pmds_decode({}, 1, code), DecodeError);
    CHECK_THROWS_AS(make_flex_pmds(make_profile(Family::Mds, 5, {{4, 3}, {3, 4}})), ProfileError);
}
