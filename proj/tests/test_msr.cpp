// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flexcode/errors.hpp"
#include "flexcode/msr.hpp"
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

std::vector<Symbol> random_info(Philox4x32& rng, std::size_t count, std::size_t L, const Field& f) {
    std::vector<Symbol> info(count, Symbol(L));
    for (auto& s : info)
        for (auto& e : s) e = rng() % f.order();
    return info;
}

const FlexProfile kProfile = make_profile(Family::Msr, 4, {{3, 2}, {2, 3}});

} // namespace

TEST_CASE("Ye-Barg building blocks at n = 4, k = 2") {
    const auto s = build_yebarg(4, 2, nullptr, nullptr);
    CHECK(s.r == 2);
    CHECK(s.L == 16);
    CHECK(s.E->order() == 16);
    CHECK(s.digit(0b1011, 1) == 1);
    CHECK(s.digit(0b1011, 3) == 0);
    CHECK(s.digit(0b1011, 4) == 1);
    // lambda values are distinct and nonzero.
    std::vector<Elem> all;
    for (const auto& row : s.lambda) all.insert(all.end(), row.begin(), row.end());
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    CHECK(all.front() != 0);
    for (std::size_t star = 1; star <= 4; ++star) {
        const Matrix D = s.d_matrix(star);
        REQUIRE(D.rows() == 8);
        REQUIRE(D.cols() == 16);
        for (std::size_t x = 0; x < 8; ++x) {
            std::size_t ones = 0;
            for (std::size_t y = 0; y < 16; ++y) ones += D(x, y);
            CHECK(ones == 2);
        }
        for (std::size_t y = 0; y < 16; ++y) {
            std::size_t ones = 0;
            for (std::size_t x = 0; x < 8; ++x) ones += D(x, y);
            CHECK(ones == 1);
        }
        const Matrix S = s.s_matrix(star);
        CHECK(S.rows() == 16);
        CHECK(S.cols() == 32);
        // Rank condition on plain columns (b = 1).
        for (std::size_t i = 1; i <= 4; ++i)
            CHECK(matrix_rank(S * s.h_column(i, 1)) == (i == star ? 16u : 8u));
    }
    // A_i diagonal entry at z is lambda_{i, digit_i(z)}.
    const auto d = s.a_diagonal(2);
    for (std::size_t z = 0; z < 16; ++z) CHECK(d[z] == s.embedding->embed(s.lambda[1][s.digit(z, 2)]));
}

TEST_CASE("Ye-Barg argument checks") {
    CHECK_THROWS_AS(build_yebarg(6, 3, nullptr, nullptr), ProfileError);
    CHECK_THROWS_AS(build_yebarg(5, 1, nullptr, nullptr), ProfileError);
    CHECK_THROWS_AS(build_yebarg(4, 4, nullptr, nullptr), ProfileError);
    CHECK_THROWS_AS(build_yebarg(4, 2, Field::binary(3), nullptr), FieldError);
    CHECK(default_msr_base_field(4, 2)->order() == 16);
    CHECK(default_msr_base_field(5, 2)->order() == 16);
    CHECK(default_msr_base_field(3, 2)->order() == 4);
}

TEST_CASE("coefficient tables") {
    const auto plan = validate_profile(kProfile);
    CHECK(per_layer_coefficient_count(plan) == 2);
    const auto pl = assign_coefficients(plan, CoefficientStrategy::PerLayer);
    CHECK(pl.row_index == std::vector<std::size_t>{0, 0, 1});
    CHECK(pl.count == 2);
    const auto pr = assign_coefficients(plan, CoefficientStrategy::PerRow);
    CHECK(pr.row_index == std::vector<std::size_t>{0, 1, 2});
    CHECK(pr.count == 3);
    // 3 layers: layer 3 receives ceil((3-2)/2) = 1 extra row per row.
    const auto p3 = validate_profile(make_profile(Family::Msr, 5, {{4, 3}, {3, 4}, {2, 6}}));
    CHECK(per_layer_coefficient_count(p3) == 1 + 1 + 1);
    CHECK(std::string(to_string(CoefficientStrategy::PerRow)) == "per-row");
}

TEST_CASE("flexible Ye-Barg MSR (4,2,3): audit, decode, repair") {
    for (auto strategy : {CoefficientStrategy::PerLayer, CoefficientStrategy::PerRow}) {
        CAPTURE(to_string(strategy));
        const auto code = make_flex_msr(kProfile, strategy);
        CHECK(code.L == 16);
        CHECK(code.field->order() == 256);
        const auto rep = audit_msr(code);
        CHECK(rep.ok());
        CHECK(rep.violations.empty());
        CHECK(rep.rows_checked == 3);

        Philox4x32 rng(61, 0);
        const auto info = random_info(rng, 6, 16, *code.field);
        const auto arr = layered_encode(info, code.layered);
        for (std::size_t j = 1; j <= 2; ++j) {
            const auto& t = kProfile.tuples[j - 1];
            for (const auto& s : subsets(4, t.R)) REQUIRE(layered_decode(read_nodes(arr, s, t.ell), j, code.layered) == info);
        }
        for (std::size_t star = 0; star < 4; ++star) {
            const auto r = msr_repair(arr, star, code);
            CHECK(r.symbols == arr.node(star));
            CHECK(r.symbols_transferred == 3 * 3 * 16 / 2); // l (n-1) L / r
            CHECK(r.naive_symbols == 2 * 3 * 16);
            for (std::size_t h = 0; h < 4; ++h) CHECK(r.per_helper[h] == (h == star ? 0u : 24u));
        }
    }
}

TEST_CASE("audit catches a repeated coefficient") {
    const auto plan = validate_profile(kProfile);
    CoefficientTable bad;
    bad.row_index = {0, 0, 0};
    bad.count = 1;
    const auto code = make_flex_msr(kProfile, bad, nullptr, Field::binary(8));
    const auto rep = audit_msr(code);
    CHECK_FALSE(rep.condition1);
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("too few cosets") {
    // F = E has a single coset; per-layer needs two.
    CHECK_THROWS_AS(make_flex_msr(kProfile, CoefficientStrategy::PerLayer, Field::binary(4), Field::binary(4)),
                    FieldError);
}

TEST_CASE("Example 4 fixture") {
    const auto code = make_example4_code();
    CHECK(code.L == 2);
    CHECK(code.H.size() == 3);
    CHECK(code.H[0].rows() == 4);
    CHECK(code.H[0].cols() == 10); // (n + k_1 - k_a) L
    CHECK(code.H[2].cols() == 8);
    // Plain columns of the base matrix meet the rank condition.
    const Matrix H = example4_base_h();
    const auto S = example4_repair_matrices();
    for (std::size_t star = 0; star < 4; ++star)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(matrix_rank(S[star] * H.block_column(i, 2)) == (i == star ? 2u : 1u));
    // Nodes 1 and 2 repair with 9 symbols.
    Philox4x32 rng(62, 0);
    const auto arr = layered_encode(random_info(rng, 6, 2, *code.field), code.layered);
    for (std::size_t star = 0; star < 2; ++star) {
        const auto r = msr_repair(arr, star, code);
        CHECK(r.symbols == arr.node(star));
        CHECK(r.symbols_transferred == 9);
        CHECK(r.naive_symbols == 12);
    }
}
