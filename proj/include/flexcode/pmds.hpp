// SPDX-License-Identifier: Apache-2.0
//
// Flexible partial-MDS codes. The K = k*l - s information symbols are
// encoded by an (N, K) Gabidulin code over GF(q^N), N = sum_j k_j (l_j - l_{j-1}).
// Row m of layer j holds k_j consecutive Gabidulin coordinates followed by
// the parities of a systematic (n, k_j) MDS code over GF(q).

#pragma once

#include "flexcode/layered.hpp"
#include "flexcode/linalg.hpp"

#include <map>
#include <utility>

namespace flexcode {

struct GabidulinCode {
    FieldPtr field; // GF(q^N) (or larger)
    std::shared_ptr<const Embedding> base;
    std::uint64_t q = 0;
    std::size_t N = 0;
    std::size_t K = 0;
    std::vector<Elem> points; // GF(q)-independent
};

/// Points 1, g, ..., g^(N-1) for the generator g of `field`.
GabidulinCode make_gabidulin(FieldPtr field, std::shared_ptr<const Embedding> base, std::size_t N, std::size_t K);

/// f(x) = sum_i u_i x^(q^i) evaluated at one point.
Elem linearized_eval(const GabidulinCode& code, std::span<const Elem> u, Elem x);

std::vector<Elem> gabidulin_encode(std::span<const Elem> u, const GabidulinCode& code);

/// Recovers u from (point, value) pairs. Uses the first K points that are
/// independent over GF(q); throws DecodeError when there are fewer.
std::vector<Elem> gabidulin_erasure_decode(std::span<const std::pair<Elem, Elem>> pairs, const GabidulinCode& code);

/// k x (n - k) parity matrix of a systematic (n, k) MDS code over fq
/// (doubly-extended Reed-Solomon, systematized; requires |fq| + 1 >= n unless
/// k is 1, n - 1 or n).
Matrix gfq_mds_parity(FieldPtr fq, std::size_t n, std::size_t k);

struct PmdsCode {
    LayerPlan plan;
    FieldPtr fq;
    GabidulinCode gab;
    std::vector<Matrix> parity;            // per layer, over fq
    std::vector<std::size_t> coord_offset; // per global row: first Gabidulin coordinate
    std::size_t K() const { return gab.K; }
};

/// Smallest q (a power of two) for which every (n, k_j) MDS row code exists.
std::uint32_t pmds_base_degree(const FlexProfile& profile);

PmdsCode make_flex_pmds(const FlexProfile& profile);

/// The (5,3,4,2) code with (k_1,l_1) = (4,3), (k_2,l_2) = (3,4).
PmdsCode make_table3_code();

CodewordArray flex_pmds_encode(std::span<const Elem> info, const PmdsCode& code);

/// (row, node) -> symbol, 0-based.
using SymbolReads = std::map<std::pair<std::size_t, std::size_t>, Elem>;

/// Decodes from surviving symbols of the first l_J rows. Symbols outside
/// that prefix are rejected. Throws DecodeError if the symbols carry fewer
/// than K independent evaluations.
std::vector<Elem> flex_pmds_decode(const SymbolReads& surviving, std::size_t J, const PmdsCode& code);

} // namespace flexcode
