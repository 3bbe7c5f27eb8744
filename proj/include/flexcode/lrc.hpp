// SPDX-License-Identifier: Apache-2.0
//
// Flexible locally recoverable codes. Rows are Tamo-Barg codes: evaluation
// points are split into multiplicative cosets of the order-(r+1) subgroup,
// g(x) = x^(r+1) is constant on each coset, and a row of dimension k_j is
//   f(x) = sum_{b<r} x^b sum_{c<k_j/r} u_{b*(k_j/r)+c} g(x)^c.
// The first n/(r+1) cosets are the stored groups (node order); the next ones
// are extra groups, of which the first r points are extra parities.

#pragma once

#include "flexcode/layered.hpp"

namespace flexcode {

struct LrcLayout {
    FieldPtr field;
    std::size_t r = 0;
    std::size_t stored_groups = 0;
    /// Every group as r+1 points h^0..h^r times its coset representative;
    /// stored groups first, then extra groups.
    std::vector<std::vector<Elem>> groups;

    std::size_t group_of_node(std::size_t node) const { return node / (r + 1); }
    Elem node_point(std::size_t node) const { return groups[node / (r + 1)][node % (r + 1)]; }
    /// g(x) = x^(r+1).
    Elem good_poly(Elem x) const { return field->pow(x, r + 1); }
};

/// Coset layout for a validated LRC profile. Throws FieldError when the
/// field has no order-(r+1) subgroup or too few cosets.
LrcLayout build_layout(FieldPtr field, const FlexProfile& profile);

/// Smallest field admitting the layout: GF(2^w) when r+1 is odd, else a prime field.
FieldPtr default_lrc_field(const FlexProfile& profile);

class LrcRowCode : public RowCodec {
public:
    /// Row of a layer with `k` message symbols and `extra_groups` extra groups.
    LrcRowCode(const LrcLayout& layout, std::size_t k, std::size_t n, std::size_t extra_groups);

    std::size_t length() const override { return points_.size(); }
    std::size_t dimension() const override { return k_; }
    std::size_t symbol_width() const override { return 1; }
    std::vector<Symbol> encode(std::span<const Symbol> message) const override;
    /// Completes every extra group whose r extras are known by locality, then
    /// interpolates the message.
    std::vector<Symbol> decode(std::span<const std::optional<Symbol>> received) const override;

    /// f(x) for the given message.
    Elem evaluate(std::span<const Elem> message, Elem x) const;
    /// Evaluation point of each codeword position.
    const std::vector<Elem>& points() const noexcept { return points_; }

private:
    Elem basis(std::size_t i, Elem x) const;

    FieldPtr field_;
    std::size_t r_;
    std::size_t k_;
    std::size_t n_;
    std::vector<Elem> points_;
    std::vector<Elem> omitted_; // last point of each extra group
};

struct LrcCode {
    LrcLayout layout;
    LayeredCode layered;
};

LrcCode make_flex_lrc(const FlexProfile& profile, FieldPtr field = nullptr);

/// The (12,4,3,2) code with (k_1,l_1) = (6,2), (k_2,l_2) = (4,3) over GF(16).
LrcCode make_example3_code();

/// Value at `x` of the degree < pts.size() polynomial through (pts, vals).
Elem lagrange_eval(const Field& f, std::span<const Elem> pts, std::span<const Elem> vals, Elem x);

struct LocalRepair {
    std::vector<Elem> symbols;        // all l symbols of the failed node
    std::vector<std::size_t> helpers; // the r group peers that were read
    std::size_t symbols_read = 0;
};

/// Rebuilds node `failed` from its r group peers. `available` must hold every
/// peer with all l symbols; other entries are ignored.
LocalRepair local_repair(const std::map<std::size_t, std::vector<Elem>>& available, std::size_t failed,
                         const LrcCode& code);

LocalRepair local_repair(const CodewordArray& arr, std::size_t failed, const LrcCode& code);

} // namespace flexcode
