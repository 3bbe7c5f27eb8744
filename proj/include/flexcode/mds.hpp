// SPDX-License-Identifier: Apache-2.0
//
// Flexible MDS codes: every row of layer j is a systematic (n + k_j - k_a, k_j)
// MDS code, by default Reed-Solomon on the points 0, 1, a, a^2, ...

#pragma once

#include "flexcode/layered.hpp"
#include "flexcode/linalg.hpp"

namespace flexcode {

/// Row code with generator [I | P]. Positions 0..k-1 carry the message.
class SystematicLinearRowCode : public RowCodec {
public:
    /// `parity` is k x (length - k).
    SystematicLinearRowCode(FieldPtr field, Matrix parity);

    std::size_t length() const override { return k_ + parity_.cols(); }
    std::size_t dimension() const override { return k_; }
    std::size_t symbol_width() const override { return 1; }
    std::vector<Symbol> encode(std::span<const Symbol> message) const override;
    std::vector<Symbol> decode(std::span<const std::optional<Symbol>> received) const override;

    const Matrix& parity() const noexcept { return parity_; }
    /// k x length generator [I | P].
    Matrix generator() const;
    const FieldPtr& field() const noexcept { return field_; }

private:
    FieldPtr field_;
    std::size_t k_;
    Matrix parity_;
};

/// Evaluation points used by rs_row_code: 0, 1, g, g^2, ... (length of them).
std::vector<Elem> rs_points(const Field& field, std::size_t length);

/// Systematic Reed-Solomon code of the given length and dimension.
std::shared_ptr<const SystematicLinearRowCode> rs_row_code(FieldPtr field, std::size_t length, std::size_t k);

/// Encodes one row; output has length() entries, the first k equal to info_row.
std::vector<Elem> rs_encode_row(std::span<const Elem> info_row, const SystematicLinearRowCode& code);

/// Smallest binary field holding n + k_1 - k_a distinct points.
FieldPtr default_mds_field(const FlexProfile& profile);

/// Flexible MDS code with one RS row codec per row. `field` defaults to
/// default_mds_field.
LayeredCode make_flex_mds(const FlexProfile& profile, FieldPtr field = nullptr);

/// The (4,2,3) code over GF(5) whose rows use the parities
/// W = C1 + C2 + C3, W' = C1 + 2C2 + 3C3 (layer 1) and W'_1 + W'_2, W'_1 + 2W'_2
/// (layer 2).
LayeredCode make_fig1_code();

CodewordArray flex_mds_encode(std::span<const Elem> info, const LayeredCode& code);

/// `nodes` maps node index to its first l_j symbols.
std::vector<Elem> flex_mds_decode(const std::map<std::size_t, std::vector<Elem>>& nodes, std::size_t j,
                                  const LayeredCode& code);

/// Scalar helpers for width-1 symbol vectors.
std::vector<Symbol> to_symbols(std::span<const Elem> values);
std::vector<Elem> from_symbols(std::span<const Symbol> symbols);

} // namespace flexcode
