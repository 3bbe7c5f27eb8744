// SPDX-License-Identifier: Apache-2.0
//
// Family-independent front end used by the CLI: profile configs, a single
// code handle over the four families, byte <-> symbol framing and layer
// selection.

#pragma once

#include "flexcode/layered.hpp"
#include "flexcode/lrc.hpp"
#include "flexcode/msr.hpp"
#include "flexcode/pmds.hpp"
#include "flexcode/shard.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>

namespace flexcode {

/// Parsed profile config. Either a named fixture ("fig1", "example3",
/// "table3", "example4") or a family with (n, k, ell) and layer tuples.
struct CodeConfig {
    std::optional<std::string> fixture;
    FlexProfile profile;
    std::optional<FieldSpec> field;
    CoefficientStrategy coefficients = CoefficientStrategy::PerLayer;
};

/// Throws ProfileError / std::invalid_argument on malformed documents.
CodeConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const CodeConfig& cfg);
nlohmann::json profile_to_json(const FlexProfile& p);
FlexProfile profile_from_json(const nlohmann::json& doc);
nlohmann::json field_to_json(const FieldSpec& f);
FieldSpec field_from_json(const nlohmann::json& doc);

class FlexCode {
public:
    static FlexCode build(const CodeConfig& cfg);

    Family family() const { return plan().profile.family; }
    const LayerPlan& plan() const;
    const FieldPtr& field() const { return field_; }
    FieldSpec field_spec() const { return FieldSpec::of(*field_); }
    /// Field elements per stored symbol (L for MSR, else 1).
    std::size_t block() const { return block_; }
    /// Field elements of information per stripe.
    std::size_t info_elements() const;
    /// Whole bits carried by one information element.
    std::size_t bits_per_element() const;

    CodewordArray encode(std::span<const Elem> info) const;
    /// Information elements from at least R_j nodes, each supplying its
    /// first l_j symbols.
    std::vector<Elem> decode(const NodeReads& nodes, std::size_t j) const;

    const std::optional<std::string>& fixture() const { return fixture_; }
    const LayeredCode* layered() const;
    const LrcCode* lrc() const { return lrc_.get(); }
    const PmdsCode* pmds() const { return pmds_.get(); }
    const MsrCode* msr() const { return msr_.get(); }

private:
    std::optional<std::string> fixture_;
    FieldPtr field_;
    std::size_t block_ = 1;
    std::shared_ptr<const LayeredCode> mds_;
    std::shared_ptr<const LrcCode> lrc_;
    std::shared_ptr<const PmdsCode> pmds_;
    std::shared_ptr<const MsrCode> msr_;
};

/// Splits `bytes` into stripes of `elements` information elements carrying
/// `bits` bits each (MSB first), zero-padding the last stripe. At least one
/// stripe is produced.
std::vector<std::vector<Elem>> bytes_to_stripes(std::span<const std::uint8_t> bytes, std::size_t elements,
                                                std::size_t bits);

/// Inverse of bytes_to_stripes, truncated to `length` bytes.
std::vector<std::uint8_t> stripes_to_bytes(const std::vector<std::vector<Elem>>& stripes, std::size_t bits,
                                           std::size_t length);

/// Layer to decode from `available` nodes: the satisfiable j with the
/// fewest symbols read (R_j l_j), ties to the smaller j. Empty if none.
std::optional<std::size_t> choose_layer(const LayerPlan& plan, std::size_t available);

} // namespace flexcode
