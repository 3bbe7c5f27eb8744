// SPDX-License-Identifier: Apache-2.0
//
// Multi-layer framework shared by every flexible code family.
//
// Layer j spans rows (l_{j-1}, l_j] and each of its rows is a codeword of
// an inner (n + k_j - k_a, k_j) code: n stored symbols followed by
// k_j - k_a extra parities. Layer 1 carries the information; the extra
// parities of layer j become the information (message) symbols of lower
// layers j' > j. Decoding with R_j nodes reads the first l_j rows, decodes
// layer j, and walks back up to layer 1 using the recovered extras.

#pragma once

#include "flexcode/field.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace flexcode {

/// One stored or auxiliary symbol: a single field element for scalar
/// codes, a block of L elements for vector (MSR) codes.
using Symbol = std::vector<Elem>;

enum class Family { Mds, Lrc, Pmds, Msr };

const char* to_string(Family f);
Family family_from_string(const std::string& s);

struct LayerTuple {
    std::size_t R = 0;
    std::size_t k = 0;
    std::size_t ell = 0;
    bool operator==(const LayerTuple&) const = default;
};

struct FlexProfile {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t ell = 0;
    std::vector<LayerTuple> tuples;
    Family family = Family::Mds;
    std::size_t locality = 0;        // LRC only
    std::size_t symbol_erasures = 0; // PMDS only

    bool operator==(const FlexProfile&) const = default;
};

/// Profile with R_j derived from the family (k_j, or k_j + k_j/r - 1 for LRC).
FlexProfile make_profile(Family family, std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> k_ell,
                         std::size_t locality = 0, std::size_t symbol_erasures = 0);

struct LayerGeometry {
    std::size_t row_begin = 0; // l_{j-1}, 0-based first row of the layer
    std::size_t row_end = 0;   // l_j
    std::size_t inner_length = 0;
    std::size_t dimension = 0;
    std::size_t extras = 0;
    std::size_t rows() const { return row_end - row_begin; }
};

struct LayerPlan {
    FlexProfile profile;
    std::vector<LayerGeometry> layers;

    std::size_t layer_count() const { return layers.size(); }
    std::size_t n() const { return profile.n; }
    std::size_t total_rows() const { return profile.ell; }
    /// 1-based layer index of a 0-based global row.
    std::size_t layer_of_row(std::size_t row) const;
    const LayerGeometry& layer(std::size_t j) const { return layers.at(j - 1); }
};

/// Checks every profile invariant and derives the layer geometry. Throws
/// ProfileError with a distinct kind per violated rule.
LayerPlan validate_profile(const FlexProfile& profile);

/// Position of one extra parity: (layer, row within layer, index), 1-based.
struct SlotRef {
    std::size_t layer = 0;
    std::size_t row = 0;
    std::size_t index = 0;
    bool operator==(const SlotRef&) const = default;
    auto operator<=>(const SlotRef&) const = default;
};

struct ExtraParityRef {
    SlotRef source; // (j, x, y): y-th extra parity of row x in layer j
    SlotRef target; // (j', x', y'): y'-th message symbol of row x' in layer j'
};

/// Where the extra parity (j, x, y) is re-encoded. Extras of all rows of
/// layers 1..j'-1 that land in layer j' are enumerated row-major by global
/// row, then by y, and laid out row-major over the k_{j'} message slots of
/// layer j'.
ExtraParityRef extra_parity_target(std::size_t j, std::size_t x, std::size_t y, const LayerPlan& plan);

/// Inner code of one row. Positions 0..n-1 are the stored nodes, n..n+e-1
/// the extra parities.
class RowCodec {
public:
    virtual ~RowCodec() = default;
    virtual std::size_t length() const = 0;
    virtual std::size_t dimension() const = 0;
    virtual std::size_t symbol_width() const = 0;
    /// Full inner codeword for `dimension()` message symbols.
    virtual std::vector<Symbol> encode(std::span<const Symbol> message) const = 0;
    /// Message from the known positions. Throws DecodeError when they do not
    /// determine it.
    virtual std::vector<Symbol> decode(std::span<const std::optional<Symbol>> received) const = 0;
};

using RowCodecPtr = std::shared_ptr<const RowCodec>;

/// The stored ell x n array.
struct CodewordArray {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Symbol> cells; // row-major

    CodewordArray() = default;
    CodewordArray(std::size_t r, std::size_t c, std::size_t width)
        : rows(r), cols(c), cells(r * c, Symbol(width, 0)) {}

    Symbol& at(std::size_t r, std::size_t c) { return cells[r * cols + c]; }
    const Symbol& at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
    /// All symbols of one node (column), top to bottom.
    std::vector<Symbol> node(std::size_t c) const;
    bool operator==(const CodewordArray&) const = default;
};

/// Plan plus one inner codec per global row.
struct LayeredCode {
    LayerPlan plan;
    std::vector<RowCodecPtr> rows;
    std::size_t symbol_width = 1;
};

/// Per-row message symbols produced while encoding; exposed for tests and
/// for codes (MSR repair) that need to trace extras.
struct LayeredEncoding {
    CodewordArray stored;
    std::vector<std::vector<Symbol>> messages; // per global row
    std::vector<std::vector<Symbol>> extras;   // per global row
};

LayeredEncoding layered_encode_full(std::span<const Symbol> info, const LayeredCode& code);

CodewordArray layered_encode(std::span<const Symbol> info, const LayeredCode& code);

/// Node contents available to a decoder: node index -> its first l_j symbols.
using NodeReads = std::map<std::size_t, std::vector<Symbol>>;

/// Decodes from at least R_j nodes, each supplying its first l_j symbols.
/// Returns the k*l information symbols.
std::vector<Symbol> layered_decode(const NodeReads& nodes, std::size_t j, const LayeredCode& code);

/// First ell_j symbols of the given nodes, ready for layered_decode.
NodeReads read_nodes(const CodewordArray& arr, std::span<const std::size_t> nodes, std::size_t rows);

} // namespace flexcode
