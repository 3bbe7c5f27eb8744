// SPDX-License-Identifier: Apache-2.0
#include "flexcode/layered.hpp"

#include "flexcode/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace flexcode {

const char* to_string(Family f) {
    switch (f) {
    case Family::Mds: return "mds";
    case Family::Lrc: return "lrc";
    case Family::Pmds: return "pmds";
    case Family::Msr: return "msr";
    }
    return "?";
}

Family family_from_string(const std::string& s) {
    if (s == "mds") return Family::Mds;
    if (s == "lrc") return Family::Lrc;
    if (s == "pmds") return Family::Pmds;
    if (s == "msr") return Family::Msr;
    throw ProfileError(ProfileErrorKind::Unsupported, "unknown family '" + s + "'");
}

FlexProfile make_profile(Family family, std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> k_ell,
                         std::size_t locality, std::size_t symbol_erasures) {
    FlexProfile p;
    p.n = n;
    p.family = family;
    p.locality = locality;
    p.symbol_erasures = symbol_erasures;
    for (auto [k, ell] : k_ell) {
        std::size_t R = k;
        if (family == Family::Lrc && locality > 0) R = k + k / locality - 1;
        p.tuples.push_back({R, k, ell});
    }
    if (!k_ell.empty()) {
        p.k = k_ell.back().first;
        p.ell = k_ell.back().second;
    }
    return p;
}

std::size_t LayerPlan::layer_of_row(std::size_t row) const {
    for (std::size_t j = 0; j < layers.size(); ++j)
        if (row < layers[j].row_end) return j + 1;
    throw std::out_of_range("row beyond the last layer");
}

LayerPlan validate_profile(const FlexProfile& p) {
    using K = ProfileErrorKind;
    const auto& t = p.tuples;
    if (t.empty()) throw ProfileError(K::Empty, "no (R, k, l) tuples");
    if (p.n == 0 || p.k == 0 || p.ell == 0) throw ProfileError(K::Range, "n, k and l must be positive");
    for (const auto& tu : t) {
        if (tu.k == 0 || tu.ell == 0) throw ProfileError(K::Range, "k_j and l_j must be positive");
        if (tu.k > p.n || tu.R > p.n) throw ProfileError(K::Range, "k_j and R_j must not exceed n");
    }
    const std::size_t kl = p.k * p.ell;
    for (std::size_t j = 0; j < t.size(); ++j)
        if (t[j].k * t[j].ell != kl)
            throw ProfileError(K::ProductMismatch, "layer " + std::to_string(j + 1) + ": " + std::to_string(t[j].k) +
                                                       "*" + std::to_string(t[j].ell) + " != " + std::to_string(kl));
    for (std::size_t j = 1; j < t.size(); ++j) {
        if (t[j].k >= t[j - 1].k) throw ProfileError(K::NonMonotoneK, "layer " + std::to_string(j + 1));
        if (t[j].ell <= t[j - 1].ell) throw ProfileError(K::NonMonotoneEll, "layer " + std::to_string(j + 1));
    }
    if (t.back().k != p.k || t.back().ell != p.ell)
        throw ProfileError(K::FinalLayerMismatch, "last tuple (" + std::to_string(t.back().k) + ", " +
                                                      std::to_string(t.back().ell) + ")");

    for (std::size_t j = 0; j < t.size(); ++j) {
        std::size_t expected = t[j].k;
        if (p.family == Family::Lrc) {
            if (p.locality == 0) throw ProfileError(K::Range, "LRC needs a positive locality r");
            if (t[j].k % p.locality != 0)
                throw ProfileError(K::Divisibility, "r must divide k_" + std::to_string(j + 1));
            expected = t[j].k + t[j].k / p.locality - 1;
        }
        if (t[j].R != expected)
            throw ProfileError(K::ThresholdMismatch, "layer " + std::to_string(j + 1) + ": R = " +
                                                         std::to_string(t[j].R) + ", expected " +
                                                         std::to_string(expected));
    }
    if (p.family == Family::Lrc && p.n % (p.locality + 1) != 0)
        throw ProfileError(K::Divisibility, "r+1 must divide n");
    if (p.family == Family::Pmds && p.symbol_erasures >= kl)
        throw ProfileError(K::Range, "s must be smaller than k*l");
    if (p.family != Family::Pmds && p.symbol_erasures != 0)
        throw ProfileError(K::Range, "symbol erasures only apply to PMDS");

    LayerPlan plan;
    plan.profile = p;
    std::size_t prev = 0;
    const std::size_t ka = p.k;
    for (const auto& tu : t) {
        LayerGeometry g;
        g.row_begin = prev;
        g.row_end = tu.ell;
        g.dimension = tu.k;
        g.extras = tu.k - ka;
        g.inner_length = p.n + g.extras;
        plan.layers.push_back(g);
        prev = tu.ell;
    }
    // Extras landing in layer j fill exactly its k_j * (l_j - l_{j-1}) message slots.
    for (std::size_t j = 1; j < t.size(); ++j) {
        const std::size_t incoming = (t[j - 1].k - t[j].k) * t[j - 1].ell;
        if (incoming != t[j].k * (t[j].ell - t[j - 1].ell))
            throw std::logic_error("layer counting identity violated");
    }
    return plan;
}

ExtraParityRef extra_parity_target(std::size_t j, std::size_t x, std::size_t y, const LayerPlan& plan) {
    const auto& t = plan.profile.tuples;
    const std::size_t a = t.size();
    if (j < 1 || j >= a) throw std::out_of_range("extra parity source layer out of range");
    const auto& geo = plan.layer(j);
    if (x < 1 || x > geo.rows()) throw std::out_of_range("extra parity row out of range");
    if (y < 1 || y > geo.extras) throw std::out_of_range("extra parity index out of range");
    const std::size_t ka = plan.profile.k;
    std::size_t target = j + 1;
    while (!(y > t[target - 1].k - ka && y <= t[target - 2].k - ka)) ++target;

    const std::size_t k_target = t[target - 1].k;
    const std::size_t span = t[target - 2].k - k_target; // extras per row that land in `target`
    const std::size_t global_row = geo.row_begin + x;    // 1-based
    const std::size_t offset = y - (k_target - ka) - 1;  // 0-based within the span
    const std::size_t linear = (global_row - 1) * span + offset;
    return {{j, x, y}, {target, linear / k_target + 1, linear % k_target + 1}};
}

std::vector<Symbol> CodewordArray::node(std::size_t c) const {
    std::vector<Symbol> out;
    out.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) out.push_back(at(r, c));
    return out;
}

LayeredEncoding layered_encode_full(std::span<const Symbol> info, const LayeredCode& code) {
    const LayerPlan& plan = code.plan;
    const auto& p = plan.profile;
    if (info.size() != p.k * p.ell)
        throw std::invalid_argument("expected " + std::to_string(p.k * p.ell) + " information symbols, got " +
                                    std::to_string(info.size()));
    if (code.rows.size() != p.ell) throw std::invalid_argument("one row codec per row required");
    for (const auto& s : info)
        if (s.size() != code.symbol_width) throw std::invalid_argument("information symbol has wrong width");

    LayeredEncoding enc;
    enc.stored = CodewordArray(p.ell, p.n, code.symbol_width);
    enc.messages.assign(p.ell, {});
    enc.extras.assign(p.ell, {});
    for (std::size_t j = 1; j <= plan.layer_count(); ++j) {
        const auto& geo = plan.layer(j);
        for (std::size_t row = geo.row_begin; row < geo.row_end; ++row)
            enc.messages[row].assign(geo.dimension, Symbol(code.symbol_width, 0));
    }
    const auto& l1 = plan.layer(1);
    for (std::size_t row = 0; row < l1.rows(); ++row)
        for (std::size_t i = 0; i < l1.dimension; ++i) enc.messages[row][i] = info[row * l1.dimension + i];

    for (std::size_t j = 1; j <= plan.layer_count(); ++j) {
        const auto& geo = plan.layer(j);
        for (std::size_t row = geo.row_begin; row < geo.row_end; ++row) {
            const auto& codec = *code.rows[row];
            if (codec.length() != geo.inner_length || codec.dimension() != geo.dimension)
                throw std::invalid_argument("row codec geometry does not match layer " + std::to_string(j));
            auto word = codec.encode(enc.messages[row]);
            for (std::size_t c = 0; c < p.n; ++c) enc.stored.at(row, c) = word[c];
            enc.extras[row].assign(word.begin() + static_cast<std::ptrdiff_t>(p.n), word.end());
            for (std::size_t y = 1; y <= geo.extras; ++y) {
                const auto ref = extra_parity_target(j, row - geo.row_begin + 1, y, plan);
                const std::size_t trow = plan.layer(ref.target.layer).row_begin + ref.target.row - 1;
                enc.messages[trow][ref.target.index - 1] = word[p.n + y - 1];
            }
        }
    }
    return enc;
}

CodewordArray layered_encode(std::span<const Symbol> info, const LayeredCode& code) {
    return layered_encode_full(info, code).stored;
}

std::vector<Symbol> layered_decode(const NodeReads& nodes, std::size_t j, const LayeredCode& code) {
    const LayerPlan& plan = code.plan;
    const auto& p = plan.profile;
    if (j < 1 || j > plan.layer_count()) throw std::out_of_range("decode layer out of range");
    const auto& tuple = p.tuples[j - 1];
    if (nodes.size() < tuple.R)
        throw DecodeError("layer " + std::to_string(j) + " needs " + std::to_string(tuple.R) + " nodes, got " +
                          std::to_string(nodes.size()));
    for (const auto& [node, syms] : nodes) {
        if (node >= p.n) throw std::out_of_range("node index out of range");
        if (syms.size() < tuple.ell)
            throw DecodeError("node " + std::to_string(node) + " supplied fewer than " + std::to_string(tuple.ell) +
                              " symbols");
    }

    std::vector<std::vector<Symbol>> messages(p.ell);
    for (std::size_t layer = j; layer >= 1; --layer) {
        const auto& geo = plan.layer(layer);
        for (std::size_t row = geo.row_begin; row < geo.row_end; ++row) {
            std::vector<std::optional<Symbol>> received(geo.inner_length);
            for (const auto& [node, syms] : nodes) received[node] = syms[row];
            for (std::size_t y = 1; y <= geo.extras; ++y) {
                const auto ref = extra_parity_target(layer, row - geo.row_begin + 1, y, plan);
                if (ref.target.layer > j) continue; // not read
                const std::size_t trow = plan.layer(ref.target.layer).row_begin + ref.target.row - 1;
                received[p.n + y - 1] = messages[trow][ref.target.index - 1];
            }
            try {
                messages[row] = code.rows[row]->decode(received);
            } catch (const std::exception& e) {
                throw DecodeError("layer " + std::to_string(layer) + ", row " + std::to_string(row - geo.row_begin + 1) +
                                  ": " + e.what());
            }
        }
    }
    std::vector<Symbol> info;
    info.reserve(p.k * p.ell);
    const auto& l1 = plan.layer(1);
    for (std::size_t row = 0; row < l1.rows(); ++row)
        for (const auto& s : messages[row]) info.push_back(s);
    return info;
}

NodeReads read_nodes(const CodewordArray& arr, std::span<const std::size_t> nodes, std::size_t rows) {
    NodeReads out;
    for (auto c : nodes) {
        std::vector<Symbol> syms;
        for (std::size_t r = 0; r < rows; ++r) syms.push_back(arr.at(r, c));
        out[c] = std::move(syms);
    }
    return out;
}

} // namespace flexcode
