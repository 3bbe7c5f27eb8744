// SPDX-License-Identifier: Apache-2.0
#include "flexcode/codec.hpp"

#include "flexcode/errors.hpp"
#include "flexcode/mds.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace flexcode {

using nlohmann::json;

namespace {

std::size_t get_size(const json& doc, const char* key, std::size_t fallback = 0) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw std::invalid_argument(std::string("'") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

CoefficientStrategy strategy_from_string(const std::string& s) {
    if (s == "per-layer") return CoefficientStrategy::PerLayer;
    if (s == "per-row") return CoefficientStrategy::PerRow;
    throw std::invalid_argument("unknown coefficient strategy '" + s + "'");
}

const char* strategy_name(CoefficientStrategy s) {
    return s == CoefficientStrategy::PerLayer ? "per-layer" : "per-row";
}

} // namespace

json field_to_json(const FieldSpec& f) { return json{{"p", f.p}, {"w", f.w}, {"modulus", f.modulus}}; }

FieldSpec field_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("'field' must be an object");
    FieldSpec f;
    f.p = static_cast<std::uint32_t>(get_size(doc, "p", 2));
    f.w = static_cast<std::uint32_t>(get_size(doc, "w", 8));
    if (doc.contains("modulus")) f.modulus = doc.at("modulus").get<std::vector<std::uint32_t>>();
    return f;
}

json profile_to_json(const FlexProfile& p) {
    json layers = json::array();
    for (const auto& t : p.tuples) layers.push_back({{"R", t.R}, {"k", t.k}, {"ell", t.ell}});
    json doc{{"family", to_string(p.family)}, {"n", p.n}, {"k", p.k}, {"ell", p.ell}, {"layers", layers}};
    if (p.family == Family::Lrc) doc["locality"] = p.locality;
    if (p.family == Family::Pmds) doc["symbol_erasures"] = p.symbol_erasures;
    return doc;
}

FlexProfile profile_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("profile must be an object");
    if (!doc.contains("family")) throw std::invalid_argument("profile needs 'family'");
    const Family family = family_from_string(doc.at("family").get<std::string>());
    if (!doc.contains("layers") || !doc.at("layers").is_array())
        throw std::invalid_argument("profile needs a 'layers' array");
    std::vector<std::pair<std::size_t, std::size_t>> k_ell;
    std::vector<std::optional<std::size_t>> given_R;
    for (const auto& l : doc.at("layers")) {
        k_ell.emplace_back(get_size(l, "k"), get_size(l, "ell"));
        given_R.push_back(l.contains("R") ? std::optional(get_size(l, "R")) : std::nullopt);
    }
    FlexProfile p;
    const std::size_t n = get_size(doc, "n");
    const std::size_t locality = get_size(doc, "locality");
    const std::size_t s = get_size(doc, "symbol_erasures");
    if (family == Family::Lrc && locality == 0)
        throw ProfileError(ProfileErrorKind::Range, "LRC profile needs a positive 'locality'");
    p = make_profile(family, n, k_ell, locality, s);
    for (std::size_t i = 0; i < given_R.size(); ++i)
        if (given_R[i]) p.tuples[i].R = *given_R[i];
    // (n, k, ell) default to the last layer; explicit values are checked by validate_profile.
    p.k = get_size(doc, "k", p.k);
    p.ell = get_size(doc, "ell", p.ell);
    return p;
}

CodeConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("profile config must be a JSON object");
    CodeConfig cfg;
    if (doc.contains("fixture")) {
        cfg.fixture = doc.at("fixture").get<std::string>();
        return cfg;
    }
    cfg.profile = profile_from_json(doc);
    if (doc.contains("field")) cfg.field = field_from_json(doc.at("field"));
    if (doc.contains("coefficients")) cfg.coefficients = strategy_from_string(doc.at("coefficients").get<std::string>());
    return cfg;
}

json config_to_json(const CodeConfig& cfg) {
    if (cfg.fixture) return json{{"fixture", *cfg.fixture}};
    json doc = profile_to_json(cfg.profile);
    if (cfg.field) doc["field"] = field_to_json(*cfg.field);
    if (cfg.profile.family == Family::Msr) doc["coefficients"] = strategy_name(cfg.coefficients);
    return doc;
}

FlexCode FlexCode::build(const CodeConfig& cfg) {
    FlexCode c;
    c.fixture_ = cfg.fixture;
    if (cfg.fixture) {
        const auto& name = *cfg.fixture;
        if (name == "fig1") {
            c.mds_ = std::make_shared<LayeredCode>(make_fig1_code());
        } else if (name == "example3") {
            c.lrc_ = std::make_shared<LrcCode>(make_example3_code());
        } else if (name == "table3") {
            c.pmds_ = std::make_shared<PmdsCode>(make_table3_code());
        } else if (name == "example4") {
            c.msr_ = std::make_shared<MsrCode>(make_example4_code());
        } else {
            throw std::invalid_argument("unknown fixture '" + name + "'");
        }
    } else {
        const FieldPtr field = cfg.field ? cfg.field->make() : nullptr;
        switch (cfg.profile.family) {
        case Family::Mds: c.mds_ = std::make_shared<LayeredCode>(make_flex_mds(cfg.profile, field)); break;
        case Family::Lrc: c.lrc_ = std::make_shared<LrcCode>(make_flex_lrc(cfg.profile, field)); break;
        case Family::Pmds: c.pmds_ = std::make_shared<PmdsCode>(make_flex_pmds(cfg.profile)); break;
        case Family::Msr:
            c.msr_ = std::make_shared<MsrCode>(make_flex_msr(cfg.profile, cfg.coefficients, nullptr, field));
            break;
        }
    }
    if (c.mds_) {
        c.field_ = std::dynamic_pointer_cast<const SystematicLinearRowCode>(c.mds_->rows.at(0))->field();
    } else if (c.lrc_) {
        c.field_ = c.lrc_->layout.field;
    } else if (c.pmds_) {
        c.field_ = c.pmds_->gab.field;
    } else {
        c.field_ = c.msr_->field;
        c.block_ = c.msr_->L;
    }
    if (cfg.field && !cfg.fixture && !(FieldSpec::of(*c.field_).p == cfg.field->p &&
                                       FieldSpec::of(*c.field_).w == cfg.field->w))
        throw FieldError("this family fixes its field to " + c.field_->name());
    return c;
}

const LayeredCode* FlexCode::layered() const {
    if (mds_) return mds_.get();
    if (lrc_) return &lrc_->layered;
    if (msr_) return &msr_->layered;
    return nullptr;
}

const LayerPlan& FlexCode::plan() const {
    if (pmds_) return pmds_->plan;
    return layered()->plan;
}

std::size_t FlexCode::info_elements() const {
    if (pmds_) return pmds_->K();
    const auto& p = plan().profile;
    return p.k * p.ell * block_;
}

std::size_t FlexCode::bits_per_element() const { return static_cast<std::size_t>(std::bit_width(field_->order()) - 1); }

CodewordArray FlexCode::encode(std::span<const Elem> info) const {
    if (info.size() != info_elements()) throw std::invalid_argument("wrong number of information elements");
    if (pmds_) return flex_pmds_encode(info, *pmds_);
    std::vector<Symbol> syms;
    for (std::size_t i = 0; i < info.size(); i += block_) syms.emplace_back(info.begin() + i, info.begin() + i + block_);
    return layered_encode(syms, *layered());
}

std::vector<Elem> FlexCode::decode(const NodeReads& nodes, std::size_t j) const {
    if (pmds_) {
        const std::size_t rows = pmds_->plan.layer(j).row_end;
        SymbolReads reads;
        for (const auto& [node, syms] : nodes) {
            if (syms.size() < rows) throw DecodeError("node " + std::to_string(node) + " supplied too few symbols");
            for (std::size_t r = 0; r < rows; ++r) reads[{r, node}] = syms[r].at(0);
        }
        return flex_pmds_decode(reads, j, *pmds_);
    }
    std::vector<Elem> out;
    for (const auto& s : layered_decode(nodes, j, *layered())) out.insert(out.end(), s.begin(), s.end());
    return out;
}

std::vector<std::vector<Elem>> bytes_to_stripes(std::span<const std::uint8_t> bytes, std::size_t elements,
                                                std::size_t bits) {
    if (elements == 0 || bits == 0 || bits > 64) throw std::invalid_argument("bad stripe geometry");
    const std::size_t total_bits = bytes.size() * 8;
    const std::size_t per_stripe = elements * bits;
    const std::size_t stripes = std::max<std::size_t>(1, (total_bits + per_stripe - 1) / per_stripe);
    std::vector<std::vector<Elem>> out(stripes, std::vector<Elem>(elements, 0));
    std::size_t bit = 0;
    for (auto& stripe : out)
        for (auto& e : stripe)
            for (std::size_t b = 0; b < bits; ++b, ++bit) {
                const std::uint64_t v = bit < total_bits ? (bytes[bit / 8] >> (7 - bit % 8)) & 1u : 0;
                e = (e << 1) | v;
            }
    return out;
}

std::vector<std::uint8_t> stripes_to_bytes(const std::vector<std::vector<Elem>>& stripes, std::size_t bits,
                                           std::size_t length) {
    std::vector<std::uint8_t> out(length, 0);
    std::size_t bit = 0;
    for (const auto& stripe : stripes)
        for (Elem e : stripe)
            for (std::size_t b = bits; b-- > 0; ++bit) {
                if (bit >= length * 8) return out;
                if ((e >> b) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
            }
    if (bit < length * 8) throw DecodeError("stripes hold fewer bytes than the recorded length");
    return out;
}

std::optional<std::size_t> choose_layer(const LayerPlan& plan, std::size_t available) {
    std::optional<std::size_t> best;
    std::size_t best_cost = 0;
    const auto& tuples = plan.profile.tuples;
    for (std::size_t j = 1; j <= tuples.size(); ++j) {
        const auto& t = tuples[j - 1];
        if (t.R > available) continue;
        const std::size_t cost = t.R * t.ell;
        if (!best || cost < best_cost) {
            best = j;
            best_cost = cost;
        }
    }
    return best;
}

} // namespace flexcode
