// SPDX-License-Identifier: Apache-2.0
#include "flexcode/mds.hpp"

#include "flexcode/errors.hpp"

namespace flexcode {

SystematicLinearRowCode::SystematicLinearRowCode(FieldPtr field, Matrix parity)
    : field_(std::move(field)), k_(parity.rows()), parity_(std::move(parity)) {
    if (k_ == 0) throw std::invalid_argument("row code dimension must be positive");
}

Matrix SystematicLinearRowCode::generator() const {
    return Matrix::hstack({Matrix::identity(field_, k_), parity_});
}

std::vector<Symbol> SystematicLinearRowCode::encode(std::span<const Symbol> message) const {
    if (message.size() != k_) throw std::invalid_argument("row message has wrong length");
    const Field& f = *field_;
    std::vector<Symbol> out(length(), Symbol{0});
    for (std::size_t i = 0; i < k_; ++i) {
        if (message[i].size() != 1) throw std::invalid_argument("scalar row code needs width-1 symbols");
        if (!f.contains(message[i][0])) throw FieldError("message symbol outside " + f.name());
        out[i] = message[i];
    }
    for (std::size_t t = 0; t < parity_.cols(); ++t) {
        Elem acc = 0;
        for (std::size_t i = 0; i < k_; ++i) acc = f.add(acc, f.mul(message[i][0], parity_(i, t)));
        out[k_ + t][0] = acc;
    }
    return out;
}

std::vector<Symbol> SystematicLinearRowCode::decode(std::span<const std::optional<Symbol>> received) const {
    if (received.size() != length()) throw std::invalid_argument("received word has wrong length");
    std::vector<std::size_t> known;
    for (std::size_t i = 0; i < received.size(); ++i)
        if (received[i]) known.push_back(i);
    if (known.size() < k_)
        throw DecodeError("only " + std::to_string(known.size()) + " of " + std::to_string(k_) + " symbols known");
    const Matrix g = generator().select_columns(known).transposed();
    Matrix b(field_, known.size(), 1);
    for (std::size_t r = 0; r < known.size(); ++r) b(r, 0) = (*received[known[r]])[0];
    Matrix x;
    try {
        x = solve_linear(g, b);
    } catch (const SingularMatrixError& e) {
        throw DecodeError(e.what());
    }
    std::vector<Symbol> msg(k_);
    for (std::size_t i = 0; i < k_; ++i) msg[i] = {x(i, 0)};
    return msg;
}

std::vector<Elem> rs_points(const Field& field, std::size_t length) {
    if (length > field.order())
        throw FieldError("need " + std::to_string(length) + " distinct points, " + field.name() + " has " +
                         std::to_string(field.order()));
    std::vector<Elem> pts;
    if (length > 0) pts.push_back(0);
    for (std::size_t i = 1; i < length; ++i) pts.push_back(field.exp(i - 1));
    return pts;
}

std::shared_ptr<const SystematicLinearRowCode> rs_row_code(FieldPtr field, std::size_t length, std::size_t k) {
    if (k == 0 || k > length) throw std::invalid_argument("RS dimension out of range");
    const auto pts = rs_points(*field, length);
    const Matrix g = vandermonde(field, pts, k);
    const Matrix sys = inverse(g.submatrix(0, 0, k, k)) * g;
    return std::make_shared<SystematicLinearRowCode>(field, sys.submatrix(0, k, k, length - k));
}

std::vector<Elem> rs_encode_row(std::span<const Elem> info_row, const SystematicLinearRowCode& code) {
    return from_symbols(code.encode(to_symbols(info_row)));
}

FieldPtr default_mds_field(const FlexProfile& profile) {
    const std::size_t need = profile.n + profile.tuples.front().k - profile.k;
    std::uint32_t w = 1;
    while ((std::uint64_t{1} << w) < need) ++w;
    return Field::binary(w);
}

LayeredCode make_flex_mds(const FlexProfile& profile, FieldPtr field) {
    if (profile.family != Family::Mds) throw ProfileError(ProfileErrorKind::Unsupported, "profile is not MDS");
    LayeredCode code;
    code.plan = validate_profile(profile);
    if (!field) field = default_mds_field(profile);
    code.symbol_width = 1;
    for (std::size_t j = 1; j <= code.plan.layer_count(); ++j) {
        const auto& geo = code.plan.layer(j);
        auto row = rs_row_code(field, geo.inner_length, geo.dimension);
        for (std::size_t r = geo.row_begin; r < geo.row_end; ++r) code.rows.push_back(row);
    }
    return code;
}

LayeredCode make_fig1_code() {
    auto f = Field::make(5, 1);
    LayeredCode code;
    code.plan = validate_profile(make_profile(Family::Mds, 4, {{3, 2}, {2, 3}}));
    code.symbol_width = 1;
    auto top = std::make_shared<SystematicLinearRowCode>(f, Matrix::from_rows(f, {{1, 1}, {1, 2}, {1, 3}}));
    auto bottom = std::make_shared<SystematicLinearRowCode>(f, Matrix::from_rows(f, {{1, 1}, {1, 2}}));
    code.rows = {top, top, bottom};
    return code;
}

CodewordArray flex_mds_encode(std::span<const Elem> info, const LayeredCode& code) {
    const auto syms = to_symbols(info);
    return layered_encode(syms, code);
}

std::vector<Elem> flex_mds_decode(const std::map<std::size_t, std::vector<Elem>>& nodes, std::size_t j,
                                  const LayeredCode& code) {
    NodeReads reads;
    for (const auto& [c, vals] : nodes) reads[c] = to_symbols(vals);
    return from_symbols(layered_decode(reads, j, code));
}

std::vector<Symbol> to_symbols(std::span<const Elem> values) {
    std::vector<Symbol> out;
    out.reserve(values.size());
    for (Elem v : values) out.push_back({v});
    return out;
}

std::vector<Elem> from_symbols(std::span<const Symbol> symbols) {
    std::vector<Elem> out;
    out.reserve(symbols.size());
    for (const auto& s : symbols) out.push_back(s.at(0));
    return out;
}

} // namespace flexcode
