// SPDX-License-Identifier: Apache-2.0
#include "flexcode/lrc.hpp"

#include "flexcode/errors.hpp"
#include "flexcode/linalg.hpp"

#include <algorithm>

namespace flexcode {

namespace {

std::size_t extra_groups_needed(const FlexProfile& p) { return (p.tuples.front().k - p.k) / p.locality; }

bool admits_layout(const Field& f, const FlexProfile& p) {
    const std::uint64_t units = f.order() - 1;
    const std::size_t g = p.locality + 1;
    if (units % g != 0) return false;
    return units / g >= p.n / g + extra_groups_needed(p);
}

bool is_prime(std::uint32_t v) {
    if (v < 2) return false;
    for (std::uint32_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

} // namespace

LrcLayout build_layout(FieldPtr field, const FlexProfile& profile) {
    if (profile.family != Family::Lrc) throw ProfileError(ProfileErrorKind::Unsupported, "profile is not LRC");
    const std::size_t r = profile.locality;
    const std::size_t g = r + 1;
    const std::uint64_t units = field->order() - 1;
    if (units % g != 0)
        throw FieldError(field->name() + " has no multiplicative subgroup of order " + std::to_string(g));
    const std::size_t cosets = units / g;
    const std::size_t need = profile.n / g + extra_groups_needed(profile);
    if (cosets < need)
        throw FieldError(field->name() + " has " + std::to_string(cosets) + " cosets, need " + std::to_string(need));

    LrcLayout lay;
    lay.field = field;
    lay.r = r;
    lay.stored_groups = profile.n / g;
    const Field& f = *field;
    const Elem h = f.exp(cosets); // generator of the order-(r+1) subgroup
    for (std::size_t m = 0; m < need; ++m) {
        const Elem rep = f.exp(m);
        std::vector<Elem> grp;
        Elem cur = rep;
        for (std::size_t i = 0; i < g; ++i) {
            grp.push_back(cur);
            cur = f.mul(cur, h);
        }
        lay.groups.push_back(std::move(grp));
    }
    return lay;
}

FieldPtr default_lrc_field(const FlexProfile& profile) {
    if (profile.locality == 0) throw ProfileError(ProfileErrorKind::Range, "LRC needs a positive locality r");
    if ((profile.locality + 1) % 2 == 1) {
        for (std::uint32_t w = 2; w <= 32; ++w) {
            auto f = Field::binary(w);
            if (admits_layout(*f, profile)) return f;
        }
    }
    for (std::uint32_t p = 3; p < 65536; ++p) {
        if (!is_prime(p)) continue;
        auto f = Field::make(p, 1);
        if (admits_layout(*f, profile)) return f;
    }
    throw FieldError("no supported field admits this LRC layout");
}

LrcRowCode::LrcRowCode(const LrcLayout& layout, std::size_t k, std::size_t n, std::size_t extra_groups)
    : field_(layout.field), r_(layout.r), k_(k), n_(n) {
    if (k % r_ != 0) throw std::invalid_argument("r must divide the row dimension");
    if (layout.stored_groups + extra_groups > layout.groups.size())
        throw std::invalid_argument("layout has too few groups");
    for (std::size_t c = 0; c < n; ++c) points_.push_back(layout.node_point(c));
    for (std::size_t e = 0; e < extra_groups; ++e) {
        const auto& grp = layout.groups[layout.stored_groups + e];
        for (std::size_t i = 0; i < r_; ++i) points_.push_back(grp[i]);
        omitted_.push_back(grp[r_]);
    }
}

Elem LrcRowCode::basis(std::size_t i, Elem x) const {
    const std::size_t per = k_ / r_;
    const std::size_t b = i / per;
    const std::size_t c = i % per;
    return field_->pow(x, b + (r_ + 1) * c);
}

Elem LrcRowCode::evaluate(std::span<const Elem> message, Elem x) const {
    Elem acc = 0;
    for (std::size_t i = 0; i < k_; ++i) acc = field_->add(acc, field_->mul(message[i], basis(i, x)));
    return acc;
}

std::vector<Symbol> LrcRowCode::encode(std::span<const Symbol> message) const {
    if (message.size() != k_) throw std::invalid_argument("row message has wrong length");
    std::vector<Elem> u;
    for (const auto& s : message) {
        if (!field_->contains(s.at(0))) throw FieldError("message symbol outside " + field_->name());
        u.push_back(s.at(0));
    }
    std::vector<Symbol> out;
    out.reserve(points_.size());
    for (Elem x : points_) out.push_back({evaluate(u, x)});
    return out;
}

std::vector<Symbol> LrcRowCode::decode(std::span<const std::optional<Symbol>> received) const {
    if (received.size() != length()) throw std::invalid_argument("received word has wrong length");
    std::vector<Elem> xs, ys;
    for (std::size_t i = 0; i < received.size(); ++i)
        if (received[i]) {
            xs.push_back(points_[i]);
            ys.push_back((*received[i])[0]);
        }
    for (std::size_t e = 0; e < omitted_.size(); ++e) {
        const std::size_t base = n_ + e * r_;
        bool complete = true;
        std::vector<Elem> gx, gy;
        for (std::size_t i = 0; i < r_; ++i) {
            if (!received[base + i]) {
                complete = false;
                break;
            }
            gx.push_back(points_[base + i]);
            gy.push_back((*received[base + i])[0]);
        }
        if (!complete) continue;
        xs.push_back(omitted_[e]);
        ys.push_back(lagrange_eval(*field_, gx, gy, omitted_[e]));
    }
    if (xs.size() < k_) throw DecodeError("only " + std::to_string(xs.size()) + " evaluations known");
    Matrix a(field_, xs.size(), k_);
    Matrix b(field_, xs.size(), 1);
    for (std::size_t row = 0; row < xs.size(); ++row) {
        for (std::size_t i = 0; i < k_; ++i) a(row, i) = basis(i, xs[row]);
        b(row, 0) = ys[row];
    }
    Matrix u;
    try {
        u = solve_linear(a, b);
    } catch (const SingularMatrixError& e) {
        throw DecodeError(e.what());
    }
    std::vector<Symbol> msg;
    for (std::size_t i = 0; i < k_; ++i) msg.push_back({u(i, 0)});
    return msg;
}

LrcCode make_flex_lrc(const FlexProfile& profile, FieldPtr field) {
    LrcCode code;
    code.layered.plan = validate_profile(profile);
    if (profile.family != Family::Lrc) throw ProfileError(ProfileErrorKind::Unsupported, "profile is not LRC");
    if (!field) field = default_lrc_field(profile);
    code.layout = build_layout(field, profile);
    code.layered.symbol_width = 1;
    const auto& plan = code.layered.plan;
    for (std::size_t j = 1; j <= plan.layer_count(); ++j) {
        const auto& geo = plan.layer(j);
        auto row = std::make_shared<LrcRowCode>(code.layout, geo.dimension, profile.n, geo.extras / profile.locality);
        for (std::size_t r = geo.row_begin; r < geo.row_end; ++r) code.layered.rows.push_back(row);
    }
    return code;
}

LrcCode make_example3_code() {
    return make_flex_lrc(make_profile(Family::Lrc, 12, {{6, 2}, {4, 3}}, 2), Field::binary(4));
}

Elem lagrange_eval(const Field& f, std::span<const Elem> pts, std::span<const Elem> vals, Elem x) {
    Elem acc = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Elem num = 1, den = 1;
        for (std::size_t m = 0; m < pts.size(); ++m) {
            if (m == i) continue;
            num = f.mul(num, f.sub(x, pts[m]));
            den = f.mul(den, f.sub(pts[i], pts[m]));
        }
        acc = f.add(acc, f.mul(vals[i], f.div(num, den)));
    }
    return acc;
}

LocalRepair local_repair(const std::map<std::size_t, std::vector<Elem>>& available, std::size_t failed,
                         const LrcCode& code) {
    const auto& lay = code.layout;
    const auto& p = code.layered.plan.profile;
    if (failed >= p.n) throw std::out_of_range("failed node out of range");
    const std::size_t g = lay.group_of_node(failed);
    LocalRepair out;
    std::vector<Elem> pts;
    for (std::size_t i = 0; i <= lay.r; ++i) {
        const std::size_t node = g * (lay.r + 1) + i;
        if (node == failed) continue;
        auto it = available.find(node);
        if (it == available.end() || it->second.size() < p.ell)
            throw DecodeError("group peer " + std::to_string(node) + " of node " + std::to_string(failed) +
                              " is unavailable");
        out.helpers.push_back(node);
        pts.push_back(lay.node_point(node));
    }
    const Elem target = lay.node_point(failed);
    for (std::size_t row = 0; row < p.ell; ++row) {
        std::vector<Elem> vals;
        for (auto node : out.helpers) vals.push_back(available.at(node)[row]);
        out.symbols.push_back(lagrange_eval(*lay.field, pts, vals, target));
    }
    out.symbols_read = out.helpers.size() * p.ell;
    return out;
}

LocalRepair local_repair(const CodewordArray& arr, std::size_t failed, const LrcCode& code) {
    std::map<std::size_t, std::vector<Elem>> available;
    for (std::size_t c = 0; c < arr.cols; ++c) {
        if (c == failed) continue;
        std::vector<Elem> col;
        for (std::size_t r = 0; r < arr.rows; ++r) col.push_back(arr.at(r, c).at(0));
        available[c] = std::move(col);
    }
    return local_repair(available, failed, code);
}

} // namespace flexcode
