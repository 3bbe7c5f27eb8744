// SPDX-License-Identifier: Apache-2.0
#include "flexcode/pmds.hpp"

#include "flexcode/errors.hpp"
#include "flexcode/mds.hpp"

namespace flexcode {

GabidulinCode make_gabidulin(FieldPtr field, std::shared_ptr<const Embedding> base, std::size_t N, std::size_t K) {
    if (K == 0 || K > N) throw std::invalid_argument("Gabidulin code needs 0 < K <= N");
    GabidulinCode code;
    code.q = base->sub_order();
    const std::size_t v = base->sub()->degree();
    if (field->degree() < v * N)
        throw FieldError(field->name() + " is too small for " + std::to_string(N) + " independent points");
    code.field = std::move(field);
    code.base = std::move(base);
    code.N = N;
    code.K = K;
    for (std::size_t i = 0; i < N; ++i) code.points.push_back(code.field->exp(i));
    if (rank_over_base(code.points, *code.base) != N)
        throw FieldError("evaluation points are not independent over the base field");
    return code;
}

Elem linearized_eval(const GabidulinCode& code, std::span<const Elem> u, Elem x) {
    const Field& f = *code.field;
    Elem acc = 0;
    Elem xp = x; // x^(q^i)
    for (std::size_t i = 0; i < u.size(); ++i) {
        acc = f.add(acc, f.mul(u[i], xp));
        xp = f.pow(xp, code.q);
    }
    return acc;
}

std::vector<Elem> gabidulin_encode(std::span<const Elem> u, const GabidulinCode& code) {
    if (u.size() != code.K) throw std::invalid_argument("Gabidulin message must have K symbols");
    std::vector<Elem> out;
    out.reserve(code.N);
    for (Elem a : code.points) out.push_back(linearized_eval(code, u, a));
    return out;
}

std::vector<Elem> gabidulin_erasure_decode(std::span<const std::pair<Elem, Elem>> pairs, const GabidulinCode& code) {
    std::vector<Elem> pts;
    std::vector<Elem> vals;
    for (const auto& [x, y] : pairs) {
        if (pts.size() == code.K) break;
        pts.push_back(x);
        if (rank_over_base(pts, *code.base) < pts.size()) {
            pts.pop_back();
            continue;
        }
        vals.push_back(y);
    }
    if (pts.size() < code.K)
        throw DecodeError("only " + std::to_string(pts.size()) + " of " + std::to_string(code.K) +
                          " independent evaluations available");
    const Field& f = *code.field;
    Matrix moore(code.field, code.K, code.K);
    Matrix rhs(code.field, code.K, 1);
    for (std::size_t r = 0; r < code.K; ++r) {
        Elem xp = pts[r];
        for (std::size_t i = 0; i < code.K; ++i) {
            moore(r, i) = xp;
            xp = f.pow(xp, code.q);
        }
        rhs(r, 0) = vals[r];
    }
    Matrix u;
    try {
        u = solve_linear(moore, rhs);
    } catch (const SingularMatrixError& e) {
        throw DecodeError(e.what());
    }
    std::vector<Elem> out;
    for (std::size_t i = 0; i < code.K; ++i) out.push_back(u(i, 0));
    return out;
}

Matrix gfq_mds_parity(FieldPtr fq, std::size_t n, std::size_t k) {
    if (k == 0 || k > n) throw std::invalid_argument("MDS dimension out of range");
    if (k == n) return Matrix(fq, k, 0);
    if (k == n - 1 || k == 1) {
        Matrix p(fq, k, n - k);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < n - k; ++c) p(r, c) = 1;
        return p;
    }
    if (fq->order() + 1 < n)
        throw FieldError(fq->name() + " admits no (" + std::to_string(n) + ", " + std::to_string(k) + ") MDS code");
    // Doubly-extended RS: finite points 0, 1, g, ... then the point at infinity.
    const std::size_t finite = std::min<std::size_t>(n, fq->order());
    const auto pts = rs_points(*fq, finite);
    Matrix g(fq, k, n);
    g.set_submatrix(0, 0, vandermonde(fq, pts, k));
    if (finite < n) g(k - 1, n - 1) = 1;
    const Matrix sys = inverse(g.submatrix(0, 0, k, k)) * g;
    return sys.submatrix(0, k, k, n - k);
}

std::uint32_t pmds_base_degree(const FlexProfile& profile) {
    bool trivial = true;
    for (const auto& t : profile.tuples)
        if (!(t.k == 1 || t.k + 1 >= profile.n)) trivial = false;
    if (trivial) return 1;
    std::uint32_t w = 1;
    while ((std::uint64_t{1} << w) + 1 < profile.n) ++w;
    return w;
}

PmdsCode make_flex_pmds(const FlexProfile& profile) {
    if (profile.family != Family::Pmds) throw ProfileError(ProfileErrorKind::Unsupported, "profile is not PMDS");
    PmdsCode code;
    code.plan = validate_profile(profile);
    std::size_t N = 0;
    for (const auto& geo : code.plan.layers) N += geo.dimension * geo.rows();
    const std::size_t K = profile.k * profile.ell - profile.symbol_erasures;
    const std::uint32_t v = pmds_base_degree(profile);
    if (v * N > 32)
        throw ProfileError(ProfileErrorKind::Unsupported,
                           "GF(2^" + std::to_string(v * N) + ") exceeds the supported field size");
    code.fq = Field::binary(v);
    auto big = Field::binary(static_cast<std::uint32_t>(v * N));
    code.gab = make_gabidulin(big, std::make_shared<Embedding>(code.fq, big), N, K);
    std::size_t offset = 0;
    for (std::size_t j = 1; j <= code.plan.layer_count(); ++j) {
        const auto& geo = code.plan.layer(j);
        code.parity.push_back(gfq_mds_parity(code.fq, profile.n, geo.dimension));
        for (std::size_t r = geo.row_begin; r < geo.row_end; ++r) {
            code.coord_offset.push_back(offset);
            offset += geo.dimension;
        }
    }
    return code;
}

PmdsCode make_table3_code() { return make_flex_pmds(make_profile(Family::Pmds, 5, {{4, 3}, {3, 4}}, 0, 2)); }

CodewordArray flex_pmds_encode(std::span<const Elem> info, const PmdsCode& code) {
    const auto& p = code.plan.profile;
    const auto c = gabidulin_encode(info, code.gab);
    const Field& F = *code.gab.field;
    const Embedding& emb = *code.gab.base;
    CodewordArray arr(p.ell, p.n, 1);
    for (std::size_t row = 0; row < p.ell; ++row) {
        const std::size_t j = code.plan.layer_of_row(row);
        const std::size_t kj = code.plan.layer(j).dimension;
        const Matrix& P = code.parity[j - 1];
        for (std::size_t i = 0; i < kj; ++i) arr.at(row, i)[0] = c[code.coord_offset[row] + i];
        for (std::size_t t = 0; t < P.cols(); ++t) {
            Elem acc = 0;
            for (std::size_t i = 0; i < kj; ++i)
                acc = F.add(acc, F.mul(emb.embed(P(i, t)), c[code.coord_offset[row] + i]));
            arr.at(row, kj + t)[0] = acc;
        }
    }
    return arr;
}

std::vector<Elem> flex_pmds_decode(const SymbolReads& surviving, std::size_t J, const PmdsCode& code) {
    const auto& p = code.plan.profile;
    if (J < 1 || J > code.plan.layer_count()) throw std::out_of_range("decode layer out of range");
    const std::size_t rows = p.tuples[J - 1].ell;
    const Field& F = *code.gab.field;
    const Embedding& emb = *code.gab.base;
    std::vector<std::pair<Elem, Elem>> pairs;
    for (const auto& [pos, value] : surviving) {
        const auto [row, node] = pos;
        if (row >= rows) throw DecodeError("symbol in row " + std::to_string(row + 1) + " lies outside the first " +
                                           std::to_string(rows) + " rows");
        if (node >= p.n) throw std::out_of_range("node index out of range");
        const std::size_t j = code.plan.layer_of_row(row);
        const std::size_t kj = code.plan.layer(j).dimension;
        const Matrix& P = code.parity[j - 1];
        // The symbol is f evaluated at the GF(q)-combination of its row's points.
        Elem point = 0;
        for (std::size_t i = 0; i < kj; ++i) {
            const Elem coeff = node < kj ? (i == node ? 1 : 0) : P(i, node - kj);
            if (coeff) point = F.add(point, F.mul(emb.embed(coeff), code.gab.points[code.coord_offset[row] + i]));
        }
        pairs.emplace_back(point, value);
    }
    return gabidulin_erasure_decode(pairs, code.gab);
}

} // namespace flexcode
