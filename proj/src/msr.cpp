// SPDX-License-Identifier: Apache-2.0
#include "flexcode/msr.hpp"

#include "flexcode/errors.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace flexcode {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t v = 1;
    while (e--) v *= b;
    return v;
}

Matrix block_vector(const FieldPtr& f, std::span<const Symbol> blocks, std::size_t L) {
    Matrix m(f, blocks.size() * L, 1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].size() != L) throw std::invalid_argument("block symbol has wrong width");
        for (std::size_t t = 0; t < L; ++t) m(b * L + t, 0) = blocks[b][t];
    }
    return m;
}

Symbol column_to_symbol(const Matrix& m, std::size_t offset, std::size_t L) {
    Symbol s(L);
    for (std::size_t t = 0; t < L; ++t) s[t] = m(offset + t, 0);
    return s;
}

Matrix negated(const Matrix& m) { return m.scaled(m.field()->neg(1)); }

// Node (0-based) whose h-column sits at column c of a row's check matrix.
std::size_t column_node(const LayerPlan& plan, std::size_t row, std::size_t c) {
    const std::size_t n = plan.n();
    if (c < n) return c;
    const std::size_t j = plan.layer_of_row(row);
    const auto& geo = plan.layer(j);
    return extra_parity_target(j, row - geo.row_begin + 1, c - n + 1, plan).target.index - 1;
}

// Global row of the target of extra column c in `row`.
std::size_t column_row(const LayerPlan& plan, std::size_t row, std::size_t c) {
    if (c < plan.n()) return row;
    const std::size_t j = plan.layer_of_row(row);
    const auto& geo = plan.layer(j);
    const auto ref = extra_parity_target(j, row - geo.row_begin + 1, c - plan.n() + 1, plan);
    return plan.layer(ref.target.layer).row_begin + ref.target.row - 1;
}

// Per-row check matrices: column c is colfn(node, coefficient of the row that owns it).
std::vector<Matrix> assemble_checks(const LayerPlan& plan, const std::vector<Elem>& coefficient,
                                    const std::function<Matrix(std::size_t, Elem)>& colfn) {
    std::vector<Matrix> out;
    for (std::size_t row = 0; row < plan.total_rows(); ++row) {
        const auto& geo = plan.layer(plan.layer_of_row(row));
        std::vector<Matrix> cols;
        for (std::size_t c = 0; c < geo.inner_length; ++c)
            cols.push_back(colfn(column_node(plan, row, c), coefficient[column_row(plan, row, c)]));
        out.push_back(Matrix::hstack(cols));
    }
    return out;
}

void attach_rows(MsrCode& code) {
    code.layered.symbol_width = code.L;
    code.layered.rows.clear();
    for (std::size_t row = 0; row < code.H.size(); ++row) {
        const auto& geo = code.layered.plan.layer(code.layered.plan.layer_of_row(row));
        code.layered.rows.push_back(std::make_shared<MsrRowCode>(code.H[row], code.L, geo.dimension));
    }
}

void add_violation(AuditReport& rep, std::string msg) {
    if (rep.violations.size() < 32) rep.violations.push_back(std::move(msg));
}

} // namespace

std::size_t YeBargSpec::digit(std::size_t z, std::size_t i) const { return (z / ipow(r, i - 1)) % r; }

std::vector<Elem> YeBargSpec::a_diagonal(std::size_t i) const {
    std::vector<Elem> d(L);
    for (std::size_t z = 0; z < L; ++z) d[z] = embedding->embed(lambda[i - 1][digit(z, i)]);
    return d;
}

Matrix YeBargSpec::d_matrix(std::size_t star) const {
    Matrix d(F, L / r, L);
    const std::size_t low = ipow(r, star - 1);
    for (std::size_t y = 0; y < L; ++y) {
        const std::size_t x = (y / (low * r)) * low + y % low;
        d(x, y) = 1;
    }
    return d;
}

Matrix YeBargSpec::s_matrix(std::size_t star) const { return Matrix::block_diag(d_matrix(star), r); }

Matrix YeBargSpec::h_column(std::size_t i, Elem b) const {
    const Field& f = *F;
    const auto diag = a_diagonal(i);
    Matrix h(F, r * L, L);
    for (std::size_t z = 0; z < L; ++z) {
        const Elem base = f.mul(b, diag[z]);
        Elem v = 1;
        for (std::size_t p = 0; p < r; ++p) {
            h(p * L + z, z) = v;
            v = f.mul(v, base);
        }
    }
    return h;
}

FieldPtr default_msr_base_field(std::size_t n, std::size_t k) {
    const std::size_t need = (n - k) * n;
    std::uint32_t w = 1;
    while ((std::uint64_t{1} << w) - 1 < need) ++w;
    return Field::binary(w);
}

YeBargSpec build_yebarg(std::size_t n, std::size_t k, FieldPtr E, FieldPtr F) {
    if (k == 0 || k >= n) throw ProfileError(ProfileErrorKind::Range, "MSR needs 0 < k < n");
    const std::size_t r = n - k;
    if (n > 5 || r > 3)
        throw ProfileError(ProfileErrorKind::Unsupported, "MSR is limited to n <= 5 and r <= 3 (L = r^n)");
    if (!E) E = default_msr_base_field(n, k);
    if (!F) F = E;
    if (E->order() <= r * n)
        throw FieldError(E->name() + " is too small: need more than " + std::to_string(r * n) + " elements");
    YeBargSpec s;
    s.n = n;
    s.k = k;
    s.r = r;
    s.L = ipow(r, n);
    s.E = E;
    s.F = F;
    s.embedding = std::make_shared<Embedding>(E, F);
    s.lambda.assign(n, std::vector<Elem>(r));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t z = 0; z < r; ++z) s.lambda[i][z] = E->exp(i * r + z);
    const std::uint64_t t = (F->order() - 1) / (E->order() - 1);
    s.cosets = coset_reps(*s.embedding, static_cast<std::size_t>(std::min<std::uint64_t>(t, 4096)));
    return s;
}

const char* to_string(CoefficientStrategy s) { return s == CoefficientStrategy::PerRow ? "per-row" : "per-layer"; }

std::size_t per_layer_coefficient_count(const LayerPlan& plan) {
    std::size_t t = 1;
    const auto& tu = plan.profile.tuples;
    for (std::size_t j = 1; j < tu.size(); ++j) t += (tu[j - 1].k - tu[j].k + tu[j].k - 1) / tu[j].k;
    return t;
}

CoefficientTable assign_coefficients(const LayerPlan& plan, CoefficientStrategy strategy) {
    CoefficientTable table;
    table.strategy = strategy;
    const std::size_t rows = plan.total_rows();
    if (strategy == CoefficientStrategy::PerRow) {
        for (std::size_t g = 0; g < rows; ++g) table.row_index.push_back(g);
        table.count = rows;
        return table;
    }
    const auto& tu = plan.profile.tuples;
    std::size_t offset = 0;
    for (std::size_t j = 1; j <= plan.layer_count(); ++j) {
        const auto& geo = plan.layer(j);
        std::size_t c = 1;
        if (j > 1) c = (tu[j - 2].k - tu[j - 1].k + tu[j - 1].k - 1) / tu[j - 1].k;
        for (std::size_t x = 0; x < geo.rows(); ++x) table.row_index.push_back(offset + x % c);
        offset += c;
    }
    table.count = offset;
    return table;
}

MsrRowCode::MsrRowCode(Matrix H, std::size_t L, std::size_t k) : H_(std::move(H)), L_(L), k_(k) {
    const std::size_t len = H_.cols() / L_;
    if (len * L_ != H_.cols() || k_ >= len) throw std::invalid_argument("bad MSR row geometry");
    if (H_.rows() != (len - k_) * L_) throw std::invalid_argument("parity check must have (length - k) L rows");
    const Matrix info = H_.submatrix(0, 0, H_.rows(), k_ * L_);
    const Matrix rest = H_.submatrix(0, k_ * L_, H_.rows(), H_.rows());
    solve_ = negated(inverse(rest) * info);
}

std::vector<Symbol> MsrRowCode::encode(std::span<const Symbol> message) const {
    if (message.size() != k_) throw std::invalid_argument("row message has wrong length");
    for (const auto& s : message)
        for (Elem e : s)
            if (!H_.field()->contains(e)) throw FieldError("message symbol outside " + H_.field()->name());
    const Matrix m = block_vector(H_.field(), message, L_);
    const Matrix rest = solve_ * m;
    std::vector<Symbol> out(message.begin(), message.end());
    for (std::size_t b = 0; b < length() - k_; ++b) out.push_back(column_to_symbol(rest, b * L_, L_));
    return out;
}

std::vector<Symbol> MsrRowCode::decode(std::span<const std::optional<Symbol>> received) const {
    const std::size_t len = length();
    if (received.size() != len) throw std::invalid_argument("received word has wrong length");
    std::vector<std::size_t> known, unknown;
    for (std::size_t i = 0; i < len; ++i) (received[i] ? known : unknown).push_back(i);
    if (known.size() < k_)
        throw DecodeError("only " + std::to_string(known.size()) + " of " + std::to_string(k_) + " blocks known");
    std::vector<Symbol> word(len);
    for (auto i : known) word[i] = *received[i];
    if (!unknown.empty()) {
        std::vector<Matrix> ucols, kcols;
        std::vector<Symbol> kvals;
        for (auto i : unknown) ucols.push_back(H_.block_column(i, L_));
        for (auto i : known) {
            kcols.push_back(H_.block_column(i, L_));
            kvals.push_back(word[i]);
        }
        const Matrix rhs = negated(Matrix::hstack(kcols) * block_vector(H_.field(), kvals, L_));
        Matrix x;
        try {
            x = solve_linear(Matrix::hstack(ucols), rhs);
        } catch (const SingularMatrixError& e) {
            throw DecodeError(e.what());
        }
        for (std::size_t u = 0; u < unknown.size(); ++u) word[unknown[u]] = column_to_symbol(x, u * L_, L_);
    }
    word.resize(k_);
    return word;
}

MsrCode make_flex_msr(const FlexProfile& profile, const CoefficientTable& table, FieldPtr E, FieldPtr F) {
    if (profile.family != Family::Msr) throw ProfileError(ProfileErrorKind::Unsupported, "profile is not MSR");
    MsrCode code;
    code.layered.plan = validate_profile(profile);
    const auto& plan = code.layered.plan;
    if (table.row_index.size() != plan.total_rows()) throw std::invalid_argument("coefficient table size mismatch");
    auto spec = build_yebarg(profile.n, profile.k, std::move(E), std::move(F));
    if (table.count > spec.cosets.reps.size())
        throw FieldError(spec.F->name() + " offers " + std::to_string(spec.cosets.available) + " cosets, need " +
                         std::to_string(table.count));
    code.field = spec.F;
    code.L = spec.L;
    code.r = spec.r;
    for (auto idx : table.row_index) code.coefficient.push_back(spec.cosets.reps.at(idx));
    code.H = assemble_checks(plan, code.coefficient,
                             [&](std::size_t node, Elem b) { return spec.h_column(node + 1, b); });
    for (std::size_t s = 1; s <= profile.n; ++s) code.S.push_back(spec.s_matrix(s));
    code.spec = std::move(spec);
    code.table = table;
    attach_rows(code);
    return code;
}

MsrCode make_flex_msr(const FlexProfile& profile, CoefficientStrategy strategy, FieldPtr E, FieldPtr F) {
    const LayerPlan plan = validate_profile(profile);
    const auto table = assign_coefficients(plan, strategy);
    if (!E) E = default_msr_base_field(profile.n, profile.k);
    if (!F) {
        const std::uint32_t w = E->degree();
        for (std::uint32_t m = 1; w * m <= 32; ++m) {
            const std::uint64_t t = ((std::uint64_t{1} << (w * m)) - 1) / (E->order() - 1);
            if (t >= table.count) {
                F = Field::make(E->characteristic(), w * m);
                break;
            }
        }
        if (!F) throw FieldError("no supported extension has " + std::to_string(table.count) + " cosets");
    }
    return make_flex_msr(profile, table, E, F);
}

Matrix example4_base_h() {
    return Matrix::from_rows(Field::binary(2), {{0, 1, 1, 0, 1, 0, 0, 0},
                                                {1, 1, 1, 1, 0, 1, 0, 0},
                                                {0, 1, 1, 1, 0, 0, 1, 0},
                                                {1, 0, 1, 0, 0, 0, 0, 1}});
}

std::vector<Matrix> example4_repair_matrices() {
    auto f = Field::binary(2);
    return {Matrix::from_rows(f, {{1, 0, 0, 0}, {0, 0, 0, 1}}), Matrix::from_rows(f, {{1, 0, 0, 0}, {0, 0, 1, 0}}),
            Matrix::from_rows(f, {{1, 0, 1, 0}, {0, 1, 1, 0}}), Matrix::from_rows(f, {{0, 1, 1, 0}, {0, 0, 0, 1}})};
}

MsrCode make_example4_code() {
    MsrCode code;
    code.layered.plan = validate_profile(make_profile(Family::Msr, 4, {{3, 2}, {2, 3}}));
    const Matrix base = example4_base_h();
    code.field = base.field();
    code.L = 2;
    code.r = 2;
    const Elem beta = code.field->generator();
    code.coefficient = {1, 1, beta};
    code.H = assemble_checks(code.layered.plan, code.coefficient, [&](std::size_t node, Elem b) {
        Matrix col = base.submatrix(0, node * 2, 4, 2);
        col.set_submatrix(2, 0, col.submatrix(2, 0, 2, 2).scaled(b));
        return col;
    });
    code.S = example4_repair_matrices();
    attach_rows(code);
    return code;
}

MsrRepair msr_repair(const CodewordArray& arr, std::size_t star, const MsrCode& code) {
    const LayerPlan& plan = code.layered.plan;
    const std::size_t n = plan.n();
    const std::size_t L = code.L;
    if (star >= n) throw std::out_of_range("failed node out of range");
    const FieldPtr& f = code.field;
    const Matrix& S = code.S[star];
    MsrRepair out;
    out.per_helper.assign(n, 0);
    out.naive_symbols = plan.profile.k * plan.profile.ell * L;
    out.symbols.assign(plan.total_rows(), Symbol{});

    // contrib[row][node] = S_* h_{row,node} c_{row,node}, rebuilt from the helper's L/r symbols.
    std::vector<std::vector<Matrix>> contrib(plan.total_rows(), std::vector<Matrix>(n));
    for (std::size_t row = plan.total_rows(); row-- > 0;) {
        const Matrix& H = code.H[row];
        for (std::size_t i = 0; i < n; ++i) {
            if (i == star) continue;
            const Matrix T = S * H.block_column(i, L);
            const auto keep = independent_rows(T);
            const Matrix P = T.select_rows(keep);
            const Matrix sent = P * block_vector(f, std::span(&arr.at(row, i), 1), L);
            out.per_helper[i] += P.rows();
            out.symbols_transferred += P.rows();
            const Matrix M = solve_linear(P.transposed(), T.transposed()).transposed();
            contrib[row][i] = M * sent;
        }
        Matrix rhs(f, L, 1);
        for (std::size_t i = 0; i < n; ++i)
            if (i != star) rhs = rhs + contrib[row][i];
        const auto& geo = plan.layer(plan.layer_of_row(row));
        for (std::size_t c = n; c < geo.inner_length; ++c) {
            const std::size_t node = column_node(plan, row, c);
            const std::size_t trow = column_row(plan, row, c);
            if (node != star) {
                rhs = rhs + contrib[trow][node];
            } else {
                const Symbol& rep = out.symbols[trow];
                rhs = rhs + S * H.block_column(c, L) * block_vector(f, std::span(&rep, 1), L);
            }
        }
        const Matrix x = solve_linear(S * H.block_column(star, L), negated(rhs));
        out.symbols[row] = column_to_symbol(x, 0, L);
    }
    return out;
}

AuditReport audit_msr(const MsrCode& code) {
    AuditReport rep;
    const LayerPlan& plan = code.layered.plan;
    const std::size_t n = plan.n();
    const std::size_t L = code.L;
    const std::size_t r = code.r;
    const Field& f = *code.field;
    for (std::size_t row = 0; row < plan.total_rows(); ++row) {
        ++rep.rows_checked;
        const Matrix& H = code.H[row];
        const auto& geo = plan.layer(plan.layer_of_row(row));
        const std::size_t len = geo.inner_length;
        const std::string where = "row " + std::to_string(row + 1);

        std::vector<std::size_t> node(len), owner(len);
        for (std::size_t c = 0; c < len; ++c) {
            node[c] = column_node(plan, row, c);
            owner[c] = column_row(plan, row, c);
        }

        // Condition 1: the coefficients multiplying the same A_i are distinct.
        std::set<std::pair<Elem, std::size_t>> seen;
        for (std::size_t c = 0; c < len; ++c)
            if (!seen.insert({code.coefficient[owner[c]], node[c]}).second) {
                rep.condition1 = false;
                add_violation(rep, where + ": coefficient repeated on A_" + std::to_string(node[c] + 1));
            }

        // Extra-parity columns are copies of their target columns.
        for (std::size_t c = n; c < len; ++c)
            if (!(H.block_column(c, L) == code.H[owner[c]].block_column(node[c], L))) {
                rep.structure = false;
                add_violation(rep, where + ": extra column " + std::to_string(c - n + 1) + " differs from its target");
            }

        if (code.spec) {
            const auto& s = *code.spec;
            for (std::size_t z = 0; z < L; ++z) {
                std::set<Elem> vals;
                for (std::size_t c = 0; c < len; ++c) {
                    const Elem lam = s.embedding->embed(s.lambda[node[c]][s.digit(z, node[c] + 1)]);
                    vals.insert(f.mul(code.coefficient[owner[c]], lam));
                }
                if (vals.size() != len) {
                    rep.vandermonde_distinct = false;
                    add_violation(rep, where + ": repeated evaluation point at z = " + std::to_string(z));
                    break;
                }
            }
        }

        for (std::size_t star = 0; star < n; ++star)
            for (std::size_t c = 0; c < len; ++c) {
                const std::size_t rk = matrix_rank(code.S[star] * H.block_column(c, L));
                const std::size_t want = node[c] == star ? L : L / r;
                if (rk != want) {
                    rep.rank_condition = false;
                    add_violation(rep, where + ": rank(S_" + std::to_string(star + 1) + " h) = " + std::to_string(rk) +
                                           " at column " + std::to_string(c + 1) + ", expected " + std::to_string(want));
                }
            }

        // Every set of `r` erased blocks must be solvable.
        std::vector<bool> pick(len, false);
        std::fill(pick.end() - static_cast<std::ptrdiff_t>(r), pick.end(), true);
        do {
            std::vector<Matrix> cols;
            for (std::size_t c = 0; c < len; ++c)
                if (pick[c]) cols.push_back(H.block_column(c, L));
            ++rep.subsets_checked;
            if (matrix_rank(Matrix::hstack(cols)) != r * L) {
                rep.mds_exhaustive = false;
                std::string set;
                for (std::size_t c = 0; c < len; ++c)
                    if (pick[c]) set += " " + std::to_string(c + 1);
                add_violation(rep, where + ": erasures {" + set + " } not decodable");
            }
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return rep;
}

} // namespace flexcode
