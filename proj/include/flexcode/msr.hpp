// SPDX-License-Identifier: Apache-2.0
//
// Flexible MSR vector codes. Every row g has an rL x (n+e)L parity-check
// matrix H_g = [h_{g,1} .. h_{g,n} | g_{g,1} .. g_{g,e}] whose extra-parity
// columns are copies of the columns of the lower-layer rows they feed.
// With Ye-Barg matrices, h_{g,i} = [I; b A_i; ...; b^{r-1} A_i^{r-1}] where
// b is the row's additional coefficient (a coset representative of E* in F*).
// A single failed node * is repaired with S_* applied to every row's checks;
// each helper sends L/r symbols per row.

#pragma once

#include "flexcode/layered.hpp"
#include "flexcode/linalg.hpp"

#include <optional>
#include <string>

namespace flexcode {

struct YeBargSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t r = 0;
    std::size_t L = 0;
    FieldPtr E;
    FieldPtr F;
    std::shared_ptr<const Embedding> embedding;
    std::vector<std::vector<Elem>> lambda; // n x r, elements of E
    CosetPartition cosets;

    /// digit i (1-based node) of z in base r.
    std::size_t digit(std::size_t z, std::size_t i) const;
    /// Diagonal of A_i (1-based), embedded in F.
    std::vector<Elem> a_diagonal(std::size_t i) const;
    /// (L/r) x L 0/1 matrix: (x, y) = 1 iff y with digit * deleted equals x.
    Matrix d_matrix(std::size_t star) const;
    /// L x rL block-diagonal Diag(D_*, ..., D_*).
    Matrix s_matrix(std::size_t star) const;
    /// rL x L column [I; b A_i; ...; b^{r-1} A_i^{r-1}] over F.
    Matrix h_column(std::size_t i, Elem b) const;
};

/// Smallest binary field with more than r*n elements.
FieldPtr default_msr_base_field(std::size_t n, std::size_t k);

/// Builds lambda, the cosets of E* in F* (all of them) and the matrices.
/// Throws FieldError if |E| <= rn or F does not extend E, and
/// ProfileError(Unsupported) beyond n <= 5, r <= 3.
YeBargSpec build_yebarg(std::size_t n, std::size_t k, FieldPtr E, FieldPtr F);

enum class CoefficientStrategy { PerRow, PerLayer };

const char* to_string(CoefficientStrategy s);

/// Coset representative index per global row.
struct CoefficientTable {
    CoefficientStrategy strategy = CoefficientStrategy::PerLayer;
    std::vector<std::size_t> row_index;
    std::size_t count = 0; // number of distinct representatives used
};

/// 1 + sum_{j>=2} ceil((k_{j-1} - k_j) / k_j).
std::size_t per_layer_coefficient_count(const LayerPlan& plan);

CoefficientTable assign_coefficients(const LayerPlan& plan, CoefficientStrategy strategy);

class MsrRowCode : public RowCodec {
public:
    /// Message = the first k blocks; the last length-k blocks are solved from H.
    MsrRowCode(Matrix H, std::size_t L, std::size_t k);

    std::size_t length() const override { return H_.cols() / L_; }
    std::size_t dimension() const override { return k_; }
    std::size_t symbol_width() const override { return L_; }
    std::vector<Symbol> encode(std::span<const Symbol> message) const override;
    std::vector<Symbol> decode(std::span<const std::optional<Symbol>> received) const override;

    const Matrix& parity_check() const noexcept { return H_; }

private:
    Matrix H_;
    std::size_t L_;
    std::size_t k_;
    Matrix solve_; // -H_rest^{-1} H_info
};

struct MsrCode {
    LayeredCode layered;
    FieldPtr field;
    std::size_t L = 0;
    std::size_t r = 0;
    std::vector<Matrix> H;             // per global row
    std::vector<Matrix> S;             // per node, L x rL
    std::vector<Elem> coefficient;     // per global row, in F
    std::optional<YeBargSpec> spec;    // absent for literal fixtures
    std::optional<CoefficientTable> table;
};

/// Ye-Barg flexible MSR code. F defaults to the smallest extension of E with
/// enough cosets for the chosen strategy.
MsrCode make_flex_msr(const FlexProfile& profile, CoefficientStrategy strategy = CoefficientStrategy::PerLayer,
                      FieldPtr E = nullptr, FieldPtr F = nullptr);

/// Same, with an explicit coefficient table (for fault injection).
MsrCode make_flex_msr(const FlexProfile& profile, const CoefficientTable& table, FieldPtr E, FieldPtr F);

/// The (4,2,3) code over GF(4), L = 2, with the literal H and S_1..S_4.
MsrCode make_example4_code();

/// The literal (4,2) parity-check matrix of the fixture, 4 x 8 over GF(4).
Matrix example4_base_h();

/// Literal repair matrices of the fixture, 2 x 4 each.
std::vector<Matrix> example4_repair_matrices();

struct MsrRepair {
    std::vector<Symbol> symbols;          // node * contents, one block per row
    std::size_t symbols_transferred = 0;  // field symbols sent by helpers
    std::size_t naive_symbols = 0;        // k * l * L
    std::vector<std::size_t> per_helper;  // symbols sent, indexed by node
};

/// Repairs node `star` from the other n-1 nodes of `arr`. Helpers send
/// P * c where P spans the rows of S_* h; extra-parity terms are taken from
/// the lower rows' repair.
MsrRepair msr_repair(const CodewordArray& arr, std::size_t star, const MsrCode& code);

struct AuditReport {
    bool vandermonde_distinct = true; // vacuous for literal fixtures
    bool mds_exhaustive = true;
    bool rank_condition = true;
    bool condition1 = true;
    bool structure = true;
    std::size_t rows_checked = 0;
    std::size_t subsets_checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return vandermonde_distinct && mds_exhaustive && rank_condition && condition1 && structure; }
};

AuditReport audit_msr(const MsrCode& code);

} // namespace flexcode
