// SPDX-License-Identifier: Apache-2.0
//
// Finite field arithmetic: prime fields GF(p), small extensions GF(p^w)
// with |F| <= 2^16 (log/antilog tables) and binary extensions GF(2^w),
// w <= 32, with carry-less multiplication. Elements are canonical integers
// sum_i c_i p^i where c_i is the coefficient of x^i in the polynomial basis.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace flexcode {

using Elem = std::uint64_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
public:
    /// Canonical field of order p^w. The modulus is the smallest primitive
    /// polynomial (by canonical integer value), so x is always a generator.
    static FieldPtr make(std::uint32_t p, std::uint32_t w);

    /// Field with an explicit monic modulus, coefficients low to high
    /// (size w+1). The modulus must be primitive.
    static FieldPtr make_with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus);

    /// GF(2^w) shorthand.
    static FieldPtr binary(std::uint32_t w) { return make(2, w); }

    std::uint32_t characteristic() const noexcept { return p_; }
    std::uint32_t degree() const noexcept { return w_; }
    std::uint64_t order() const noexcept { return order_; }
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }
    std::string name() const;

    bool same_as(const Field& other) const noexcept {
        return p_ == other.p_ && modulus_ == other.modulus_;
    }

    Elem zero() const noexcept { return 0; }
    Elem one() const noexcept { return 1; }
    /// The class x of the polynomial basis; a primitive element.
    Elem generator() const noexcept { return w_ == 1 ? prime_generator_ : p_; }

    bool contains(Elem a) const noexcept { return a < order_; }

    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const;

    /// generator()^e, e taken modulo |F*|.
    Elem exp(std::uint64_t e) const { return pow(generator(), e % (order_ - 1)); }

    /// Coefficients of a in the polynomial basis over GF(p).
    std::vector<std::uint32_t> digits(Elem a) const;
    Elem from_digits(std::span<const std::uint32_t> digits) const;

    /// Bits needed to store one element.
    unsigned bit_width() const noexcept;

private:
    enum class Kind { Prime, Table, Binary };

    Field(std::uint32_t p, std::vector<std::uint32_t> modulus);

    Elem mul_poly(Elem a, Elem b) const;
    Elem mul_binary(Elem a, Elem b) const;

    std::uint32_t p_;
    std::uint32_t w_;
    std::uint64_t order_;
    std::vector<std::uint32_t> modulus_;
    Kind kind_;
    std::uint64_t mod_bits_ = 0;
    Elem prime_generator_ = 0;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> exp_;
};

/// An element bound to its field; the checked surface used by tools and tests.
struct FieldElement {
    FieldPtr field;
    Elem repr = 0;

    bool operator==(const FieldElement& o) const {
        return field->same_as(*o.field) && repr == o.repr;
    }
};

enum class ArithOp { Add, Sub, Mul, Div };

/// Checked field operation. Throws FieldError on field mismatch or on
/// division by zero.
FieldElement ff_arith(const FieldElement& a, const FieldElement& b, ArithOp op);

/// Explicit embedding of a subfield E = GF(p^v) into F = GF(p^w), v | w.
/// The image of E's generator is stored together with its first v powers,
/// so embed() is a coordinate map and never relies on integer coincidence.
class Embedding {
public:
    Embedding(FieldPtr sub, FieldPtr ambient);

    const FieldPtr& sub() const noexcept { return sub_; }
    const FieldPtr& ambient() const noexcept { return ambient_; }
    /// |E|
    std::uint64_t sub_order() const noexcept { return sub_->order(); }

    Elem embed(Elem e) const;
    /// Inverse of embed() on the image; throws FieldError otherwise.
    Elem project(Elem a) const;
    bool in_subfield(Elem a) const;
    /// Images of 1, g, ..., g^{v-1} where g generates E: a GF(p)-basis of E inside F.
    const std::vector<Elem>& basis() const noexcept { return powers_; }

private:
    FieldPtr sub_;
    FieldPtr ambient_;
    std::vector<Elem> powers_;
};

/// a^(q^i), with q = |E| for the embedded subfield E.
Elem frobenius(const Field& field, Elem a, std::uint64_t i, std::uint64_t q);

/// Checked variant: q must be the order of a subfield of a's field.
FieldElement frobenius(const FieldElement& a, std::uint64_t i, std::uint64_t q);

/// Dimension of the E-span of elems inside F.
std::size_t rank_over_base(std::span<const Elem> elems, const Embedding& base);

struct CosetPartition {
    FieldPtr ambient;
    FieldPtr base;
    std::uint64_t available = 0; // t = |F*| / |E*|
    std::vector<Elem> reps;      // beta_1 = 1, beta_2, ...
};

/// `count` representatives of distinct cosets beta*E^* in F^*. The i-th
/// representative is g^(i-1) for the generator g of F.
CosetPartition coset_reps(const Embedding& emb, std::size_t count);

} // namespace flexcode
