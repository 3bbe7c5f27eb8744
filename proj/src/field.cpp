// SPDX-License-Identifier: Apache-2.0
#include "flexcode/field.hpp"

#include "flexcode/errors.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_map>

namespace flexcode {

const char* to_string(ProfileErrorKind kind) {
    switch (kind) {
    case ProfileErrorKind::Empty: return "empty profile";
    case ProfileErrorKind::Range: return "parameter out of range";
    case ProfileErrorKind::ProductMismatch: return "k_j*l_j != k*l";
    case ProfileErrorKind::NonMonotoneK: return "k_j not strictly decreasing";
    case ProfileErrorKind::NonMonotoneEll: return "l_j not strictly increasing";
    case ProfileErrorKind::FinalLayerMismatch: return "last tuple must equal (k, l)";
    case ProfileErrorKind::ThresholdMismatch: return "recovery threshold mismatch";
    case ProfileErrorKind::Divisibility: return "divisibility requirement violated";
    case ProfileErrorKind::Unsupported: return "unsupported parameters";
    }
    return "profile error";
}

namespace {

constexpr std::uint64_t kTableLimit = 1u << 16;

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t m) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            out.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) out.push_back(m);
    return out;
}

// Multiplication in Z_p[x]/(modulus) on canonical integers. Used to build
// tables and to search for primitive moduli; not on hot paths.
struct PolyRing {
    std::uint32_t p;
    std::uint32_t w;
    std::vector<std::uint32_t> modulus; // monic, size w+1

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        if (p == 2) {
            std::uint64_t mod = 0;
            for (std::uint32_t i = 0; i <= w; ++i)
                if (modulus[i]) mod |= std::uint64_t{1} << i;
            std::uint64_t r = 0;
            // a, b < 2^w with w <= 32: product fits in 64 bits.
            for (std::uint32_t i = 0; i < w; ++i)
                if ((b >> i) & 1) r ^= a << i;
            for (int i = 2 * static_cast<int>(w) - 2; i >= static_cast<int>(w); --i)
                if ((r >> i) & 1) r ^= mod << (i - w);
            return r;
        }
        std::vector<std::uint64_t> da(w), db(w), prod(2 * w, 0);
        for (std::uint32_t i = 0; i < w; ++i) {
            da[i] = a % p;
            a /= p;
            db[i] = b % p;
            b /= p;
        }
        for (std::uint32_t i = 0; i < w; ++i)
            for (std::uint32_t j = 0; j < w; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        for (int i = 2 * static_cast<int>(w) - 2; i >= static_cast<int>(w); --i) {
            std::uint64_t c = prod[i];
            if (!c) continue;
            for (std::uint32_t t = 0; t <= w; ++t)
                prod[i - w + t] = (prod[i - w + t] + (p - c) * modulus[t]) % p;
        }
        std::uint64_t r = 0;
        for (int i = static_cast<int>(w) - 1; i >= 0; --i) r = r * p + prod[i];
        return r;
    }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    // x has multiplicative order exactly p^w - 1 (implies irreducibility).
    bool x_is_primitive(const std::vector<std::uint64_t>& factors) const {
        const std::uint64_t n = ipow(p, w) - 1;
        const std::uint64_t x = p; // canonical integer of the polynomial x
        if (pow(x, n) != 1) return false;
        for (auto f : factors)
            if (pow(x, n / f) == 1) return false;
        return true;
    }
};

std::vector<std::uint32_t> search_primitive_modulus(std::uint32_t p, std::uint32_t w) {
    const std::uint64_t q = ipow(p, w);
    const auto factors = prime_factors(q - 1);
    for (std::uint64_t low = 1; low < q; ++low) {
        if (low % p == 0) continue; // constant term must be nonzero
        std::vector<std::uint32_t> mod(w + 1);
        std::uint64_t v = low;
        for (std::uint32_t i = 0; i < w; ++i) {
            mod[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        mod[w] = 1;
        PolyRing ring{p, w, mod};
        if (ring.x_is_primitive(factors)) return mod;
    }
    throw FieldError("no primitive polynomial found");
}

} // namespace

FieldPtr Field::make(std::uint32_t p, std::uint32_t w) {
    if (!is_prime(p)) throw FieldError("characteristic must be prime");
    if (w == 0) throw FieldError("degree must be positive");
    if (w == 1) return make_with_modulus(p, {0, 1});
    if (p == 2 && w > 32) throw FieldError("binary fields are limited to GF(2^32)");
    if (p != 2) {
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < w && q <= kTableLimit; ++i) q *= p;
        if (q > kTableLimit) throw FieldError("odd-characteristic extensions are limited to 2^16 elements");
    }
    return make_with_modulus(p, search_primitive_modulus(p, w));
}

FieldPtr Field::make_with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus) {
    return FieldPtr(new Field(p, std::move(modulus)));
}

Field::Field(std::uint32_t p, std::vector<std::uint32_t> modulus) : p_(p), modulus_(std::move(modulus)) {
    if (!is_prime(p_)) throw FieldError("characteristic must be prime");
    if (modulus_.size() < 2 || modulus_.back() != 1) throw FieldError("modulus must be monic of degree >= 1");
    for (auto c : modulus_)
        if (c >= p_) throw FieldError("modulus coefficient out of range");
    w_ = static_cast<std::uint32_t>(modulus_.size() - 1);
    if (p_ == 2 && w_ > 32) throw FieldError("binary fields are limited to GF(2^32)");
    if (p_ != 2 && w_ > 1) {
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < w_ && q <= kTableLimit; ++i) q *= p_;
        if (q > kTableLimit) throw FieldError("odd-characteristic extensions are limited to 2^16 elements");
    }
    order_ = ipow(p_, w_);

    if (w_ == 1) {
        if (modulus_[0] != 0) throw FieldError("degree-1 modulus must be x");
        kind_ = Kind::Prime;
        const auto factors = prime_factors(p_ - 1);
        for (Elem g = 1; g < p_; ++g) {
            bool ok = true;
            for (auto f : factors) {
                Elem r = 1, b = g;
                for (std::uint64_t e = (p_ - 1) / f; e; e >>= 1) {
                    if (e & 1) r = r * b % p_;
                    b = b * b % p_;
                }
                if (r == 1) { ok = false; break; }
            }
            if (ok) { prime_generator_ = g; break; }
        }
        return;
    }

    PolyRing ring{p_, w_, modulus_};
    if (order_ <= kTableLimit) {
        kind_ = Kind::Table;
        const std::uint64_t n = order_ - 1;
        log_.assign(order_, 0);
        exp_.assign(2 * n, 0);
        Elem cur = 1;
        for (std::uint64_t i = 0; i < n; ++i) {
            if (i > 0 && cur == 1) throw FieldError("modulus is not primitive");
            exp_[i] = static_cast<std::uint32_t>(cur);
            log_[cur] = static_cast<std::uint32_t>(i);
            cur = ring.mul(cur, p_);
        }
        if (cur != 1) throw FieldError("modulus is not primitive");
        for (std::uint64_t i = n; i < 2 * n; ++i) exp_[i] = exp_[i - n];
        return;
    }
    kind_ = Kind::Binary;
    for (std::uint32_t i = 0; i <= w_; ++i)
        if (modulus_[i]) mod_bits_ |= std::uint64_t{1} << i;
    if (!ring.x_is_primitive(prime_factors(order_ - 1))) throw FieldError("modulus is not primitive");
}

std::string Field::name() const {
    std::ostringstream os;
    os << "GF(" << p_;
    if (w_ > 1) os << "^" << w_;
    os << ")";
    return os.str();
}

Elem Field::add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    if (kind_ == Kind::Prime) return (a + b) % p_;
    Elem r = 0, scale = 1;
    for (std::uint32_t i = 0; i < w_; ++i) {
        r += ((a % p_ + b % p_) % p_) * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return r;
}

Elem Field::neg(Elem a) const {
    if (p_ == 2) return a;
    if (kind_ == Kind::Prime) return (p_ - a % p_) % p_;
    Elem r = 0, scale = 1;
    for (std::uint32_t i = 0; i < w_; ++i) {
        r += ((p_ - a % p_) % p_) * scale;
        a /= p_;
        scale *= p_;
    }
    return r;
}

Elem Field::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Elem Field::mul_binary(Elem a, Elem b) const {
    Elem r = 0;
    while (b) {
        int i = std::countr_zero(b);
        r ^= a << i;
        b &= b - 1;
    }
    for (int i = 2 * static_cast<int>(w_) - 2; i >= static_cast<int>(w_); --i)
        if ((r >> i) & 1) r ^= mod_bits_ << (i - w_);
    return r;
}

Elem Field::mul(Elem a, Elem b) const {
    switch (kind_) {
    case Kind::Prime: return a * b % p_;
    case Kind::Table:
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    case Kind::Binary: return mul_binary(a, b);
    }
    return 0;
}

Elem Field::inv(Elem a) const {
    if (a == 0) throw FieldError("division by zero");
    switch (kind_) {
    case Kind::Prime: return pow(a, p_ - 2);
    case Kind::Table: return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
    case Kind::Binary: return pow(a, order_ - 2);
    }
    return 0;
}

Elem Field::pow(Elem a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (kind_ == Kind::Table) return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % (order_ - 1))) % (order_ - 1)];
    Elem r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::vector<std::uint32_t> Field::digits(Elem a) const {
    std::vector<std::uint32_t> d(w_);
    for (std::uint32_t i = 0; i < w_; ++i) {
        d[i] = static_cast<std::uint32_t>(a % p_);
        a /= p_;
    }
    return d;
}

Elem Field::from_digits(std::span<const std::uint32_t> d) const {
    Elem r = 0;
    for (std::size_t i = d.size(); i-- > 0;) r = r * p_ + d[i] % p_;
    return r;
}

unsigned Field::bit_width() const noexcept { return static_cast<unsigned>(std::bit_width(order_ - 1)); }

FieldElement ff_arith(const FieldElement& a, const FieldElement& b, ArithOp op) {
    if (!a.field || !b.field || !a.field->same_as(*b.field)) throw FieldError("operands belong to different fields");
    const Field& f = *a.field;
    if (!f.contains(a.repr) || !f.contains(b.repr)) throw FieldError("element not reduced");
    switch (op) {
    case ArithOp::Add: return {a.field, f.add(a.repr, b.repr)};
    case ArithOp::Sub: return {a.field, f.sub(a.repr, b.repr)};
    case ArithOp::Mul: return {a.field, f.mul(a.repr, b.repr)};
    case ArithOp::Div:
        if (b.repr == 0) throw FieldError("division by zero");
        return {a.field, f.div(a.repr, b.repr)};
    }
    throw FieldError("unknown operation");
}

Embedding::Embedding(FieldPtr sub, FieldPtr ambient) : sub_(std::move(sub)), ambient_(std::move(ambient)) {
    const Field& E = *sub_;
    const Field& F = *ambient_;
    if (E.characteristic() != F.characteristic()) throw FieldError("subfield characteristic mismatch");
    if (F.degree() % E.degree() != 0) throw FieldError("subfield degree must divide field degree");
    if (E.degree() == 1) {
        powers_ = {1};
        return;
    }
    // Roots of E's modulus lie in the multiplicative subgroup of order |E|-1.
    const Elem theta = F.pow(F.generator(), (F.order() - 1) / (E.order() - 1));
    const auto& m = E.modulus();
    Elem c = 1;
    for (std::uint64_t e = 0; e + 1 < E.order(); ++e, c = F.mul(c, theta)) {
        Elem acc = 0;
        for (std::size_t i = m.size(); i-- > 0;) acc = F.add(F.mul(acc, c), m[i]);
        if (acc == 0) {
            powers_.resize(E.degree());
            powers_[0] = 1;
            for (std::size_t i = 1; i < powers_.size(); ++i) powers_[i] = F.mul(powers_[i - 1], c);
            return;
        }
    }
    throw FieldError("subfield modulus has no root in the ambient field");
}

Elem Embedding::embed(Elem e) const {
    const Field& F = *ambient_;
    const auto d = sub_->digits(e);
    Elem r = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i]) r = F.add(r, F.mul(d[i], powers_[i]));
    return r;
}

bool Embedding::in_subfield(Elem a) const { return ambient_->pow(a, sub_->order()) == a; }

Elem Embedding::project(Elem a) const {
    // |E| is small wherever projection is used; a linear scan keeps the
    // embedding free of cached mutable state.
    for (Elem e = 0; e < sub_->order(); ++e)
        if (embed(e) == a) return e;
    throw FieldError("element is not in the subfield");
}

Elem frobenius(const Field& field, Elem a, std::uint64_t i, std::uint64_t q) {
    for (std::uint64_t t = 0; t < i; ++t) a = field.pow(a, q);
    return a;
}

FieldElement frobenius(const FieldElement& a, std::uint64_t i, std::uint64_t q) {
    const Field& f = *a.field;
    std::uint64_t v = 0, qq = 1;
    while (qq < q) {
        qq *= f.characteristic();
        ++v;
    }
    if (qq != q || v == 0 || f.degree() % v != 0) throw FieldError("q is not the order of a subfield");
    return {a.field, frobenius(f, a.repr, i, q)};
}

std::size_t rank_over_base(std::span<const Elem> elems, const Embedding& base) {
    const Field& F = *base.ambient();
    const std::uint32_t p = F.characteristic();
    // The E-span viewed over GF(p) has dimension v * rank_E.
    std::vector<std::vector<std::uint32_t>> rows;
    for (Elem a : elems) {
        if (!F.contains(a)) throw FieldError("element not in the ambient field");
        for (Elem b : base.basis()) rows.push_back(F.digits(F.mul(a, b)));
    }
    std::size_t rank = 0;
    const std::size_t width = F.degree();
    for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        // inverse of the pivot in GF(p)
        std::uint64_t inv = 1;
        for (std::uint64_t b = rows[rank][col], e = p - 2; e; e >>= 1, b = b * b % p)
            if (e & 1) inv = inv * b % p;
        for (auto& x : rows[rank]) x = static_cast<std::uint32_t>(x * inv % p);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            const std::uint64_t c = rows[r][col];
            for (std::size_t t = 0; t < width; ++t)
                rows[r][t] = static_cast<std::uint32_t>((rows[r][t] + (p - c) * rows[rank][t]) % p);
        }
        ++rank;
    }
    return rank / base.sub()->degree();
}

CosetPartition coset_reps(const Embedding& emb, std::size_t count) {
    const Field& F = *emb.ambient();
    CosetPartition part{emb.ambient(), emb.sub(), (F.order() - 1) / (emb.sub_order() - 1), {}};
    if (count > part.available) throw FieldError("not enough cosets of E* in F*");
    part.reps.reserve(count);
    // E* is the subgroup generated by g^t, so g^0, ..., g^(t-1) hit distinct cosets.
    for (std::size_t i = 0; i < count; ++i) part.reps.push_back(F.exp(i));
    return part;
}

} // namespace flexcode
