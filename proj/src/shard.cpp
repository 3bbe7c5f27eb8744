// SPDX-License-Identifier: Apache-2.0
#include "flexcode/shard.hpp"

#include "flexcode/errors.hpp"

#include <boost/crc.hpp>

#include <fstream>
#include <iterator>

namespace flexcode {

namespace {

constexpr std::uint8_t kMagic[4] = {'F', 'L', 'X', 'C'};
constexpr std::uint32_t kMaxCount = 1u << 20; // sanity bound on decoded counts

class Writer {
public:
    std::vector<std::uint8_t> out;
    void u8(std::uint8_t v) { out.push_back(v); }
    void be(std::uint64_t v, int bytes) {
        for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u16(std::uint16_t v) { be(v, 2); }
    void u32(std::uint64_t v) {
        if (v > 0xFFFFFFFFu) throw IoError("value does not fit the shard header");
        be(v, 4);
    }
    void u64(std::uint64_t v) { be(v, 8); }
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
    std::size_t pos() const { return pos_; }
    std::uint64_t be(int bytes) {
        if (pos_ + static_cast<std::size_t>(bytes) > b_.size()) throw IoError("shard truncated");
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i) v = (v << 8) | b_[pos_++];
        return v;
    }
    std::uint8_t u8() { return static_cast<std::uint8_t>(be(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(be(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(be(4)); }
    std::uint64_t u64() { return be(8); }
    std::uint32_t count() {
        const auto v = u32();
        if (v > kMaxCount) throw IoError("shard header field out of range");
        return v;
    }

private:
    std::span<const std::uint8_t> b_;
    std::size_t pos_ = 0;
};

std::uint8_t family_tag(Family f) {
    switch (f) {
    case Family::Mds: return 0;
    case Family::Lrc: return 1;
    case Family::Pmds: return 2;
    case Family::Msr: return 3;
    }
    return 0xFF;
}

Family family_of_tag(std::uint8_t t) {
    switch (t) {
    case 0: return Family::Mds;
    case 1: return Family::Lrc;
    case 2: return Family::Pmds;
    case 3: return Family::Msr;
    }
    throw IoError("unknown family tag " + std::to_string(t));
}

} // namespace

FieldSpec FieldSpec::of(const Field& f) { return {f.characteristic(), f.degree(), f.modulus()}; }

FieldPtr FieldSpec::make() const {
    if (modulus.empty()) return Field::make(p, w);
    if (modulus.size() != static_cast<std::size_t>(w) + 1) throw FieldError("modulus degree does not match w");
    return Field::make_with_modulus(p, modulus);
}

std::size_t element_bytes(const Field& f) { return (f.bit_width() + 7) / 8; }

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    return crc.checksum();
}

std::vector<std::uint8_t> serialize_shard(const Shard& shard) {
    const auto& h = shard.header;
    const auto& p = h.profile;
    Writer w;
    for (auto c : kMagic) w.u8(c);
    w.u16(h.version);
    w.u8(family_tag(p.family));
    w.u8(0);
    w.u32(p.n);
    w.u32(p.k);
    w.u32(p.ell);
    w.u32(p.tuples.size());
    for (const auto& t : p.tuples) {
        w.u32(t.R);
        w.u32(t.k);
        w.u32(t.ell);
    }
    w.u32(p.locality);
    w.u32(p.symbol_erasures);
    w.u32(h.field.p);
    w.u32(h.field.w);
    if (h.field.modulus.size() != static_cast<std::size_t>(h.field.w) + 1)
        throw IoError("field modulus must have w + 1 coefficients");
    for (auto c : h.field.modulus) w.u32(c);
    w.u32(h.node);
    w.u32(h.block);
    w.u32(h.stripes);
    w.u64(shard.payload.size());
    w.u32(crc32(shard.payload));
    w.u32(crc32(w.out));
    w.out.insert(w.out.end(), shard.payload.begin(), shard.payload.end());
    return w.out;
}

Shard parse_shard(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    for (auto c : kMagic)
        if (r.u8() != c) throw IoError("bad shard magic");
    Shard s;
    auto& h = s.header;
    h.version = r.u16();
    if (h.version != kShardVersion) throw IoError("unsupported shard version " + std::to_string(h.version));
    auto& p = h.profile;
    p.family = family_of_tag(r.u8());
    r.u8();
    p.n = r.count();
    p.k = r.count();
    p.ell = r.count();
    const auto a = r.count();
    for (std::uint32_t i = 0; i < a; ++i) {
        LayerTuple t;
        t.R = r.count();
        t.k = r.count();
        t.ell = r.count();
        p.tuples.push_back(t);
    }
    p.locality = r.count();
    p.symbol_erasures = r.count();
    h.field.p = r.u32();
    h.field.w = r.count();
    for (std::uint32_t i = 0; i <= h.field.w; ++i) h.field.modulus.push_back(r.u32());
    h.node = r.count();
    h.block = r.count();
    h.stripes = r.count();
    h.payload_length = r.u64();
    h.payload_crc = r.u32();
    const std::size_t header_end = r.pos();
    const auto header_crc = r.u32();
    if (crc32(bytes.first(header_end)) != header_crc) throw IoError("shard header checksum mismatch");
    if (bytes.size() - r.pos() != h.payload_length) throw IoError("shard payload length mismatch");
    s.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(r.pos()), bytes.end());
    if (crc32(s.payload) != h.payload_crc) throw IoError("shard payload checksum mismatch");
    return s;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("cannot read " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("cannot write " + path.string());
}

void write_shard(const std::filesystem::path& path, const Shard& shard) { write_file(path, serialize_shard(shard)); }

Shard read_shard(const std::filesystem::path& path) {
    try {
        return parse_shard(read_file(path));
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

std::vector<std::uint8_t> pack_symbols(std::span<const Symbol> symbols, const Field& field) {
    const std::size_t eb = element_bytes(field);
    std::vector<std::uint8_t> out;
    for (const auto& s : symbols)
        for (Elem e : s) {
            if (!field.contains(e)) throw FieldError("symbol element outside " + field.name());
            for (std::size_t i = eb; i-- > 0;) out.push_back(static_cast<std::uint8_t>(e >> (8 * i)));
        }
    return out;
}

std::vector<Symbol> unpack_symbols(std::span<const std::uint8_t> bytes, std::size_t block, const Field& field) {
    const std::size_t eb = element_bytes(field);
    if (block == 0 || bytes.size() % (eb * block) != 0) throw IoError("payload is not a whole number of symbols");
    std::vector<Symbol> out;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        Symbol s(block);
        for (auto& e : s) {
            e = 0;
            for (std::size_t i = 0; i < eb; ++i) e = (e << 8) | bytes[pos++];
            if (!field.contains(e)) throw IoError("payload element outside the field");
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace flexcode
