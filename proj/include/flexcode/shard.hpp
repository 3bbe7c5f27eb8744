// SPDX-License-Identifier: Apache-2.0
//
// Shard file format. All integers are big-endian.
//
//   "FLXC"            4 bytes magic
//   version           u16 (= 1)
//   family            u8  (0 MDS, 1 LRC, 2 PMDS, 3 MSR)
//   reserved          u8  (= 0)
//   n, k, ell         u32 each
//   tuple count a     u32, then a x (R, k, ell) as u32
//   locality          u32
//   symbol erasures   u32
//   p, w              u32 each, then w + 1 modulus coefficients as u32
//   node index        u32
//   block width L     u32 (1 for scalar codes)
//   stripes           u32
//   payload length    u64 (bytes)
//   payload crc32     u32
//   header crc32      u32 over every preceding header byte
//
// The payload holds the node's column for each stripe in turn: ell symbols
// top to bottom, each a block of L field elements, each element stored in
// ceil(bits / 8) bytes.

#pragma once

#include "flexcode/field.hpp"
#include "flexcode/layered.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace flexcode {

inline constexpr std::uint16_t kShardVersion = 1;

struct FieldSpec {
    std::uint32_t p = 2;
    std::uint32_t w = 8;
    std::vector<std::uint32_t> modulus; // low to high, size w + 1

    static FieldSpec of(const Field& f);
    FieldPtr make() const;
    bool operator==(const FieldSpec&) const = default;
};

/// Bytes per stored field element.
std::size_t element_bytes(const Field& f);

struct ShardHeader {
    std::uint16_t version = kShardVersion;
    FlexProfile profile;
    FieldSpec field;
    std::uint32_t node = 0;
    std::uint32_t block = 1;
    std::uint32_t stripes = 0;
    std::uint64_t payload_length = 0;
    std::uint32_t payload_crc = 0;
    bool operator==(const ShardHeader&) const = default;
};

struct Shard {
    ShardHeader header;
    std::vector<std::uint8_t> payload;
};

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

/// Serializes header and payload, filling payload_length and payload_crc.
std::vector<std::uint8_t> serialize_shard(const Shard& shard);

/// Parses and verifies a shard. Throws IoError on truncation, bad magic,
/// unknown version or checksum mismatch.
Shard parse_shard(std::span<const std::uint8_t> bytes);

void write_shard(const std::filesystem::path& path, const Shard& shard);
Shard read_shard(const std::filesystem::path& path);

/// Payload bytes of a node column (stripes x ell symbols) and back.
std::vector<std::uint8_t> pack_symbols(std::span<const Symbol> symbols, const Field& field);
std::vector<Symbol> unpack_symbols(std::span<const std::uint8_t> bytes, std::size_t block, const Field& field);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace flexcode
