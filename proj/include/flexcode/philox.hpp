// SPDX-License-Identifier: Apache-2.0
//
// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A stream is
// identified by its 64-bit key; the 128-bit counter advances per block of
// four outputs, so (seed, stream) pairs give independent, reproducible draws.

#pragma once

#include <array>
#include <cstdint>

namespace flexcode {

class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    static Block bijection(Block ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return 0xFFFFFFFFu; }

    result_type operator()() {
        if (idx_ == 4) {
            buf_ = bijection(ctr_, key_);
            if (++ctr_[0] == 0) ++ctr_[1];
            idx_ = 0;
        }
        return buf_[idx_++];
    }

    /// Uniform double in (0, 1) with 53 random bits.
    double uniform() {
        const std::uint64_t hi = (*this)() >> 5;
        const std::uint64_t lo = (*this)() >> 6;
        return (static_cast<double>(hi * 67108864u + lo) + 0.5) / 9007199254740992.0;
    }

private:
    Key key_;
    Block ctr_;
    Block buf_{};
    int idx_ = 4;
};

} // namespace flexcode
